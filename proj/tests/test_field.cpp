#include <doctest.h>

#include <random>

#include "trank/error.hpp"
#include "trank/field.hpp"

using namespace trank;

TEST_CASE("prime field construction")
{
    CHECK(Field::prime(2).modulus() == 2);
    CHECK(Field::prime(65521).name() == "GF(65521)");
    CHECK_THROWS_AS(Field::prime(1), PreconditionError);
    CHECK_THROWS_AS(Field::prime(4), PreconditionError);
    CHECK_THROWS_AS(Field::prime(91), PreconditionError);
    CHECK_THROWS_AS(Field::prime(65537), PreconditionError);
    CHECK(Field::rationals().name() == "Q");
}

TEST_CASE("field descriptors parse and compare")
{
    CHECK(parse_field("gf5") == Field::prime(5));
    CHECK(parse_field("GF(5)") == Field::prime(5));
    CHECK(parse_field("q") == Field::rationals());
    CHECK(parse_field("Q") == Field::rationals());
    CHECK_THROWS(parse_field("gf6"));
    CHECK_THROWS(parse_field("r"));
    CHECK_FALSE(Field::prime(3) == Field::prime(5));
    CHECK_THROWS_AS(Scalar(Field::prime(3), 1) + Scalar(Field::prime(5), 1), FieldMismatch);
    CHECK_THROWS_AS(Scalar(Field::prime(3), 1) * Scalar(Field::rationals(), 1), FieldMismatch);
}

TEST_CASE("rationals are kept normalized")
{
    Field q = Field::rationals();
    CHECK(Scalar(q, mpq_class(2, 4)).to_string() == "1/2");
    CHECK(Scalar(q, mpq_class(3, -6)).to_string() == "-1/2");
    CHECK(Scalar(q, 0).rational().get_den() == 1);
    Scalar x = Scalar(q, mpq_class(1, 3)) + Scalar(q, mpq_class(1, 6));
    CHECK(x.to_string() == "1/2");
    CHECK(x.rational().get_den() > 0);
    CHECK(Scalar::parse(q, "-4/6").to_string() == "-2/3");
    CHECK(Scalar::parse(q, "7").to_string() == "7");
    CHECK_THROWS(Scalar::parse(q, "1/0"));
    CHECK_THROWS(Scalar::parse(q, "abc"));
}

TEST_CASE("prime field values are residues")
{
    Field f = Field::prime(5);
    CHECK(Scalar(f, -1).residue() == 4);
    CHECK(Scalar(f, 12).residue() == 2);
    CHECK(Scalar(f, mpq_class(1, 2)).residue() == 3);
    CHECK_THROWS(Scalar(f, mpq_class(1, 5)));
    CHECK(Scalar(f, 2).inverse().residue() == 3);
    CHECK_THROWS(Scalar::zero(f).inverse());
    CHECK_THROWS(Scalar::parse(f, "x"));
    CHECK(Scalar::parse(f, "7").residue() == 2);
}

namespace {

Scalar draw(const Field &f, std::mt19937_64 &rng)
{
    if (f.is_prime())
        return Scalar(f, static_cast<long long>(rng() % f.modulus()));
    long num = static_cast<long>(rng() % 2001) - 1000;
    long den = static_cast<long>(rng() % 97) + 1;
    return Scalar(f, mpq_class(num, den));
}

} // namespace

TEST_CASE("field axioms on random triples")
{
    std::mt19937_64 rng(2024);
    for (Field f : {Field::prime(2), Field::prime(3), Field::prime(5), Field::prime(65521),
                    Field::rationals()}) {
        CAPTURE(f.name());
        for (int trial = 0; trial < 10000; ++trial) {
            Scalar a = draw(f, rng), b = draw(f, rng), c = draw(f, rng);
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE((a + (-a)).is_zero());
            REQUIRE(a - b == a + (-b));
            if (!a.is_zero()) {
                REQUIRE((a * a.inverse()).is_one());
                REQUIRE((b / a) * a == b);
            }
        }
    }
}

TEST_CASE("prime field arithmetic matches integer arithmetic mod p")
{
    std::mt19937_64 rng(7);
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 251u, 65521u}) {
        Field f = Field::prime(p);
        for (int trial = 0; trial < 2000; ++trial) {
            std::uint64_t x = rng() % p, y = rng() % p;
            Scalar a(f, static_cast<long long>(x)), b(f, static_cast<long long>(y));
            REQUIRE((a + b).residue() == (x + y) % p);
            REQUIRE((a - b).residue() == (x + p - y) % p);
            REQUIRE((a * b).residue() == x * y % p);
        }
    }
}
