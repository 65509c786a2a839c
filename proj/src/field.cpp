#include "trank/field.hpp"

#include "trank/error.hpp"

#include <cctype>
#include <string>

namespace trank {

namespace {

bool is_prime_number(std::uint32_t n)
{
    if (n < 2)
        return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

std::uint32_t reduce(long long v, std::uint32_t p)
{
    long long r = v % static_cast<long long>(p);
    if (r < 0)
        r += p;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p)
{
    std::uint64_t result = 1;
    base %= p;
    while (exp > 0) {
        if (exp & 1)
            result = result * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

} // namespace

Field Field::prime(std::uint32_t p)
{
    if (p >= (1u << 16))
        throw PreconditionError("prime field modulus must be below 2^16, got " + std::to_string(p));
    if (!is_prime_number(p))
        throw PreconditionError(std::to_string(p) + " is not prime");
    return Field(FieldKind::prime, p);
}

std::string Field::name() const
{
    if (kind_ == FieldKind::rationals)
        return "Q";
    return "GF(" + std::to_string(modulus_) + ")";
}

Field parse_field(std::string_view text)
{
    std::string t;
    for (char c : text)
        if (c != '(' && c != ')')
            t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "q")
        return Field::rationals();
    if (t.size() > 2 && t.compare(0, 2, "gf") == 0) {
        std::uint32_t p = 0;
        for (std::size_t i = 2; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                throw PreconditionError("bad field name: " + std::string(text));
            p = p * 10 + static_cast<std::uint32_t>(t[i] - '0');
            if (p >= (1u << 16))
                throw PreconditionError("prime field modulus must be below 2^16");
        }
        return Field::prime(p);
    }
    throw PreconditionError("bad field name: " + std::string(text));
}

void require_same_field(const Field &a, const Field &b)
{
    if (!(a == b))
        throw FieldMismatch("field mismatch: " + a.name() + " vs " + b.name());
}

Scalar::Scalar(Field f, long long value) : field_(f)
{
    if (f.is_prime())
        value_ = reduce(value, f.modulus());
    else
        value_ = mpq_class(static_cast<long>(value));
}

Scalar::Scalar(Field f, mpq_class value) : field_(f)
{
    if (f.is_prime()) {
        value.canonicalize();
        mpz_class p = f.modulus();
        mpz_class num = value.get_num() % p;
        if (num < 0)
            num += p;
        mpz_class den = value.get_den() % p;
        if (den == 0)
            throw std::domain_error("denominator vanishes in " + f.name());
        std::uint32_t n = static_cast<std::uint32_t>(num.get_ui());
        std::uint32_t d = static_cast<std::uint32_t>(den.get_ui());
        value_ = static_cast<std::uint32_t>(
            static_cast<std::uint64_t>(n) * pow_mod(d, f.modulus() - 2, f.modulus()) % f.modulus());
    } else {
        value.canonicalize();
        value_ = std::move(value);
    }
}

Scalar Scalar::from_residue(Field f, std::uint32_t r)
{
    if (!f.is_prime())
        throw UnsupportedField("residues exist only in prime fields");
    if (r >= f.modulus())
        throw PreconditionError("residue " + std::to_string(r) + " out of range for " + f.name());
    return Scalar(f, static_cast<long long>(r));
}

Scalar Scalar::parse(Field f, std::string_view text)
{
    std::string s(text);
    if (f.is_prime()) {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size())
            throw PreconditionError("bad integer: " + s);
        return Scalar(f, v);
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw PreconditionError("bad rational: " + s);
    return Scalar(f, std::move(q));
}

bool Scalar::is_zero() const
{
    if (field_.is_prime())
        return std::get<std::uint32_t>(value_) == 0;
    return sgn(std::get<mpq_class>(value_)) == 0;
}

bool Scalar::is_one() const
{
    if (field_.is_prime())
        return std::get<std::uint32_t>(value_) == 1;
    return std::get<mpq_class>(value_) == 1;
}

std::uint32_t Scalar::residue() const
{
    if (!field_.is_prime())
        throw UnsupportedField("residue() on a rational scalar");
    return std::get<std::uint32_t>(value_);
}

const mpq_class &Scalar::rational() const
{
    if (field_.is_prime())
        throw UnsupportedField("rational() on a prime-field scalar");
    return std::get<mpq_class>(value_);
}

Scalar Scalar::operator+(const Scalar &o) const
{
    require_same_field(field_, o.field_);
    if (field_.is_prime()) {
        std::uint32_t p = field_.modulus();
        std::uint32_t s = std::get<std::uint32_t>(value_) + std::get<std::uint32_t>(o.value_);
        return from_residue(field_, s >= p ? s - p : s);
    }
    return Scalar(field_, mpq_class(std::get<mpq_class>(value_) + std::get<mpq_class>(o.value_)));
}

Scalar Scalar::operator-(const Scalar &o) const
{
    return *this + (-o);
}

Scalar Scalar::operator*(const Scalar &o) const
{
    require_same_field(field_, o.field_);
    if (field_.is_prime()) {
        std::uint64_t m = static_cast<std::uint64_t>(std::get<std::uint32_t>(value_)) *
                          std::get<std::uint32_t>(o.value_);
        return from_residue(field_, static_cast<std::uint32_t>(m % field_.modulus()));
    }
    return Scalar(field_, mpq_class(std::get<mpq_class>(value_) * std::get<mpq_class>(o.value_)));
}

Scalar Scalar::operator/(const Scalar &o) const
{
    return *this * o.inverse();
}

Scalar Scalar::operator-() const
{
    if (field_.is_prime()) {
        std::uint32_t v = std::get<std::uint32_t>(value_);
        return from_residue(field_, v == 0 ? 0 : field_.modulus() - v);
    }
    return Scalar(field_, mpq_class(-std::get<mpq_class>(value_)));
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero");
    if (field_.is_prime()) {
        std::uint32_t p = field_.modulus();
        return from_residue(field_, pow_mod(std::get<std::uint32_t>(value_), p - 2, p));
    }
    return Scalar(field_, mpq_class(1 / std::get<mpq_class>(value_)));
}

bool Scalar::operator==(const Scalar &o) const
{
    return field_ == o.field_ && value_ == o.value_;
}

std::string Scalar::to_string() const
{
    if (field_.is_prime())
        return std::to_string(std::get<std::uint32_t>(value_));
    return std::get<mpq_class>(value_).get_str();
}

} // namespace trank
