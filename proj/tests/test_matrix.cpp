#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "trank/error.hpp"
#include "trank/matrix.hpp"

using namespace trank;

namespace {

const Field gf2 = Field::prime(2);
const Field gf3 = Field::prime(3);
const Field gf5 = Field::prime(5);
const Field qq = Field::rationals();

Matrix permute_rows(const Matrix &m, const std::vector<std::size_t> &perm)
{
    Matrix out(m.field(), m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = m(perm[i], j);
    return out;
}

} // namespace

TEST_CASE("rank of trivial matrices")
{
    CHECK(matrix_rank(Matrix::identity(gf2, 2)) == 2);
    CHECK(matrix_rank(Matrix(gf3, 3, 3)) == 0);
    CHECK(matrix_rank(Matrix::from_ints(qq, 2, 3, {1, 2, 3, 2, 4, 6})) == 1);
}

TEST_CASE("rank of the hook pattern over GF(5) agrees with minor enumeration")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix m(gf5, 4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i == 0 || j < 2)
                    m(i, j) = oracle::random_scalar(gf5, rng);
        std::size_t r = matrix_rank(m);
        CHECK(r == oracle::minor_rank(m));
        CHECK(r <= 3);
    }
}

TEST_CASE("rank agrees with minor enumeration on random matrices")
{
    std::mt19937_64 rng(12);
    for (Field f : {gf2, gf3, gf5, qq}) {
        CAPTURE(f.name());
        for (int trial = 0; trial < 300; ++trial) {
            std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
            Matrix m = oracle::random_matrix(f, r, c, rng);
            if (f.is_prime() && rng() % 3 == 0) // force dependent rows
                for (std::size_t j = 0; j < c; ++j)
                    m(r - 1, j) = m(0, j) + m(r / 2, j);
            std::size_t rk = matrix_rank(m);
            REQUIRE(rk == oracle::minor_rank(m));
            REQUIRE(rk == matrix_rank(m.transpose()));
            REQUIRE(rk <= std::min(r, c));
            std::vector<std::size_t> perm(r);
            std::iota(perm.rbegin(), perm.rend(), 0);
            REQUIRE(rk == matrix_rank(permute_rows(m, perm)));
            REQUIRE(rk == matrix_rank(permute_rows(m.transpose(), std::vector<std::size_t>(
                                          [&] {
                                              std::vector<std::size_t> p(c);
                                              std::iota(p.rbegin(), p.rend(), 0);
                                              return p;
                                          }()))));
        }
    }
}

TEST_CASE("rref is reduced with unit pivots")
{
    std::mt19937_64 rng(13);
    for (Field f : {gf3, qq}) {
        Matrix m = oracle::random_matrix(f, 4, 6, rng);
        RowEchelon e = rref(m);
        for (std::size_t t = 0; t < e.rank(); ++t) {
            CHECK(e.reduced(t, e.pivots[t]).is_one());
            for (std::size_t s = 0; s < e.reduced.rows(); ++s)
                if (s != t)
                    CHECK(e.reduced(s, e.pivots[t]).is_zero());
        }
    }
}

TEST_CASE("solve_linear")
{
    SUBCASE("identity")
    {
        Matrix b = Matrix::from_ints(qq, 3, 2, {1, -2, 3, 4, 0, 5});
        auto x = solve_linear(Matrix::identity(qq, 3), b);
        REQUIRE(x);
        CHECK(*x == b);
    }
    SUBCASE("inconsistent")
    {
        Matrix a = Matrix::from_ints(gf3, 2, 2, {1, 0, 0, 0});
        Matrix b = Matrix::from_ints(gf3, 2, 1, {0, 1});
        CHECK_FALSE(solve_linear(a, b));
    }
    SUBCASE("dimension mismatch")
    {
        CHECK_THROWS_AS(solve_linear(Matrix(gf3, 2, 2), Matrix(gf3, 3, 1)), DimensionError);
    }
    SUBCASE("random full-rank GF(3) systems")
    {
        std::mt19937_64 rng(14);
        for (int trial = 0; trial < 200; ++trial) {
            Matrix a = oracle::random_invertible(gf3, 4, rng);
            Matrix b = oracle::random_matrix(gf3, 4, 2, rng);
            auto x = solve_linear(a, b);
            REQUIRE(x);
            CHECK(a * *x == b);
        }
    }
    SUBCASE("consistent rational systems with free variables")
    {
        std::mt19937_64 rng(15);
        for (int trial = 0; trial < 100; ++trial) {
            Matrix a = oracle::random_matrix(qq, 3, 5, rng);
            Matrix x0 = oracle::random_matrix(qq, 5, 1, rng);
            auto x = solve_linear(a, a * x0);
            REQUIRE(x);
            CHECK(a * *x == a * x0);
        }
    }
}

TEST_CASE("kernel")
{
    std::mt19937_64 rng(16);
    for (Field f : {gf2, gf5, qq}) {
        Matrix m = oracle::random_matrix(f, 3, 5, rng);
        auto k = kernel(m);
        CHECK(k.size() == 5 - matrix_rank(m));
        for (const auto &v : k)
            CHECK(is_zero(m.apply(v)));
        CHECK(span_dimension(f, k, 5) == k.size());
    }
}

TEST_CASE("subspace_intersect")
{
    SUBCASE("equal spans")
    {
        std::vector<Vector> s = {Vector{Scalar(gf3, 1), Scalar(gf3, 2), Scalar(gf3, 0)},
                                 Vector{Scalar(gf3, 0), Scalar(gf3, 1), Scalar(gf3, 1)}};
        auto i = subspace_intersect(gf3, s, s, 3);
        CHECK(i.size() == 2);
        for (const auto &v : i)
            CHECK(in_span(gf3, s, v));
    }
    SUBCASE("complementary coordinate subspaces")
    {
        std::vector<Vector> s1 = {unit_vector(qq, 4, 0), unit_vector(qq, 4, 1)};
        std::vector<Vector> s2 = {unit_vector(qq, 4, 2), unit_vector(qq, 4, 3)};
        CHECK(subspace_intersect(qq, s1, s2, 4).empty());
    }
    SUBCASE("rank identity and symmetry on random GF(2) subspaces")
    {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<Vector> s1, s2;
            for (int i = 0; i < 3; ++i)
                s1.push_back(oracle::random_nonzero(gf2, 5, rng));
            for (int i = 0; i < 2; ++i)
                s2.push_back(oracle::random_nonzero(gf2, 5, rng));
            auto i12 = subspace_intersect(gf2, s1, s2, 5);
            auto i21 = subspace_intersect(gf2, s2, s1, 5);
            std::vector<Vector> sum = s1;
            sum.insert(sum.end(), s2.begin(), s2.end());
            std::size_t expect = span_dimension(gf2, s1, 5) + span_dimension(gf2, s2, 5) -
                                 span_dimension(gf2, sum, 5);
            REQUIRE(i12.size() == expect);
            REQUIRE(i21.size() == expect);
            for (const auto &v : i12) {
                REQUIRE(in_span(gf2, s1, v));
                REQUIRE(in_span(gf2, s2, v));
                REQUIRE(in_span(gf2, i21, v));
            }
        }
    }
}

TEST_CASE("projective point counts")
{
    CHECK(ProjectivePoints(gf2, 3).size() == 7);
    CHECK(ProjectivePoints(gf3, 2).size() == 4);
    std::vector<Vector> pts(ProjectivePoints(gf5, 4).begin(), ProjectivePoints(gf5, 4).end());
    REQUIRE(pts.size() == 156);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            REQUIRE(span_dimension(gf5, {pts[i], pts[j]}, 4) == 2);
    CHECK_THROWS_AS(ProjectivePoints(qq, 2), UnsupportedField);
}

TEST_CASE("projective points cover every class exactly once")
{
    for (std::uint32_t p : {2u, 3u}) {
        Field f = Field::prime(p);
        for (std::size_t n = 1; n <= 4; ++n) {
            std::vector<std::vector<std::uint32_t>> seen;
            for (const auto &v : ProjectivePoints(f, n)) {
                std::vector<std::uint32_t> r;
                for (const auto &x : v)
                    r.push_back(x.residue());
                auto lead = std::find_if(r.begin(), r.end(), [](auto x) { return x != 0; });
                REQUIRE(lead != r.end());
                REQUIRE(*lead == 1);
                seen.push_back(r);
            }
            REQUIRE(std::is_sorted(seen.begin(), seen.end()));
            REQUIRE(std::set<std::vector<std::uint32_t>>(seen.begin(), seen.end()).size() ==
                    seen.size());
            // Every nonzero vector is a multiple of exactly one point.
            std::size_t total = 1;
            for (std::size_t i = 0; i < n; ++i)
                total *= p;
            for (std::size_t code = 1; code < total; ++code) {
                Vector x;
                for (std::size_t i = 0, c = code; i < n; ++i, c /= p)
                    x.push_back(Scalar(f, static_cast<long long>(c % p)));
                std::size_t hits = 0;
                for (const auto &v : ProjectivePoints(f, n))
                    hits += span_dimension(f, {v, x}, n) == 1;
                REQUIRE(hits == 1);
            }
            CHECK(projective_residues(p, n) == seen);
        }
    }
}
