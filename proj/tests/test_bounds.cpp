#include <doctest.h>

#include "oracles.hpp"
#include "trank/bounds.hpp"
#include "trank/error.hpp"
#include "trank/oracle.hpp"

using namespace trank;

namespace {

const Field gf2 = Field::prime(2);
const Field gf3 = Field::prime(3);
const Field qq = Field::rationals();

Matrix diag(const Field &f, std::vector<long long> d)
{
    Matrix m(f, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = Scalar(f, d[i]);
    return m;
}

// All nonzero functionals of length n over GF(p), in base-p order.
std::vector<Vector> all_functionals(const Field &f, std::size_t n)
{
    std::vector<Vector> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= f.modulus();
    for (std::size_t code = 1; code < total; ++code) {
        Vector v;
        for (std::size_t i = 0, c = code; i < n; ++i, c /= f.modulus())
            v.push_back(Scalar(f, static_cast<long long>(c % f.modulus())));
        out.push_back(v);
    }
    return out;
}

bool has_rank_one_slice(const Tensor3 &p, Axis axis)
{
    for (const Vector &alpha : all_functionals(p.field(), p.dim(axis)))
        if (oracle::minor_rank(p.contract(axis, alpha)) == 1)
            return true;
    return false;
}

Scalar pair_with(const Vector &alpha, const Vector &a)
{
    Scalar s = Scalar::zero(alpha[0].field());
    for (std::size_t i = 0; i < a.size(); ++i)
        s += alpha[i] * a[i];
    return s;
}

} // namespace

TEST_CASE("rank-one slice search")
{
    SUBCASE("identity and a rank-one diagonal over GF(2)")
    {
        Tensor3 p = Tensor3::from_slices(gf2, {Matrix::identity(gf2, 2), diag(gf2, {1, 0})}, 2, 2);
        SliceSearch s = find_rank_one_slice(p, Axis::A);
        REQUIRE(s.alpha);
        CHECK(s.exhaustive);
        CHECK(oracle::minor_rank(*s.slice) == 1);
        CHECK(*s.slice == p.contract(Axis::A, *s.alpha));
    }
    SUBCASE("rank-one tensor, every axis")
    {
        Tensor3 p = simple_tensor(Vector{Scalar(gf3, 1), Scalar(gf3, 2)},
                                  Vector{Scalar(gf3, 0), Scalar(gf3, 1), Scalar(gf3, 1)},
                                  unit_vector(gf3, 2, 0));
        for (Axis axis : {Axis::A, Axis::B, Axis::C}) {
            SliceSearch s = find_rank_one_slice(p, axis);
            REQUIRE(s.alpha);
            CHECK(matrix_rank(*s.slice) == 1);
        }
    }
    SUBCASE("GF(3) 2x3x3 tensors without a rank-one A-slice")
    {
        std::mt19937_64 rng(51);
        int found = 0;
        for (int trial = 0; trial < 200 && found < 20; ++trial) {
            Tensor3 p = oracle::random_tensor(gf3, {2, 3, 3}, rng);
            bool expect = has_rank_one_slice(p, Axis::A);
            SliceSearch s = find_rank_one_slice(p, Axis::A);
            REQUIRE(s.exhaustive);
            REQUIRE(bool(s.alpha) == expect);
            if (!expect && flattening_ranks(p) == Dims{2, 3, 3})
                ++found;
        }
        CHECK(found > 0);
    }
    SUBCASE("2x2 matrix multiplication has no rank-one slice over GF(2)")
    {
        Tensor3 mu = matmul_tensor(2, 2, 2, gf2);
        for (Axis axis : {Axis::A, Axis::B, Axis::C}) {
            auto functionals = all_functionals(gf2, 4);
            REQUIRE(functionals.size() == 15);
            for (const Vector &alpha : functionals)
                REQUIRE(oracle::minor_rank(mu.contract(axis, alpha)) >= 2);
            SliceSearch s = find_rank_one_slice(mu, axis);
            CHECK_FALSE(s.alpha);
            CHECK(s.exhaustive);
        }
    }
    SUBCASE("rational pencil")
    {
        // Both coordinate slices have rank two; e1* - e2* and 2e1* - e2* do not.
        Tensor3 p = Tensor3::from_slices(qq, {Matrix::identity(qq, 2), diag(qq, {1, 2})}, 2, 2);
        SliceSearch s = find_rank_one_slice(p, Axis::A);
        REQUIRE(s.alpha);
        CHECK_FALSE(s.exhaustive);
        CHECK(matrix_rank(p.contract(Axis::A, *s.alpha)) == 1);

        Tensor3 none = Tensor3::from_slices(
            qq, {Matrix::identity(qq, 2), Matrix::from_ints(qq, 2, 2, {0, -1, 1, 0})}, 2, 2);
        SliceSearch s2 = find_rank_one_slice(none, Axis::A);
        CHECK_FALSE(s2.alpha);
        CHECK_FALSE(s2.exhaustive);
    }
}

TEST_CASE("peel preconditions")
{
    Tensor3 p = oracle::diagonal(gf3, 2);
    Vector alpha = unit_vector(gf3, 2, 0);
    CHECK_THROWS_AS(peel(p, Axis::A, alpha, unit_vector(gf3, 2, 1)), PreconditionError);
    CHECK_THROWS_AS(peel(p, Axis::A, zero_vector(gf3, 2), unit_vector(gf3, 2, 0)),
                    PreconditionError);
    Tensor3 zero_slice = simple_tensor(unit_vector(gf3, 2, 1), unit_vector(gf3, 2, 0),
                                       unit_vector(gf3, 2, 0));
    CHECK_THROWS_AS(peel(zero_slice, Axis::A, alpha, unit_vector(gf3, 2, 0)), PreconditionError);
    CHECK_THROWS_AS(peel(p, Axis::A, unit_vector(gf3, 3, 0), unit_vector(gf3, 3, 0)),
                    DimensionError);
}

TEST_CASE("peel of a rank-one tensor leaves zero")
{
    Vector u{Scalar(gf3, 1), Scalar(gf3, 2)};
    Tensor3 p = simple_tensor(u, unit_vector(gf3, 2, 1), unit_vector(gf3, 3, 0));
    SliceSearch s = find_rank_one_slice(p, Axis::A);
    REQUIRE(s.alpha);
    // The residual (u - α(u)a)⊗slice vanishes for a = u/α(u).
    PeelCertificate c = peel(p, Axis::A, *s.alpha, scale(pair_with(*s.alpha, u).inverse(), u));
    CHECK(c.exact);
    CHECK(c.residual.dims() == Dims{1, 2, 3});
    CHECK(c.residual.is_zero());
}

TEST_CASE("peel reconstructs the tensor")
{
    std::mt19937_64 rng(52);
    for (Field f : {gf2, gf3, qq})
        for (int trial = 0; trial < 50; ++trial) {
            Dims d{1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3};
            Tensor3 p = oracle::random_tensor(f, d, rng);
            Axis axis = static_cast<Axis>(rng() % 3);
            Vector alpha = oracle::random_nonzero(f, p.dim(axis), rng);
            if (p.contract(axis, alpha).is_zero())
                continue;
            // a = canonical choice plus a random vector of ker α.
            Vector a = canonical_a(alpha);
            Vector k = oracle::random_matrix(f, p.dim(axis), 1, rng).column(0);
            Scalar ak = pair_with(alpha, k);
            for (std::size_t i = 0; i < a.size(); ++i)
                k[i] = k[i] - ak * a[i];
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i] = a[i] + k[i];
            REQUIRE(pair_with(alpha, a).is_one());
            PeelCertificate c = peel(p, axis, alpha, a);
            REQUIRE(reconstruct(c) == p);
            REQUIRE(c.slice_rank == matrix_rank(c.slice));
            REQUIRE(c.exact == (c.slice_rank == 1));
            Dims rd = d;
            --rd[static_cast<std::size_t>(axis)];
            REQUIRE(c.residual.dims() == rd);
        }
}

TEST_CASE("affine hyperplane")
{
    Vector alpha{Scalar(gf3, 0), Scalar(gf3, 2), Scalar(gf3, 1)};
    auto as = affine_hyperplane(alpha);
    CHECK(as.size() == 9);
    for (const Vector &a : as)
        CHECK(pair_with(alpha, a).is_one());
    CHECK_THROWS_AS(affine_hyperplane(unit_vector(qq, 2, 0)), UnsupportedField);
}

TEST_CASE("rank-one peel drops the rank by one for some a and never by more")
{
    std::mt19937_64 rng(53);
    for (Field f : {gf2, gf3}) {
        int tested = 0;
        while (tested < 40) {
            Dims d{2 + rng() % 2, 1 + rng() % 3, 1 + rng() % 3};
            Tensor3 p = oracle::random_tensor(f, d, rng);
            SliceSearch s = find_rank_one_slice(p, Axis::A);
            if (!s.alpha)
                continue;
            ++tested;
            std::size_t r = rank_oracle(p).rank;
            std::size_t best = r + 1;
            for (const Vector &a : affine_hyperplane(*s.alpha)) {
                PeelCertificate c = peel(p, Axis::A, *s.alpha, a);
                REQUIRE(c.exact);
                std::size_t rr = rank_oracle(c.residual).rank;
                REQUIRE(rr + 1 >= r);
                REQUIRE(rr <= r);
                best = std::min(best, rr);
            }
            REQUIRE(best + 1 == r);
        }
    }
}

TEST_CASE("some a fails to drop the rank")
{
    // p = e1⊗E11 + e2⊗E22, α = e1*, a = e1 + e2: the residual is E22 - E11.
    Tensor3 p = Tensor3::from_slices(gf3, {diag(gf3, {1, 0}), diag(gf3, {0, 1})}, 2, 2);
    REQUIRE(rank_oracle(p).rank == 2);
    PeelCertificate good = peel(p, Axis::A, unit_vector(gf3, 2, 0), unit_vector(gf3, 2, 0));
    CHECK(rank_oracle(good.residual).rank == 1);
    PeelCertificate bad = peel(p, Axis::A, unit_vector(gf3, 2, 0),
                               Vector{Scalar(gf3, 1), Scalar(gf3, 1)});
    CHECK(bad.exact);
    CHECK(bad.residual == Tensor3::from_ints(gf3, {1, 2, 2}, {-1, 0, 0, 1}));
    CHECK(rank_oracle(bad.residual).rank == 2);
}

TEST_CASE("substitution lower bound")
{
    for (std::size_t n = 1; n <= 4; ++n) {
        SubstitutionBound b = substitution_lower_bound(oracle::diagonal(gf2, n));
        CHECK(b.bound == n);
    }
    Tensor3 one = simple_tensor(unit_vector(gf3, 2, 1), unit_vector(gf3, 3, 2),
                                Vector{Scalar(gf3, 2), Scalar(gf3, 1)});
    CHECK(substitution_lower_bound(one).bound == 1);
    CHECK(substitution_lower_bound(Tensor3(gf2, {2, 2, 2})).bound == 0);

    SubstitutionBound mu = substitution_lower_bound(matmul_tensor(2, 2, 2, gf2));
    CHECK(mu.bound == 4);
    CHECK(mu.trace.empty());
    CHECK(mu.flattening == 4);

    CHECK_THROWS_AS(substitution_lower_bound(oracle::diagonal(qq, 2)), UnsupportedField);
}

TEST_CASE("substitution bound is sound and dominates flattening")
{
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 500; ++trial) {
        Dims d{1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3};
        Tensor3 p = oracle::random_tensor(gf2, d, rng);
        SubstitutionBound b = substitution_lower_bound(p);
        Dims fl = flattening_ranks(p);
        std::size_t flat = *std::max_element(fl.begin(), fl.end());
        REQUIRE(b.flattening == flat);
        REQUIRE(flat <= b.bound);
        REQUIRE(b.bound <= rank_oracle(p).rank);
        REQUIRE(b.trace.size() + b.final_flattening <= b.bound);
    }
}

TEST_CASE("slice-rank and table upper bounds")
{
    std::mt19937_64 rng(55);
    for (Field f : {gf2, gf3, qq})
        for (int trial = 0; trial < 30; ++trial) {
            Tensor3 p = oracle::random_tensor(f, {1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3}, rng);
            for (Axis axis : {Axis::A, Axis::B, Axis::C})
                REQUIRE(certifies(slice_rank_decomposition(p, axis), p));
            UpperBound u = upper_bound(p);
            REQUIRE(certifies(u.witness, p));
            if (f.is_prime())
                REQUIRE(u.witness.size() >= rank_oracle(p).rank);
        }

    Tensor3 mu = matmul_tensor(2, 2, 2, qq);
    UpperBound u = upper_bound(mu);
    CHECK(u.witness.size() == 7);
    CHECK(certifies(u.witness, mu));
    Tensor3 mm = direct_sum(mu, mu);
    UpperBound uu = upper_bound(mm, BlockSplit::of(mu, mu));
    CHECK(uu.witness.size() == 14);
    CHECK(certifies(uu.witness, mm));
    CHECK(upper_bound(mm).witness.size() == 16);
}
