#pragma once

// Constructed instances shared by the unit tests and the acceptance run.

#include <optional>
#include <random>

#include "trank/directsum.hpp"
#include "trank/io.hpp"
#include "trank/oracle.hpp"

namespace fixture {

using namespace trank;

inline Vector vec(const Field &f, std::size_t n, std::initializer_list<std::size_t> ones)
{
    Vector v = zero_vector(f, n);
    for (std::size_t i : ones)
        v[i] = Scalar::one(f);
    return v;
}

// Five terms over GF(2) in a 3+3 by 3+3 split with stick-out dims (1,2,1,1):
// one Mix, two VL and two HR terms.
inline Decomposition stickout_layout()
{
    const Field f = Field::prime(2);
    Decomposition d(f, {5, 6, 6});
    auto add = [&](std::size_t i, std::initializer_list<std::size_t> v,
                   std::initializer_list<std::size_t> w) {
        d.push_back(RankOneTerm(unit_vector(f, 5, i), vec(f, 6, v), vec(f, 6, w)));
    };
    add(0, {2, 3}, {2, 3}); // Mix
    add(1, {0, 4}, {2});    // VL
    add(2, {1, 3}, {2});    // VL
    add(3, {3}, {2, 4});    // HR
    add(4, {4}, {2, 5});    // HR
    return d;
}

inline BlockSplit split_333()
{
    BlockSplit s;
    s.b1 = s.b2 = s.c1 = s.c2 = 3;
    return s;
}

// Diagonal W'' = <E00, E11, E22>: (2,1)-hook shaped and no smaller row count.
inline MatrixSpace diagonal_bis()
{
    const Field f = Field::prime(2);
    std::vector<Matrix> m;
    for (std::size_t i = 0; i < 3; ++i) {
        Matrix x(f, 3, 3);
        x(i, i) = Scalar::one(f);
        m.push_back(x);
    }
    return MatrixSpace::spanned_by(f, 3, 3, m);
}

// A minimal decomposition of p1 ⊕ p2 re-chosen to favour Prime and Bis
// terms, with the slice spaces of both blocks.
struct DirectSumInstance {
    Tensor3 p1, p2, sum;
    BlockSplit split;
    OracleResult r1, r2, rs;
    Decomposition basis;
    SpacePair w;
};

inline std::optional<DirectSumInstance> solve_direct_sum(const Tensor3 &p1, const Tensor3 &p2,
                                                         std::uint64_t budget = kDefaultBudget)
{
    Tensor3 s = direct_sum(p1, p2);
    OracleResult r1 = rank_oracle(p1, kDefaultMaxRank, budget);
    OracleResult r2 = rank_oracle(p2, kDefaultMaxRank, budget);
    OracleResult rs = rank_oracle(s, kDefaultMaxRank, budget);
    if (!r1.exact() || !r2.exact() || !rs.exact())
        return std::nullopt;
    BlockSplit split = BlockSplit::of(p1, p2);
    Decomposition basis = best_basis(s, *rs.witness, split);
    return DirectSumInstance{p1, p2, s, split, r1, r2, rs, basis, slice_pair(s, split)};
}

// GF(2) pair p' ⊕ p'' whose primed slices are supported on row 0 and
// columns 0, 1 of a 3×4 block: W' is (1,2)-hook shaped. Seeds are advanced
// until p' is concise on C, so every column outside the hook is nonzero.
inline std::pair<Tensor3, Tensor3> hook_pair(std::uint64_t seed, std::size_t primed_slices = 2,
                                             Dims bis = {1, 1, 2})
{
    const Field f = Field::prime(2);
    Tensor3 p1 = hook_tensor(f, 3, 4, 1, 2, primed_slices, seed);
    while (flattening_ranks(p1)[2] < 4)
        p1 = hook_tensor(f, 3, 4, 1, 2, primed_slices, ++seed);
    return {p1, random_tensor(f, bis, seed + 1)};
}

} // namespace fixture
