#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trank/decomposition.hpp"
#include "trank/directsum.hpp"

namespace trank {

struct SliceSearch {
    std::optional<Vector> alpha;
    std::optional<Matrix> slice;
    /// True when "not found" is a proof of absence (prime fields).
    bool exhaustive = false;
};

/// A functional α on `axis` with rank p(α) = 1. Over GF(p) every projective
/// functional is tried in lexicographic order. Over Q only the coordinate
/// functionals and the pencils e_i* + t·e_j* with rational t are tried.
SliceSearch find_rank_one_slice(const Tensor3 &p, Axis axis);

struct PeelCertificate {
    Axis axis;
    Vector alpha;
    Vector chosen_a;
    /// p - a⊗p(α) written in the basis e_j - (α_j/α_q)e_q (j != q) of ker α,
    /// q being the first nonzero coordinate of α.
    Tensor3 residual;
    Matrix slice;
    std::size_t slice_rank;
    /// Slice of rank one: the residual rank is at least R(p) - 1 for this a,
    /// and equal to it for some a. Otherwise only R(p) - slice_rank is claimed.
    bool exact;
};

PeelCertificate peel(const Tensor3 &p, Axis axis, const Vector &alpha, const Vector &a);

/// Embeds the residual back and adds a⊗slice.
Tensor3 reconstruct(const PeelCertificate &cert);

/// e_q / α_q for the first nonzero coordinate q of α.
Vector canonical_a(const Vector &alpha);

/// Every a with α(a) = 1; prime fields only.
std::vector<Vector> affine_hyperplane(const Vector &alpha);

struct PeelStep {
    Axis axis;
    Vector alpha;
    Vector a;
    Dims residual_dims;
    /// Bound proven for the residual along this branch.
    std::size_t residual_bound;
};

struct SubstitutionBound {
    std::size_t bound = 0;
    /// Max flattening rank of p itself.
    std::size_t flattening = 0;
    /// Peels along the branch that realizes the minimum over a.
    std::vector<PeelStep> trace;
    /// Max flattening rank of the last residual of the trace.
    std::size_t final_flattening = 0;
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
};

constexpr std::uint64_t kDefaultSubstitutionBudget = 200'000;

/// Lower bound by repeated rank-one-slice peeling. At each tensor the first
/// rank-one slice found (axes A, B, C) gives R(p) >= 1 + min_a R(p - a⊗p(α)),
/// and the minimum over every a in the affine hyperplane is taken; the bound
/// is the larger of that and the flattening bound. Prime fields only. When
/// the node budget runs out, the remaining branches fall back to flattening.
SubstitutionBound substitution_lower_bound(const Tensor3 &p,
                                           std::uint64_t budget = kDefaultSubstitutionBudget);

/// Σ over the coordinate slices along `axis` of a rank factorization of each slice.
Decomposition slice_rank_decomposition(const Tensor3 &p, Axis axis);

struct UpperBound {
    Decomposition witness;
    std::string source;
};

/// Shortest certified decomposition among the slice-rank factorizations, the
/// seven-term table when p is 2×2 matrix multiplication, and, for a
/// block-supported p with a split, the concatenation of the block bounds.
UpperBound upper_bound(const Tensor3 &p, const std::optional<BlockSplit> &split = std::nullopt);

} // namespace trank
