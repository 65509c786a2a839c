#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "trank/decomposition.hpp"
#include "trank/oracle.hpp"

namespace trank {

/// Coordinate block split B = B'⊕B'', C = C'⊕C'' (and A = A'⊕A'' for tensors).
struct BlockSplit {
    std::size_t b1 = 0, b2 = 0, c1 = 0, c2 = 0;
    std::size_t a1 = 0, a2 = 0;

    static BlockSplit of(const Tensor3 &p1, const Tensor3 &p2);
    void check(const Dims &dims) const;
};

/// Splits a block-supported tensor into its two summands; throws when some
/// entry straddles the blocks.
std::pair<Tensor3, Tensor3> split_direct_sum(const Tensor3 &p, const BlockSplit &split);

struct StickOutProfile {
    std::vector<Vector> e1; // E' ⊂ B'
    std::vector<Vector> e2; // E'' ⊂ B''
    std::vector<Vector> f1; // F' ⊂ C'
    std::vector<Vector> f2; // F'' ⊂ C''

    std::array<std::size_t, 4> dims() const { return {e1.size(), e2.size(), f1.size(), f2.size()}; }
};

/// E' is spanned by the B'-parts of b-vectors of terms whose c-vector has a
/// nonzero C''-part; E'', F', F'' likewise.
StickOutProfile stickout_profile(const Decomposition &d, const BlockSplit &split);

enum class TermType { Prime, Bis, HL, HR, VL, VR, Mix };
const char *type_name(TermType t);

struct TypeCounts {
    std::size_t prim = 0, bis = 0, hl = 0, hr = 0, vl = 0, vr = 0, mix = 0;
    std::size_t total() const { return prim + bis + hl + hr + vl + vr + mix; }
    std::size_t &operator[](TermType t);
};

struct ClassifiedDecomposition {
    Decomposition terms;
    BlockSplit split;
    StickOutProfile profile;
    std::vector<TermType> labels;
    TypeCounts counts;
};

/// Highest-priority type of each term, priority Prime > Bis > HL > HR > VL > VR > Mix.
ClassifiedDecomposition classify(const Decomposition &d, const BlockSplit &split);

/// Re-chooses the rank-one basis of V = span of the term matrices so that
/// Prime terms come first, then Bis, and so on (greedy over every rank-one
/// matrix of V, prime fields only). `p` supplies the A-factors.
Decomposition best_basis(const Tensor3 &p, const Decomposition &d, const BlockSplit &split);

struct SpacePair {
    MatrixSpace prime; // W' ⊂ B'⊗C'
    MatrixSpace bis;   // W'' ⊂ B''⊗C''
};

/// W'⊕W'' inside B⊗C.
MatrixSpace block_sum(const MatrixSpace &wp, const MatrixSpace &wb);
/// Tensor whose A-slices are the basis of W, so R(tensor) = R(W).
Tensor3 space_tensor(const MatrixSpace &w);
/// W' = p'(A'*) and W'' = p''(A''*) of a block-supported tensor.
SpacePair slice_pair(const Tensor3 &p, const BlockSplit &split);
/// True when every matrix of W lies in the span of the term matrices v⊗w.
bool decomposition_covers(const Decomposition &d, const MatrixSpace &w);

/// Adds the B'⊗C' block of term `v` (Prime) to W', or its B''⊗C'' block (Bis) to W''.
SpacePair replete(const SpacePair &w, const ClassifiedDecomposition &cd, std::size_t v);

struct DigestResult {
    SpacePair s;
    /// Decomposition of space_tensor(S'⊕S'') by the remaining terms, when
    /// they span it.
    std::optional<Decomposition> reduced;
};

/// S' = span(terms without v) ∩ W' and S'' = W'' for a Prime v (Bis symmetric).
DigestResult digest(const SpacePair &w, const ClassifiedDecomposition &cd, std::size_t v,
                    bool require_replete);

struct HookPeel {
    Tensor3 reduced;          // p̃' ⊕ p''
    BlockSplit split;         // c1 decreased by one
    Matrix slice;             // v = p(γ) ∈ A'⊗B'
    Vector c;                 // the vector of (γ = 1) used for the peel
    HookShape hook;           // the input hook with H' rewritten in ker γ
    bool hook_preserved;      // p̃'(A'*) passes is_hook_shaped with `hook`
    std::optional<Decomposition> reduced_decomposition; // length R(p) - 1 when found
};

/// One repletion-and-digestion step on the C-axis with respect to the
/// rank-one slice p(γ), γ a functional on C' vanishing on the hook columns.
/// `minimal` must be a minimal decomposition of p; the oracle is used when absent.
HookPeel peel_hook_slice(const Tensor3 &p, const BlockSplit &split, const Vector &gamma,
                         const HookShape &hook,
                         const std::optional<Decomposition> &minimal = std::nullopt,
                         std::uint64_t budget = kDefaultBudget);

struct AuditItem {
    std::string name;
    long long lhs;
    long long rhs;
    bool holds;
    std::string relation; // "<=" or ">="
};

/// Inequalities relating ranks, dimensions, stick-out dims and type counts.
/// dim_wp and dim_wb are dim W' and dim W''.
std::vector<AuditItem> audit_inequalities(const ClassifiedDecomposition &cd, std::size_t r_prime,
                                          std::size_t r_bis, std::size_t r_sum,
                                          std::size_t dim_wp, std::size_t dim_wb);

struct AdditivityReport {
    OracleResult prime;
    OracleResult bis;
    OracleResult sum;
    /// R(p') + R(p'') - R(p'⊕p''); absent when some rank is only bounded.
    std::optional<long long> defect;
    std::optional<ClassifiedDecomposition> classified;
    std::vector<AuditItem> audit;
    /// Set when a nonzero defect was recomputed from scratch and confirmed.
    bool reverified = false;

    bool audit_clean() const;
};

AdditivityReport additivity_check(const Tensor3 &p1, const Tensor3 &p2,
                                  std::uint64_t budget = kDefaultBudget);

enum class MixCondition { small_e_tilde = 1, vl_independent_concise = 2, hr_independent = 3 };

struct MixConditionReport {
    std::size_t k = 0;            // smallest k with W'' (k, dim F'')-hook shaped
    std::size_t e_tilde_dim = 0;  // dim Ẽ''
    std::size_t f_tilde_dim = 0;  // dim F̃'
    std::array<bool, 3> holds{};  // conditions (1), (2), (3)
    bool all() const { return holds[0] && holds[1] && holds[2]; }
    std::vector<MixCondition> violated() const;
};

/// Evaluates the three hypotheses of the Mix criterion; requires an empty Bis set.
MixConditionReport check_mix_conditions(const ClassifiedDecomposition &cd, const MatrixSpace &wb);

} // namespace trank
