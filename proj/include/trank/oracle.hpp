#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "trank/decomposition.hpp"

namespace trank {

enum class OracleStatus { exact, lower_bound_only, budget_exceeded };

const char *status_name(OracleStatus s);

struct OracleResult {
    OracleStatus status = OracleStatus::exact;
    /// The rank when exact, otherwise the best proven lower bound.
    std::size_t rank = 0;
    /// A decomposition of length `rank` when exact.
    std::optional<Decomposition> witness;
    std::uint64_t nodes = 0;

    bool exact() const { return status == OracleStatus::exact; }
};

constexpr std::uint64_t kDefaultBudget = 100'000'000;
constexpr std::size_t kDefaultMaxRank = 64;

/// Exact tensor rank over GF(p), p < 256, by exhaustive search. Iterative
/// deepening from the flattening bound; for each candidate r the slice space
/// W on the cheapest axis is extended by g = r - dim W rank-one matrices
/// (classes modulo W, chosen as the greedy basis of their span) and the result
/// is accepted when the rank-one matrices inside the extension span it.
/// A tensor whose slice matrices have more than 64 entries on every axis of
/// its concise form is rejected.
OracleResult rank_oracle(const Tensor3 &p, std::size_t max_rank = kDefaultMaxRank,
                         std::uint64_t budget = kDefaultBudget);

/// Histogram rank -> number of tensors, over all p^(abc) tensors of the shape.
std::map<std::size_t, std::uint64_t> max_rank_census(const Dims &dims, const Field &f);

} // namespace trank
