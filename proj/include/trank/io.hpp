#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "trank/bounds.hpp"
#include "trank/directsum.hpp"

namespace trank {

using Json = nlohmann::json;

/// 64-bit linear congruential stream; each draw returns the top 31 bits.
class Lcg {
  public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_ >> 33;
    }
    /// x mod p over GF(p); (x mod 7) - 3 over Q.
    Scalar scalar(const Field &f);
    std::uint64_t below(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t state_;
};

struct TensorFile {
    Tensor3 tensor;
    std::optional<BlockSplit> split;
};

Json field_to_json(const Field &f);
Field field_from_json(const Json &j);
Json scalar_to_json(const Scalar &s);
Scalar scalar_from_json(const Field &f, const Json &j);
Json vector_to_json(const Vector &v);
Vector vector_from_json(const Field &f, const Json &j);

Json tensor_to_json(const TensorFile &t);
TensorFile tensor_from_json(const Json &j);
Json decomposition_to_json(const Decomposition &d);
Decomposition decomposition_from_json(const Json &j);

Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &j);

Tensor3 random_tensor(const Field &f, const Dims &dims, std::uint64_t seed);
/// `slices` random matrices in b×c supported on the first e rows and first
/// fcols columns, so their span is (e, fcols)-hook shaped.
Tensor3 hook_tensor(const Field &f, std::size_t b, std::size_t c, std::size_t e, std::size_t fcols,
                    std::size_t slices, std::uint64_t seed);
TensorFile dirsum_file(const Tensor3 &p1, const Tensor3 &p2);

Json oracle_to_json(const OracleResult &r);
Json profile_to_json(const StickOutProfile &p);
Json counts_to_json(const TypeCounts &c);
Json classified_to_json(const ClassifiedDecomposition &cd);
Json audit_to_json(const std::vector<AuditItem> &items);
Json substitution_to_json(const SubstitutionBound &b);

/// Everything needed to recheck an additivity report without search.
Json dossier_json(const Tensor3 &p1, const Tensor3 &p2, const AdditivityReport &rep);

} // namespace trank
