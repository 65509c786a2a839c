#pragma once

#include <optional>
#include <vector>

#include "trank/tensor.hpp"

namespace trank {

/// u ⊗ v ⊗ w with all three factors nonzero.
struct RankOneTerm {
    Vector u;
    Vector v;
    Vector w;

    RankOneTerm(Vector u_, Vector v_, Vector w_);
    Tensor3 tensor() const { return simple_tensor(u, v, w); }
    /// The B⊗C matrix v wᵀ.
    Matrix matrix() const { return outer(v, w); }
};

class Decomposition {
  public:
    Decomposition(Field f, Dims dims);
    Decomposition(Field f, Dims dims, std::vector<RankOneTerm> terms);

    const Field &field() const { return field_; }
    const Dims &dims() const { return dims_; }
    std::size_t size() const { return terms_.size(); }
    const std::vector<RankOneTerm> &terms() const { return terms_; }
    const RankOneTerm &operator[](std::size_t i) const { return terms_.at(i); }

    void push_back(RankOneTerm t);
    Decomposition without(std::size_t index) const;
    /// Terms of `a` followed by terms of `b` embedded block-diagonally.
    static Decomposition concatenate_direct(const Decomposition &a, const Decomposition &b);

    /// Applies a linear map to the factor on one axis of every term.
    Decomposition transform(Axis axis, const Matrix &map) const;
    /// Reorders factors like Tensor3::permuted.
    Decomposition permuted(const std::array<int, 3> &perm) const;

  private:
    Field field_;
    Dims dims_;
    std::vector<RankOneTerm> terms_;
};

/// Σ λ_i u_i⊗v_i⊗w_i.
Tensor3 evaluate(const Decomposition &d, const std::vector<Scalar> &coefficients);
/// All coefficients equal to one.
Tensor3 evaluate(const Decomposition &d);

/// Coefficients reproducing p from the terms, or nullopt if p is outside their span.
std::optional<std::vector<Scalar>> certifies(const Decomposition &d, const Tensor3 &p);

/// Seven-product table for 2×2 matrix multiplication, in the layout of matmul_tensor(2,2,2).
Decomposition strassen_222(const Field &f);

} // namespace trank
