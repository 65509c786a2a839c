#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "trank/matrix.hpp"

namespace trank {

enum class Axis { A = 0, B = 1, C = 2 };

constexpr std::size_t kMaxTensorDim = 32;

const char *axis_name(Axis axis);
Axis parse_axis(char c);

using Dims = std::array<std::size_t, 3>;

/// Dense order-3 tensor with entries in (i,j,k) row-major order. A zero
/// extent is allowed so that fully peeled or reduced tensors stay representable.
class Tensor3 {
  public:
    Tensor3(Field f, Dims dims);
    Tensor3(Field f, Dims dims, std::vector<Scalar> entries);

    static Tensor3 from_ints(Field f, Dims dims, const std::vector<long long> &values);
    /// Σ_i e_i ⊗ slices[i]; all slices share one shape.
    static Tensor3 from_slices(Field f, const std::vector<Matrix> &slices, std::size_t b,
                               std::size_t c);

    const Field &field() const { return field_; }
    const Dims &dims() const { return dims_; }
    std::size_t dim(Axis axis) const { return dims_[static_cast<std::size_t>(axis)]; }
    std::size_t size() const { return data_.size(); }
    const std::vector<Scalar> &entries() const { return data_; }

    const Scalar &operator()(std::size_t i, std::size_t j, std::size_t k) const
    {
        return data_[(i * dims_[1] + j) * dims_[2] + k];
    }
    Scalar &operator()(std::size_t i, std::size_t j, std::size_t k)
    {
        return data_[(i * dims_[1] + j) * dims_[2] + k];
    }

    bool is_zero() const;

    /// Axis t of the result is axis perm[t] of this tensor.
    Tensor3 permuted(const std::array<int, 3> &perm) const;
    /// Moves `axis` to the front keeping the other two in order.
    Tensor3 to_front(Axis axis) const;

    /// Coordinate slice i along `axis`; the two remaining axes keep their order.
    Matrix slice(Axis axis, std::size_t i) const;
    /// p(α) for a functional α on the given axis.
    Matrix contract(Axis axis, const Vector &alpha) const;
    /// dim(axis) × (product of the other two dims).
    Matrix flattening(Axis axis) const;

    /// Applies a linear map (rows = new dim, cols = old dim) on one axis.
    Tensor3 transform(Axis axis, const Matrix &map) const;

    Tensor3 operator+(const Tensor3 &o) const;
    Tensor3 operator-(const Tensor3 &o) const;
    Tensor3 scaled(const Scalar &s) const;
    bool operator==(const Tensor3 &o) const;

  private:
    Field field_;
    Dims dims_;
    std::vector<Scalar> data_;
};

Tensor3 simple_tensor(const Vector &u, const Vector &v, const Vector &w);

/// Inverse of Tensor3::to_front.
std::array<int, 3> front_permutation(Axis axis);

/// A linearly independent family of rows×cols matrices.
class MatrixSpace {
  public:
    MatrixSpace(Field f, std::size_t rows, std::size_t cols);
    /// Keeps an independent subfamily (greedy, in order) of the spanning set.
    static MatrixSpace spanned_by(Field f, std::size_t rows, std::size_t cols,
                                  const std::vector<Matrix> &spanning);

    const Field &field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Matrix> &basis() const { return basis_; }
    std::vector<Vector> vectors() const;

    bool contains(const Matrix &m) const;
    /// True when both spaces are equal as subspaces.
    bool same_span(const MatrixSpace &o) const;

  private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Matrix> basis_;
};

/// Reduced echelon basis of p(X*) for the chosen axis X.
MatrixSpace slice_space(const Tensor3 &p, Axis axis);

Dims flattening_ranks(const Tensor3 &p);

/// Change of basis on one axis. `embed` (old × new) maps reduced coordinates
/// back; `project` (new × old) is a left inverse of `embed`.
struct AxisReduction {
    Matrix embed;
    Matrix project;
    bool identity;
};

struct ConciseForm {
    Tensor3 tensor;
    std::array<AxisReduction, 3> maps;
};

ConciseForm concise_reduce(const Tensor3 &p);
/// Pushes a concise tensor back through the embed maps.
Tensor3 expand_concise(const ConciseForm &form);

Tensor3 direct_sum(const Tensor3 &p1, const Tensor3 &p2);

/// Structure tensor of (i×j)·(j×k) matrix multiplication with A, B, C indexed
/// by the entries (r,s), (s,t), (r,t) of the three matrices in row-major order.
Tensor3 matmul_tensor(std::size_t i, std::size_t j, std::size_t k, const Field &f);

/// W ⊂ G⊗C + B⊗H with G = span(rows), H = span(cols).
struct HookShape {
    std::size_t e = 0;
    std::size_t f = 0;
    std::vector<Vector> rows;
    std::vector<Vector> cols;
};

/// Hook with the first e rows and first f columns.
HookShape coordinate_hook(const Field &f, std::size_t b, std::size_t c, std::size_t e,
                          std::size_t fcols);

bool is_hook_shaped(const MatrixSpace &w, const HookShape &hook);
bool is_hook_shaped(const Matrix &m, const HookShape &hook);

/// First hook in the enumeration order of e-dimensional row subspaces
/// (reduced echelon forms, pivot sets and free entries in lexicographic order).
/// Prime fields only.
std::optional<HookShape> find_hook_shape(const MatrixSpace &w, std::size_t e, std::size_t f);

} // namespace trank
