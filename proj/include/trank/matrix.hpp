#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trank/field.hpp"

namespace trank {

using Vector = std::vector<Scalar>;

Vector zero_vector(const Field &f, std::size_t n);
Vector unit_vector(const Field &f, std::size_t n, std::size_t i);
bool is_zero(const Vector &v);
Vector add(const Vector &x, const Vector &y);
Vector scale(const Scalar &s, const Vector &x);
Scalar dot(const Vector &x, const Vector &y);

/// Dense row-major matrix over one field.
class Matrix {
  public:
    Matrix(Field f, std::size_t rows, std::size_t cols);
    Matrix(Field f, std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

    static Matrix identity(Field f, std::size_t n);
    /// Each vector becomes one row; `cols` is used when `rows` is empty.
    static Matrix from_rows(Field f, const std::vector<Vector> &rows, std::size_t cols);
    /// Each vector becomes one column.
    static Matrix from_columns(Field f, const std::vector<Vector> &cols, std::size_t rows);
    /// Convenience for tests: small integers reduced into the field.
    static Matrix from_ints(Field f, std::size_t rows, std::size_t cols,
                            const std::vector<long long> &values);

    const Field &field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<Scalar> &entries() const { return data_; }

    const Scalar &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Scalar &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    Vector row(std::size_t i) const;
    Vector column(std::size_t j) const;
    /// Row-major flattening.
    const Vector &vectorized() const { return data_; }

    Matrix transpose() const;
    bool is_zero() const;

    Matrix operator+(const Matrix &o) const;
    Matrix operator-(const Matrix &o) const;
    Matrix operator*(const Matrix &o) const;
    Matrix scaled(const Scalar &s) const;
    Vector apply(const Vector &x) const;

    bool operator==(const Matrix &o) const;

  private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Scalar> data_;
};

/// Outer product v wᵀ.
Matrix outer(const Vector &v, const Vector &w);

struct RowEchelon {
    Matrix reduced;                  // reduced row echelon form, pivots equal 1
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
    std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination. Over GF(p) the pivot is the first nonzero entry
/// of the column; over Q it is the entry with the largest absolute numerator,
/// ties going to the lowest row index.
RowEchelon rref(const Matrix &m);

std::size_t matrix_rank(const Matrix &m);

/// Some x with a·x = b, free variables set to zero; nullopt if inconsistent.
std::optional<Matrix> solve_linear(const Matrix &a, const Matrix &b);

/// Basis of {x : m·x = 0}, one vector per free column.
std::vector<Vector> kernel(const Matrix &m);

/// Reduced echelon basis of the span. `n` is the vector length.
std::vector<Vector> span_basis(const Field &f, const std::vector<Vector> &vectors, std::size_t n);
std::size_t span_dimension(const Field &f, const std::vector<Vector> &vectors, std::size_t n);
bool in_span(const Field &f, const std::vector<Vector> &vectors, const Vector &x);
/// Coefficients of x in terms of `vectors` when x lies in their span.
std::optional<Vector> span_coefficients(const Field &f, const std::vector<Vector> &vectors,
                                        const Vector &x);

/// Basis of span1 ∩ span2.
std::vector<Vector> subspace_intersect(const Field &f, const std::vector<Vector> &span1,
                                       const std::vector<Vector> &span2, std::size_t n);

/// Indices of a greedily chosen maximal independent subfamily, in order.
std::vector<std::size_t> independent_subset(const Field &f, const std::vector<Vector> &vectors,
                                            std::size_t n);

/// One normalized representative per point of P^{n-1}(GF(p)), first nonzero
/// coordinate equal to 1, in ascending lexicographic order.
class ProjectivePoints {
  public:
    ProjectivePoints(Field f, std::size_t n);

    /// (p^n - 1) / (p - 1).
    std::size_t size() const { return count_; }

    class iterator {
      public:
        using value_type = Vector;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        const Vector &operator*() const { return current_; }
        const Vector *operator->() const { return &current_; }
        iterator &operator++();
        iterator operator++(int)
        {
            iterator t = *this;
            ++*this;
            return t;
        }
        bool operator==(const iterator &o) const { return done_ == o.done_; }

      private:
        friend class ProjectivePoints;
        iterator(Field f, std::size_t n);

        std::optional<Field> field_;
        std::vector<std::uint32_t> digits_;
        std::size_t lead_ = 0;
        Vector current_;
        bool done_ = true;

        void materialize();
    };

    iterator begin() const;
    iterator end() const { return iterator(); }

  private:
    Field field_;
    std::size_t n_;
    std::size_t count_;
};

/// Raw residue form of the same enumeration, for the search code.
std::vector<std::vector<std::uint32_t>> projective_residues(std::uint32_t p, std::size_t n);

} // namespace trank
