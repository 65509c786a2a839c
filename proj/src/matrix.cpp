#include "trank/matrix.hpp"

#include "trank/error.hpp"

#include <string>
#include <utility>

namespace trank {

Vector zero_vector(const Field &f, std::size_t n)
{
    return Vector(n, Scalar::zero(f));
}

Vector unit_vector(const Field &f, std::size_t n, std::size_t i)
{
    Vector v = zero_vector(f, n);
    v.at(i) = Scalar::one(f);
    return v;
}

bool is_zero(const Vector &v)
{
    for (const auto &x : v)
        if (!x.is_zero())
            return false;
    return true;
}

Vector add(const Vector &x, const Vector &y)
{
    if (x.size() != y.size())
        throw DimensionError("vector length mismatch");
    Vector r;
    r.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r.push_back(x[i] + y[i]);
    return r;
}

Vector scale(const Scalar &s, const Vector &x)
{
    Vector r;
    r.reserve(x.size());
    for (const auto &v : x)
        r.push_back(s * v);
    return r;
}

Scalar dot(const Vector &x, const Vector &y)
{
    if (x.size() != y.size())
        throw DimensionError("vector length mismatch");
    if (x.empty())
        throw DimensionError("dot product of empty vectors has no field");
    Scalar s = Scalar::zero(x[0].field());
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * y[i];
    return s;
}

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(f))
{
}

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : field_(f), rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (data_.size() != rows * cols)
        throw DimensionError("matrix entry count " + std::to_string(data_.size()) + " != " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    for (const auto &x : data_)
        require_same_field(f, x.field());
}

Matrix Matrix::identity(Field f, std::size_t n)
{
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<Vector> &rows, std::size_t cols)
{
    std::vector<Scalar> data;
    data.reserve(rows.size() * cols);
    for (const auto &r : rows) {
        if (r.size() != cols)
            throw DimensionError("row length mismatch");
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(f, rows.size(), cols, std::move(data));
}

Matrix Matrix::from_columns(Field f, const std::vector<Vector> &cols, std::size_t rows)
{
    return from_rows(f, cols, rows).transpose();
}

Matrix Matrix::from_ints(Field f, std::size_t rows, std::size_t cols,
                         const std::vector<long long> &values)
{
    std::vector<Scalar> data;
    data.reserve(values.size());
    for (long long v : values)
        data.emplace_back(f, v);
    return Matrix(f, rows, cols, std::move(data));
}

Vector Matrix::row(std::size_t i) const
{
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::column(std::size_t j) const
{
    Vector c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c.push_back((*this)(i, j));
    return c;
}

Matrix Matrix::transpose() const
{
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const
{
    return trank::is_zero(data_);
}

Matrix Matrix::operator+(const Matrix &o) const
{
    require_same_field(field_, o.field_);
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DimensionError("matrix sum shape mismatch");
    return Matrix(field_, rows_, cols_, add(data_, o.data_));
}

Matrix Matrix::operator-(const Matrix &o) const
{
    return *this + o.scaled(-Scalar::one(field_));
}

Matrix Matrix::operator*(const Matrix &o) const
{
    require_same_field(field_, o.field_);
    if (cols_ != o.rows_)
        throw DimensionError("matrix product shape mismatch");
    Matrix r(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar &x = (*this)(i, k);
            if (x.is_zero())
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r(i, j) += x * o(k, j);
        }
    return r;
}

Matrix Matrix::scaled(const Scalar &s) const
{
    return Matrix(field_, rows_, cols_, scale(s, data_));
}

Vector Matrix::apply(const Vector &x) const
{
    if (x.size() != cols_)
        throw DimensionError("matrix-vector shape mismatch");
    Vector r = zero_vector(field_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r[i] += (*this)(i, j) * x[j];
    return r;
}

bool Matrix::operator==(const Matrix &o) const
{
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

Matrix outer(const Vector &v, const Vector &w)
{
    if (v.empty() || w.empty())
        throw DimensionError("outer product of empty vectors");
    Field f = v[0].field();
    Matrix m(f, v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            m(i, j) = v[i] * w[j];
    return m;
}

namespace {

// Larger |numerator| wins; equal magnitudes keep the earlier row.
bool better_rational_pivot(const Scalar &cand, const Scalar &best)
{
    return mpz_cmpabs(cand.rational().get_num_mpz_t(), best.rational().get_num_mpz_t()) > 0;
}

} // namespace

RowEchelon rref(const Matrix &m)
{
    Matrix a = m;
    const Field f = m.field();
    const bool prime = f.is_prime();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = a.rows();
        for (std::size_t i = r; i < a.rows(); ++i) {
            if (a(i, c).is_zero())
                continue;
            if (piv == a.rows()) {
                piv = i;
                if (prime)
                    break;
            } else if (better_rational_pivot(a(i, c), a(piv, c))) {
                piv = i;
            }
        }
        if (piv == a.rows())
            continue;
        if (piv != r)
            for (std::size_t j = 0; j < a.cols(); ++j)
                std::swap(a(piv, j), a(r, j));
        Scalar inv = a(r, c).inverse();
        for (std::size_t j = c; j < a.cols(); ++j)
            a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c).is_zero())
                continue;
            Scalar factor = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                if (!a(r, j).is_zero())
                    a(i, j) -= factor * a(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(a), std::move(pivots)};
}

std::size_t matrix_rank(const Matrix &m)
{
    return rref(m).rank();
}

std::optional<Matrix> solve_linear(const Matrix &a, const Matrix &b)
{
    require_same_field(a.field(), b.field());
    if (a.rows() != b.rows())
        throw DimensionError("solve_linear: a has " + std::to_string(a.rows()) + " rows, b has " +
                             std::to_string(b.rows()));
    const Field f = a.field();
    const std::size_t n = a.cols();
    Matrix aug(f, a.rows(), n + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j)
            aug(i, n + j) = b(i, j);
    }
    RowEchelon e = rref(aug);
    Matrix x(f, n, b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        std::size_t c = e.pivots[r];
        if (c >= n)
            return std::nullopt;
        for (std::size_t j = 0; j < b.cols(); ++j)
            x(c, j) = e.reduced(r, n + j);
    }
    return x;
}

std::vector<Vector> kernel(const Matrix &m)
{
    RowEchelon e = rref(m);
    const Field f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots)
        is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        Vector v = zero_vector(f, m.cols());
        v[free] = Scalar::one(f);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v[e.pivots[r]] = -e.reduced(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Vector> span_basis(const Field &f, const std::vector<Vector> &vectors, std::size_t n)
{
    RowEchelon e = rref(Matrix::from_rows(f, vectors, n));
    std::vector<Vector> basis;
    for (std::size_t r = 0; r < e.rank(); ++r)
        basis.push_back(e.reduced.row(r));
    return basis;
}

std::size_t span_dimension(const Field &f, const std::vector<Vector> &vectors, std::size_t n)
{
    return matrix_rank(Matrix::from_rows(f, vectors, n));
}

bool in_span(const Field &f, const std::vector<Vector> &vectors, const Vector &x)
{
    return span_coefficients(f, vectors, x).has_value();
}

std::optional<Vector> span_coefficients(const Field &f, const std::vector<Vector> &vectors,
                                        const Vector &x)
{
    Matrix a = Matrix::from_columns(f, vectors, x.size());
    Matrix b = Matrix::from_columns(f, {x}, x.size());
    auto sol = solve_linear(a, b);
    if (!sol)
        return std::nullopt;
    return sol->column(0);
}

std::vector<Vector> subspace_intersect(const Field &f, const std::vector<Vector> &span1,
                                       const std::vector<Vector> &span2, std::size_t n)
{
    for (const auto &v : span1)
        if (v.size() != n)
            throw DimensionError("subspace_intersect: vector length mismatch");
    for (const auto &v : span2)
        if (v.size() != n)
            throw DimensionError("subspace_intersect: vector length mismatch");
    std::vector<Vector> b1 = span_basis(f, span1, n);
    std::vector<Vector> b2 = span_basis(f, span2, n);
    if (b1.empty() || b2.empty())
        return {};
    // x ∈ ker [B1 | -B2] gives Σ x_i b1_i = Σ x_j b2_j.
    std::vector<Vector> cols = b1;
    for (const auto &v : b2)
        cols.push_back(scale(-Scalar::one(f), v));
    Matrix m = Matrix::from_columns(f, cols, n);
    std::vector<Vector> common;
    for (const auto &k : kernel(m)) {
        Vector x = zero_vector(f, n);
        for (std::size_t i = 0; i < b1.size(); ++i)
            if (!k[i].is_zero())
                x = add(x, scale(k[i], b1[i]));
        common.push_back(std::move(x));
    }
    return span_basis(f, common, n);
}

std::vector<std::size_t> independent_subset(const Field &f, const std::vector<Vector> &vectors,
                                            std::size_t n)
{
    if (vectors.empty())
        return {};
    RowEchelon e = rref(Matrix::from_columns(f, vectors, n));
    return e.pivots;
}

ProjectivePoints::ProjectivePoints(Field f, std::size_t n) : field_(f), n_(n), count_(0)
{
    if (!f.is_prime())
        throw UnsupportedField("projective enumeration needs a finite field");
    std::size_t power = 1;
    for (std::size_t i = 0; i < n; ++i)
        power *= f.modulus();
    count_ = n == 0 ? 0 : (power - 1) / (f.modulus() - 1);
}

ProjectivePoints::iterator ProjectivePoints::begin() const
{
    if (n_ == 0)
        return end();
    return iterator(field_, n_);
}

ProjectivePoints::iterator::iterator(Field f, std::size_t n)
    : field_(f), digits_(n, 0), lead_(n - 1), done_(false)
{
    digits_[lead_] = 1;
    materialize();
}

ProjectivePoints::iterator &ProjectivePoints::iterator::operator++()
{
    const std::uint32_t p = field_->modulus();
    std::size_t n = digits_.size();
    std::size_t pos = n;
    while (pos > lead_ + 1) {
        --pos;
        if (++digits_[pos] < p) {
            materialize();
            return *this;
        }
        digits_[pos] = 0;
    }
    if (lead_ == 0) {
        done_ = true;
        current_.clear();
        return *this;
    }
    digits_[lead_] = 0;
    --lead_;
    digits_[lead_] = 1;
    materialize();
    return *this;
}

void ProjectivePoints::iterator::materialize()
{
    current_.clear();
    for (auto d : digits_)
        current_.push_back(Scalar::from_residue(*field_, d));
}

std::vector<std::vector<std::uint32_t>> projective_residues(std::uint32_t p, std::size_t n)
{
    std::vector<std::vector<std::uint32_t>> out;
    if (n == 0)
        return out;
    for (std::size_t lead = n; lead-- > 0;) {
        std::vector<std::uint32_t> d(n, 0);
        d[lead] = 1;
        while (true) {
            out.push_back(d);
            std::size_t pos = n;
            bool advanced = false;
            while (pos > lead + 1) {
                --pos;
                if (++d[pos] < p) {
                    advanced = true;
                    break;
                }
                d[pos] = 0;
            }
            if (!advanced)
                break;
        }
    }
    return out;
}

} // namespace trank
