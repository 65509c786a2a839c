#include "trank/tensor.hpp"

#include "trank/error.hpp"

#include <string>
#include <utility>

namespace trank {

const char *axis_name(Axis axis)
{
    switch (axis) {
    case Axis::A:
        return "A";
    case Axis::B:
        return "B";
    case Axis::C:
        return "C";
    }
    return "?";
}

Axis parse_axis(char c)
{
    switch (c) {
    case 'A':
    case 'a':
        return Axis::A;
    case 'B':
    case 'b':
        return Axis::B;
    case 'C':
    case 'c':
        return Axis::C;
    }
    throw PreconditionError(std::string("unknown axis '") + c + "'");
}

namespace {

void check_dims(const Dims &d)
{
    for (auto x : d)
        if (x > kMaxTensorDim)
            throw DimensionError("tensor dimension " + std::to_string(x) + " exceeds " +
                                 std::to_string(kMaxTensorDim));
}

std::size_t other_axis(Axis axis, int which)
{
    static const std::size_t table[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    return table[static_cast<std::size_t>(axis)][which];
}

} // namespace

Tensor3::Tensor3(Field f, Dims dims)
    : field_(f), dims_(dims), data_((check_dims(dims), dims[0] * dims[1] * dims[2]), Scalar::zero(f))
{
}

Tensor3::Tensor3(Field f, Dims dims, std::vector<Scalar> entries)
    : field_(f), dims_(dims), data_(std::move(entries))
{
    check_dims(dims);
    if (data_.size() != dims[0] * dims[1] * dims[2])
        throw DimensionError("tensor entry count " + std::to_string(data_.size()) +
                             " does not match dims");
    for (const auto &x : data_)
        require_same_field(f, x.field());
}

Tensor3 Tensor3::from_ints(Field f, Dims dims, const std::vector<long long> &values)
{
    std::vector<Scalar> data;
    data.reserve(values.size());
    for (long long v : values)
        data.emplace_back(f, v);
    return Tensor3(f, dims, std::move(data));
}

Tensor3 Tensor3::from_slices(Field f, const std::vector<Matrix> &slices, std::size_t b,
                             std::size_t c)
{
    Tensor3 t(f, {slices.size(), b, c});
    for (std::size_t i = 0; i < slices.size(); ++i) {
        if (slices[i].rows() != b || slices[i].cols() != c)
            throw DimensionError("slice shape mismatch");
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < c; ++k)
                t(i, j, k) = slices[i](j, k);
    }
    return t;
}

bool Tensor3::is_zero() const
{
    return trank::is_zero(data_);
}

Tensor3 Tensor3::permuted(const std::array<int, 3> &perm) const
{
    Dims nd{dims_[perm[0]], dims_[perm[1]], dims_[perm[2]]};
    Tensor3 t(field_, nd);
    std::array<std::size_t, 3> old{};
    for (std::size_t x = 0; x < nd[0]; ++x)
        for (std::size_t y = 0; y < nd[1]; ++y)
            for (std::size_t z = 0; z < nd[2]; ++z) {
                old[perm[0]] = x;
                old[perm[1]] = y;
                old[perm[2]] = z;
                t(x, y, z) = (*this)(old[0], old[1], old[2]);
            }
    return t;
}

std::array<int, 3> front_permutation(Axis axis)
{
    switch (axis) {
    case Axis::A:
        return {0, 1, 2};
    case Axis::B:
        return {1, 0, 2};
    case Axis::C:
        return {1, 2, 0};
    }
    return {0, 1, 2};
}

Tensor3 Tensor3::to_front(Axis axis) const
{
    switch (axis) {
    case Axis::A:
        return *this;
    case Axis::B:
        return permuted({1, 0, 2});
    case Axis::C:
        return permuted({2, 0, 1});
    }
    return *this;
}

Matrix Tensor3::slice(Axis axis, std::size_t i) const
{
    Vector alpha = zero_vector(field_, dim(axis));
    alpha.at(i) = Scalar::one(field_);
    return contract(axis, alpha);
}

Matrix Tensor3::contract(Axis axis, const Vector &alpha) const
{
    if (alpha.size() != dim(axis))
        throw DimensionError("functional length does not match the axis");
    std::size_t r = dims_[other_axis(axis, 0)];
    std::size_t c = dims_[other_axis(axis, 1)];
    Matrix m(field_, r, c);
    for (std::size_t i = 0; i < dims_[0]; ++i)
        for (std::size_t j = 0; j < dims_[1]; ++j)
            for (std::size_t k = 0; k < dims_[2]; ++k) {
                const Scalar &x = (*this)(i, j, k);
                if (x.is_zero())
                    continue;
                switch (axis) {
                case Axis::A:
                    m(j, k) += alpha[i] * x;
                    break;
                case Axis::B:
                    m(i, k) += alpha[j] * x;
                    break;
                case Axis::C:
                    m(i, j) += alpha[k] * x;
                    break;
                }
            }
    return m;
}

Matrix Tensor3::flattening(Axis axis) const
{
    Tensor3 t = to_front(axis);
    const Dims &d = t.dims();
    return Matrix(field_, d[0], d[1] * d[2], t.entries());
}

Tensor3 Tensor3::transform(Axis axis, const Matrix &map) const
{
    require_same_field(field_, map.field());
    if (map.cols() != dim(axis))
        throw DimensionError("axis map has the wrong number of columns");
    Tensor3 front = to_front(axis);
    const Dims &d = front.dims();
    Matrix flat(field_, d[0], d[1] * d[2], front.entries());
    Matrix mapped = map * flat;
    Tensor3 out(field_, {map.rows(), d[1], d[2]}, mapped.entries());
    return out.permuted(front_permutation(axis));
}

Tensor3 Tensor3::operator+(const Tensor3 &o) const
{
    require_same_field(field_, o.field_);
    if (dims_ != o.dims_)
        throw DimensionError("tensor sum shape mismatch");
    return Tensor3(field_, dims_, add(data_, o.data_));
}

Tensor3 Tensor3::operator-(const Tensor3 &o) const
{
    return *this + o.scaled(-Scalar::one(field_));
}

Tensor3 Tensor3::scaled(const Scalar &s) const
{
    return Tensor3(field_, dims_, scale(s, data_));
}

bool Tensor3::operator==(const Tensor3 &o) const
{
    return field_ == o.field_ && dims_ == o.dims_ && data_ == o.data_;
}

Tensor3 simple_tensor(const Vector &u, const Vector &v, const Vector &w)
{
    if (u.empty() || v.empty() || w.empty())
        throw DimensionError("simple tensor needs nonempty factors");
    Field f = u[0].field();
    Tensor3 t(f, {u.size(), v.size(), w.size()});
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_zero())
            continue;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j].is_zero())
                continue;
            Scalar uv = u[i] * v[j];
            for (std::size_t k = 0; k < w.size(); ++k)
                t(i, j, k) = uv * w[k];
        }
    }
    return t;
}

MatrixSpace::MatrixSpace(Field f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols)
{
}

MatrixSpace MatrixSpace::spanned_by(Field f, std::size_t rows, std::size_t cols,
                                    const std::vector<Matrix> &spanning)
{
    MatrixSpace s(f, rows, cols);
    std::vector<Vector> vecs;
    for (const auto &m : spanning) {
        if (m.rows() != rows || m.cols() != cols)
            throw DimensionError("matrix space member has the wrong shape");
        require_same_field(f, m.field());
        vecs.push_back(m.vectorized());
    }
    for (auto idx : independent_subset(f, vecs, rows * cols))
        s.basis_.push_back(spanning[idx]);
    return s;
}

std::vector<Vector> MatrixSpace::vectors() const
{
    std::vector<Vector> v;
    for (const auto &m : basis_)
        v.push_back(m.vectorized());
    return v;
}

bool MatrixSpace::contains(const Matrix &m) const
{
    if (m.rows() != rows_ || m.cols() != cols_)
        throw DimensionError("matrix shape does not match the space");
    if (m.is_zero())
        return true;
    if (basis_.empty())
        return false;
    return in_span(field_, vectors(), m.vectorized());
}

bool MatrixSpace::same_span(const MatrixSpace &o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_ || dim() != o.dim())
        return false;
    for (const auto &m : o.basis_)
        if (!contains(m))
            return false;
    return true;
}

MatrixSpace slice_space(const Tensor3 &p, Axis axis)
{
    std::size_t r = p.dims()[other_axis(axis, 0)];
    std::size_t c = p.dims()[other_axis(axis, 1)];
    MatrixSpace empty(p.field(), r, c);
    if (p.dim(axis) == 0 || r * c == 0)
        return empty;
    RowEchelon e = rref(p.flattening(axis));
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < e.rank(); ++i)
        basis.emplace_back(p.field(), r, c, e.reduced.row(i));
    return MatrixSpace::spanned_by(p.field(), r, c, basis);
}

Dims flattening_ranks(const Tensor3 &p)
{
    Dims r{};
    for (int a = 0; a < 3; ++a) {
        Axis axis = static_cast<Axis>(a);
        r[a] = p.size() == 0 ? 0 : matrix_rank(p.flattening(axis));
    }
    return r;
}

namespace {

// Factor the flattening on `axis` as L·R (R in reduced echelon form) and
// replace the axis by the row space of R.
std::pair<Tensor3, AxisReduction> reduce_axis(const Tensor3 &p, Axis axis)
{
    const Field f = p.field();
    const std::size_t n = p.dim(axis);
    Matrix flat = p.size() == 0 ? Matrix(f, n, 0) : p.flattening(axis);
    std::size_t r = p.size() == 0 ? 0 : matrix_rank(flat);
    if (r == n)
        return {p, {Matrix::identity(f, n), Matrix::identity(f, n), true}};

    RowEchelon e = rref(flat);
    Matrix left(f, n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < r; ++t)
            left(i, t) = flat(i, e.pivots[t]);

    // Left inverse of `left` from r independent rows.
    Matrix project(f, r, n);
    if (r > 0) {
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < n; ++i)
            rows.push_back(left.row(i));
        std::vector<std::size_t> chosen = independent_subset(f, rows, r);
        Matrix square(f, r, r);
        for (std::size_t t = 0; t < r; ++t)
            for (std::size_t s = 0; s < r; ++s)
                square(t, s) = left(chosen[t], s);
        Matrix inv = *solve_linear(square, Matrix::identity(f, r));
        for (std::size_t t = 0; t < r; ++t)
            for (std::size_t s = 0; s < r; ++s)
                project(t, chosen[s]) = inv(t, s);
    }
    return {p.transform(axis, project), {left, project, false}};
}

} // namespace

ConciseForm concise_reduce(const Tensor3 &p)
{
    Tensor3 t = p;
    std::array<std::optional<AxisReduction>, 3> maps;
    for (int a = 0; a < 3; ++a) {
        auto [reduced, red] = reduce_axis(t, static_cast<Axis>(a));
        t = std::move(reduced);
        maps[a] = std::move(red);
    }
    return {t, {*maps[0], *maps[1], *maps[2]}};
}

Tensor3 expand_concise(const ConciseForm &form)
{
    Tensor3 t = form.tensor;
    for (int a = 0; a < 3; ++a)
        t = t.transform(static_cast<Axis>(a), form.maps[a].embed);
    return t;
}

Tensor3 direct_sum(const Tensor3 &p1, const Tensor3 &p2)
{
    require_same_field(p1.field(), p2.field());
    const Dims &d1 = p1.dims();
    const Dims &d2 = p2.dims();
    Tensor3 t(p1.field(), {d1[0] + d2[0], d1[1] + d2[1], d1[2] + d2[2]});
    for (std::size_t i = 0; i < d1[0]; ++i)
        for (std::size_t j = 0; j < d1[1]; ++j)
            for (std::size_t k = 0; k < d1[2]; ++k)
                t(i, j, k) = p1(i, j, k);
    for (std::size_t i = 0; i < d2[0]; ++i)
        for (std::size_t j = 0; j < d2[1]; ++j)
            for (std::size_t k = 0; k < d2[2]; ++k)
                t(d1[0] + i, d1[1] + j, d1[2] + k) = p2(i, j, k);
    return t;
}

Tensor3 matmul_tensor(std::size_t i, std::size_t j, std::size_t k, const Field &f)
{
    if (i == 0 || j == 0 || k == 0)
        throw DimensionError("matmul_tensor needs positive sizes");
    if (i * j > kMaxTensorDim || j * k > kMaxTensorDim || i * k > kMaxTensorDim)
        throw DimensionError("matmul_tensor: i·j, j·k and i·k must be at most 32");
    Tensor3 t(f, {i * j, j * k, i * k});
    for (std::size_t r = 0; r < i; ++r)
        for (std::size_t s = 0; s < j; ++s)
            for (std::size_t u = 0; u < k; ++u)
                t(r * j + s, s * k + u, r * k + u) = Scalar::one(f);
    return t;
}

HookShape coordinate_hook(const Field &f, std::size_t b, std::size_t c, std::size_t e,
                          std::size_t fcols)
{
    if (e > b || fcols > c)
        throw DimensionError("hook larger than the ambient space");
    HookShape h;
    h.e = e;
    h.f = fcols;
    for (std::size_t i = 0; i < e; ++i)
        h.rows.push_back(unit_vector(f, b, i));
    for (std::size_t i = 0; i < fcols; ++i)
        h.cols.push_back(unit_vector(f, c, i));
    return h;
}

namespace {

std::vector<Vector> hook_spanning_set(const Field &f, std::size_t b, std::size_t c,
                                      const HookShape &hook)
{
    if (hook.rows.size() != hook.e || hook.cols.size() != hook.f)
        throw DimensionError("hook basis sizes do not match (e, f)");
    for (const auto &g : hook.rows)
        if (g.size() != b)
            throw DimensionError("hook row vector has the wrong length");
    for (const auto &h : hook.cols)
        if (h.size() != c)
            throw DimensionError("hook column vector has the wrong length");
    std::vector<Vector> gens;
    for (const auto &g : hook.rows)
        for (std::size_t k = 0; k < c; ++k)
            gens.push_back(outer(g, unit_vector(f, c, k)).vectorized());
    for (const auto &h : hook.cols)
        for (std::size_t j = 0; j < b; ++j)
            gens.push_back(outer(unit_vector(f, b, j), h).vectorized());
    return gens;
}

} // namespace

bool is_hook_shaped(const Matrix &m, const HookShape &hook)
{
    const Field f = m.field();
    if (m.is_zero())
        return true;
    auto gens = hook_spanning_set(f, m.rows(), m.cols(), hook);
    if (gens.empty())
        return false;
    return in_span(f, gens, m.vectorized());
}

bool is_hook_shaped(const MatrixSpace &w, const HookShape &hook)
{
    const Field f = w.field();
    auto gens = hook_spanning_set(f, w.rows(), w.cols(), hook);
    for (const auto &m : w.basis()) {
        if (m.is_zero())
            continue;
        if (gens.empty() || !in_span(f, gens, m.vectorized()))
            return false;
    }
    return true;
}

namespace {

// Calls visit(G) for every e×n reduced echelon matrix of rank e; stops when
// visit returns true.
template <class Visit>
bool for_each_subspace(const Field &f, std::size_t n, std::size_t e, Visit &&visit)
{
    const std::uint32_t p = f.modulus();
    std::vector<std::size_t> piv(e);
    for (std::size_t i = 0; i < e; ++i)
        piv[i] = i;
    while (true) {
        // Free slots: (row i, column c) with c > piv[i] and c not a pivot.
        std::vector<bool> is_piv(n, false);
        for (auto c : piv)
            is_piv[c] = true;
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t i = 0; i < e; ++i)
            for (std::size_t c = piv[i] + 1; c < n; ++c)
                if (!is_piv[c])
                    slots.emplace_back(i, c);
        std::vector<std::uint32_t> digits(slots.size(), 0);
        while (true) {
            Matrix g(f, e, n);
            for (std::size_t i = 0; i < e; ++i)
                g(i, piv[i]) = Scalar::one(f);
            for (std::size_t s = 0; s < slots.size(); ++s)
                g(slots[s].first, slots[s].second) = Scalar::from_residue(f, digits[s]);
            if (visit(g))
                return true;
            std::size_t pos = slots.size();
            bool advanced = false;
            while (pos > 0) {
                --pos;
                if (++digits[pos] < p) {
                    advanced = true;
                    break;
                }
                digits[pos] = 0;
            }
            if (!advanced)
                break;
        }
        // Next pivot combination in lexicographic order.
        std::size_t i = e;
        while (i > 0 && piv[i - 1] == n - e + (i - 1))
            --i;
        if (i == 0)
            return false;
        ++piv[i - 1];
        for (std::size_t t = i; t < e; ++t)
            piv[t] = piv[t - 1] + 1;
    }
}

} // namespace

std::optional<HookShape> find_hook_shape(const MatrixSpace &w, std::size_t e, std::size_t f)
{
    const Field fld = w.field();
    if (!fld.is_prime())
        throw UnsupportedField("find_hook_shape searches over a finite field only");
    const std::size_t b = w.rows();
    const std::size_t c = w.cols();
    if (b > 6 || c > 6)
        throw DimensionError("find_hook_shape supports ambient dims up to 6");
    if (e > 3 || f > 3)
        throw DimensionError("find_hook_shape supports e, f up to 3");
    if (e > b || f > c)
        return std::nullopt;

    std::optional<HookShape> found;
    for_each_subspace(fld, b, e, [&](const Matrix &g) {
        RowEchelon ge = rref(g);
        std::vector<bool> is_piv(b, false);
        for (auto pc : ge.pivots)
            is_piv[pc] = true;
        // Rows of each member modulo G span the smallest admissible H.
        std::vector<Vector> hrows;
        for (const auto &m : w.basis()) {
            Matrix red = m;
            for (std::size_t r = 0; r < ge.rank(); ++r) {
                std::size_t pc = ge.pivots[r];
                for (std::size_t k = 0; k < c; ++k) {
                    Scalar coef = red(pc, k);
                    if (coef.is_zero())
                        continue;
                    for (std::size_t j = 0; j < b; ++j)
                        red(j, k) -= coef * ge.reduced(r, j);
                }
            }
            for (std::size_t j = 0; j < b; ++j)
                if (!is_piv[j])
                    hrows.push_back(red.row(j));
        }
        std::vector<Vector> hbasis = span_basis(fld, hrows, c);
        if (hbasis.size() > f)
            return false;
        for (std::size_t k = 0; k < c && hbasis.size() < f; ++k) {
            Vector u = unit_vector(fld, c, k);
            if (!in_span(fld, hbasis, u))
                hbasis.push_back(u);
        }
        HookShape h;
        h.e = e;
        h.f = f;
        for (std::size_t r = 0; r < e; ++r)
            h.rows.push_back(g.row(r));
        h.cols = std::move(hbasis);
        found = std::move(h);
        return true;
    });
    return found;
}

} // namespace trank
