#include "trank/decomposition.hpp"

#include "trank/error.hpp"

#include <string>
#include <utility>

namespace trank {

RankOneTerm::RankOneTerm(Vector u_, Vector v_, Vector w_)
    : u(std::move(u_)), v(std::move(v_)), w(std::move(w_))
{
    if (u.empty() || v.empty() || w.empty() || is_zero(u) || is_zero(v) || is_zero(w))
        throw PreconditionError("rank-one term with a zero factor");
}

Decomposition::Decomposition(Field f, Dims dims) : field_(f), dims_(dims) {}

Decomposition::Decomposition(Field f, Dims dims, std::vector<RankOneTerm> terms)
    : field_(f), dims_(dims)
{
    for (auto &t : terms)
        push_back(std::move(t));
}

void Decomposition::push_back(RankOneTerm t)
{
    if (t.u.size() != dims_[0] || t.v.size() != dims_[1] || t.w.size() != dims_[2])
        throw DimensionError("term does not match decomposition dims");
    require_same_field(field_, t.u[0].field());
    terms_.push_back(std::move(t));
}

Decomposition Decomposition::without(std::size_t index) const
{
    if (index >= terms_.size())
        throw DimensionError("term index out of range");
    Decomposition d(field_, dims_);
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (i != index)
            d.terms_.push_back(terms_[i]);
    return d;
}

namespace {

Vector pad(const Vector &x, std::size_t before, std::size_t after, const Field &f)
{
    Vector r = zero_vector(f, before);
    r.insert(r.end(), x.begin(), x.end());
    Vector tail = zero_vector(f, after);
    r.insert(r.end(), tail.begin(), tail.end());
    return r;
}

} // namespace

Decomposition Decomposition::concatenate_direct(const Decomposition &a, const Decomposition &b)
{
    require_same_field(a.field_, b.field_);
    const Field f = a.field_;
    const Dims &da = a.dims_;
    const Dims &db = b.dims_;
    Decomposition d(f, {da[0] + db[0], da[1] + db[1], da[2] + db[2]});
    for (const auto &t : a.terms_)
        d.push_back(RankOneTerm(pad(t.u, 0, db[0], f), pad(t.v, 0, db[1], f), pad(t.w, 0, db[2], f)));
    for (const auto &t : b.terms_)
        d.push_back(RankOneTerm(pad(t.u, da[0], 0, f), pad(t.v, da[1], 0, f), pad(t.w, da[2], 0, f)));
    return d;
}

Decomposition Decomposition::transform(Axis axis, const Matrix &map) const
{
    Dims nd = dims_;
    nd[static_cast<std::size_t>(axis)] = map.rows();
    Decomposition d(field_, nd);
    for (const auto &t : terms_) {
        Vector u = t.u, v = t.v, w = t.w;
        Vector &x = axis == Axis::A ? u : axis == Axis::B ? v : w;
        x = map.apply(x);
        if (is_zero(x))
            throw PreconditionError("axis map kills a term factor");
        d.terms_.emplace_back(std::move(u), std::move(v), std::move(w));
    }
    return d;
}

Decomposition Decomposition::permuted(const std::array<int, 3> &perm) const
{
    Dims nd{dims_[perm[0]], dims_[perm[1]], dims_[perm[2]]};
    Decomposition d(field_, nd);
    for (const auto &t : terms_) {
        const Vector *f[3] = {&t.u, &t.v, &t.w};
        d.terms_.emplace_back(*f[perm[0]], *f[perm[1]], *f[perm[2]]);
    }
    return d;
}

Tensor3 evaluate(const Decomposition &d, const std::vector<Scalar> &coefficients)
{
    if (coefficients.size() != d.size())
        throw DimensionError("coefficient count " + std::to_string(coefficients.size()) +
                             " does not match term count " + std::to_string(d.size()));
    Tensor3 sum(d.field(), d.dims());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (coefficients[i].is_zero())
            continue;
        sum = sum + d[i].tensor().scaled(coefficients[i]);
    }
    return sum;
}

Tensor3 evaluate(const Decomposition &d)
{
    return evaluate(d, std::vector<Scalar>(d.size(), Scalar::one(d.field())));
}

std::optional<std::vector<Scalar>> certifies(const Decomposition &d, const Tensor3 &p)
{
    require_same_field(d.field(), p.field());
    if (d.dims() != p.dims())
        throw DimensionError("decomposition dims do not match the tensor");
    const Field f = p.field();
    if (d.size() == 0) {
        if (p.is_zero())
            return std::vector<Scalar>{};
        return std::nullopt;
    }
    std::vector<Vector> cols;
    for (const auto &t : d.terms())
        cols.push_back(t.tensor().entries());
    auto x = span_coefficients(f, cols, p.entries());
    if (!x)
        return std::nullopt;
    return std::vector<Scalar>(x->begin(), x->end());
}

Decomposition strassen_222(const Field &f)
{
    // Coordinates: a_rs -> 2r+s, b_st -> 2s+t, c_rt -> 2r+t (zero-based).
    auto vec = [&](std::initializer_list<long long> xs) {
        Vector v;
        for (long long x : xs)
            v.emplace_back(f, x);
        return v;
    };
    Decomposition d(f, {4, 4, 4});
    // I   = (a11+a22)(b11+b22)   -> c11, c22
    d.push_back({vec({1, 0, 0, 1}), vec({1, 0, 0, 1}), vec({1, 0, 0, 1})});
    // II  = (a21+a22) b11        -> c21, -c22
    d.push_back({vec({0, 0, 1, 1}), vec({1, 0, 0, 0}), vec({0, 0, 1, -1})});
    // III = a11 (b12-b22)        -> c12, c22
    d.push_back({vec({1, 0, 0, 0}), vec({0, 1, 0, -1}), vec({0, 1, 0, 1})});
    // IV  = a22 (b21-b11)        -> c11, c21
    d.push_back({vec({0, 0, 0, 1}), vec({-1, 0, 1, 0}), vec({1, 0, 1, 0})});
    // V   = (a11+a12) b22        -> -c11, c12
    d.push_back({vec({1, 1, 0, 0}), vec({0, 0, 0, 1}), vec({-1, 1, 0, 0})});
    // VI  = (a21-a11)(b11+b12)   -> c22
    d.push_back({vec({-1, 0, 1, 0}), vec({1, 1, 0, 0}), vec({0, 0, 0, 1})});
    // VII = (a12-a22)(b21+b22)   -> c11
    d.push_back({vec({0, 1, 0, -1}), vec({0, 0, 1, 1}), vec({1, 0, 0, 0})});
    return d;
}

} // namespace trank
