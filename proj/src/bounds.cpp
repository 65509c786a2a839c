#include "trank/bounds.hpp"

#include "trank/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace trank {

namespace {

std::size_t first_nonzero(const Vector &x)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero())
            return i;
    return x.size();
}

bool is_rank_one(const Matrix &m)
{
    return !m.is_zero() && matrix_rank(m) == 1;
}

bool perfect_square(const mpz_class &x, mpz_class &root)
{
    if (x < 0)
        return false;
    mpz_sqrt(root.get_mpz_t(), x.get_mpz_t());
    return root * root == x;
}

// Rational roots of A t^2 + B t + C, or nullopt when the polynomial is zero.
std::optional<std::vector<mpq_class>> rational_roots(const mpq_class &A, const mpq_class &B,
                                                     const mpq_class &C)
{
    std::vector<mpq_class> roots;
    if (A == 0) {
        if (B == 0) {
            if (C == 0)
                return std::nullopt;
            return roots;
        }
        roots.push_back(mpq_class(-C / B));
        return roots;
    }
    mpq_class disc = B * B - 4 * A * C;
    disc.canonicalize();
    mpz_class rn, rd;
    if (!perfect_square(disc.get_num(), rn) || !perfect_square(disc.get_den(), rd))
        return roots;
    mpq_class s(rn, rd);
    s.canonicalize();
    roots.push_back(mpq_class((-B + s) / (2 * A)));
    if (s != 0)
        roots.push_back(mpq_class((-B - s) / (2 * A)));
    return roots;
}

std::optional<std::vector<mpq_class>> pencil_candidates(const Matrix &s, const Matrix &t)
{
    // Every 2x2 minor of s + x·t is a polynomial of degree <= 2 in x; the
    // first nonzero one limits the candidates to its rational roots.
    for (std::size_t r1 = 0; r1 < s.rows(); ++r1)
        for (std::size_t r2 = r1 + 1; r2 < s.rows(); ++r2)
            for (std::size_t c1 = 0; c1 < s.cols(); ++c1)
                for (std::size_t c2 = c1 + 1; c2 < s.cols(); ++c2) {
                    const mpq_class &a = s(r1, c1).rational(), &b = t(r1, c1).rational();
                    const mpq_class &d = s(r2, c2).rational(), &e = t(r2, c2).rational();
                    const mpq_class &c = s(r1, c2).rational(), &f = t(r1, c2).rational();
                    const mpq_class &g = s(r2, c1).rational(), &h = t(r2, c1).rational();
                    mpq_class A = b * e - f * h;
                    mpq_class B = a * e + b * d - c * h - f * g;
                    mpq_class C = a * d - c * g;
                    auto roots = rational_roots(A, B, C);
                    if (roots)
                        return roots;
                }
    return std::nullopt;
}

} // namespace

SliceSearch find_rank_one_slice(const Tensor3 &p, Axis axis)
{
    const Field f = p.field();
    const std::size_t n = p.dim(axis);
    SliceSearch out;
    if (f.is_prime()) {
        out.exhaustive = true;
        for (const auto &alpha : ProjectivePoints(f, n)) {
            Matrix s = p.contract(axis, alpha);
            if (is_rank_one(s)) {
                out.alpha = alpha;
                out.slice = std::move(s);
                return out;
            }
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Matrix s = p.slice(axis, i);
        if (is_rank_one(s)) {
            out.alpha = unit_vector(f, n, i);
            out.slice = std::move(s);
            return out;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Matrix si = p.slice(axis, i);
            Matrix sj = p.slice(axis, j);
            auto cands = pencil_candidates(si, sj);
            std::vector<mpq_class> ts = cands ? *cands : std::vector<mpq_class>{mpq_class(1)};
            for (const auto &t : ts) {
                Scalar ts_(f, t);
                Matrix s = si + sj.scaled(ts_);
                if (is_rank_one(s)) {
                    Vector alpha = unit_vector(f, n, i);
                    alpha[j] = ts_;
                    out.alpha = std::move(alpha);
                    out.slice = std::move(s);
                    return out;
                }
            }
        }
    return out;
}

Vector canonical_a(const Vector &alpha)
{
    std::size_t q = first_nonzero(alpha);
    if (q == alpha.size())
        throw PreconditionError("zero functional");
    Field f = alpha[q].field();
    Vector a = zero_vector(f, alpha.size());
    a[q] = alpha[q].inverse();
    return a;
}

std::vector<Vector> affine_hyperplane(const Vector &alpha)
{
    Vector base = canonical_a(alpha);
    Field f = base[0].field();
    if (!f.is_prime())
        throw UnsupportedField("affine hyperplane enumeration needs a finite field");
    const std::size_t n = alpha.size();
    const std::size_t q = first_nonzero(alpha);
    std::vector<Vector> kers;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == q)
            continue;
        Vector k = unit_vector(f, n, j);
        k[q] = -(alpha[j] / alpha[q]);
        kers.push_back(std::move(k));
    }
    std::vector<Vector> out;
    std::vector<std::uint32_t> digits(kers.size(), 0);
    while (true) {
        Vector a = base;
        for (std::size_t t = 0; t < kers.size(); ++t)
            if (digits[t] != 0)
                a = add(a, scale(Scalar::from_residue(f, digits[t]), kers[t]));
        out.push_back(std::move(a));
        std::size_t pos = digits.size();
        bool advanced = false;
        while (pos > 0) {
            --pos;
            if (++digits[pos] < f.modulus()) {
                advanced = true;
                break;
            }
            digits[pos] = 0;
        }
        if (!advanced)
            break;
    }
    return out;
}

PeelCertificate peel(const Tensor3 &p, Axis axis, const Vector &alpha, const Vector &a)
{
    const Field f = p.field();
    const std::size_t n = p.dim(axis);
    if (alpha.size() != n || a.size() != n)
        throw DimensionError("peel: functional or vector has the wrong length");
    if (!dot(alpha, a).is_one())
        throw PreconditionError("peel: α(a) must be 1");
    Matrix slice = p.contract(axis, alpha);
    if (slice.is_zero())
        throw PreconditionError("peel: p(α) is zero");
    const std::size_t q = first_nonzero(alpha);

    Tensor3 front = p.to_front(axis);
    const Dims &d = front.dims();
    std::vector<Matrix> slices;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == q)
            continue;
        slices.push_back(front.slice(Axis::A, j) - slice.scaled(a[j]));
    }
    Tensor3 residual =
        Tensor3::from_slices(f, slices, d[1], d[2]).permuted(front_permutation(axis));
    std::size_t rank = matrix_rank(slice);
    return {axis, alpha, a, std::move(residual), std::move(slice), rank, rank == 1};
}

Tensor3 reconstruct(const PeelCertificate &cert)
{
    const Vector &alpha = cert.alpha;
    const std::size_t n = alpha.size();
    const std::size_t q = first_nonzero(alpha);
    Tensor3 front = cert.residual.to_front(cert.axis);
    const Field f = front.field();
    const Dims &d = front.dims();
    std::vector<Matrix> reduced;
    for (std::size_t j = 0; j < d[0]; ++j)
        reduced.push_back(front.slice(Axis::A, j));
    std::vector<Matrix> full;
    Matrix at_q(f, d[1], d[2]);
    for (std::size_t j = 0, t = 0; j < n; ++j) {
        if (j == q) {
            full.emplace_back(f, d[1], d[2]);
            continue;
        }
        at_q = at_q - reduced[t].scaled(alpha[j] / alpha[q]);
        full.push_back(reduced[t++]);
    }
    full[q] = at_q;
    for (std::size_t j = 0; j < n; ++j)
        full[j] = full[j] + cert.slice.scaled(cert.chosen_a[j]);
    return Tensor3::from_slices(f, full, d[1], d[2]).permuted(front_permutation(cert.axis));
}

namespace {

struct BoundNode {
    std::size_t bound;
    std::vector<PeelStep> trace;
    std::size_t final_flattening;
};

class Substitution {
  public:
    explicit Substitution(std::uint64_t budget) : budget_(budget) {}

    BoundNode run(const Tensor3 &p)
    {
        Tensor3 t = concise_reduce(p).tensor;
        const Dims &d = t.dims();
        std::size_t flat = std::max({d[0], d[1], d[2]});
        if (d[0] == 0 || d[1] == 0 || d[2] == 0)
            return {0, {}, 0};
        std::string key = memo_key(t);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        if (nodes_ >= budget_) {
            exhausted_ = true;
            return {flat, {}, flat};
        }
        ++nodes_;

        std::optional<std::pair<Axis, Vector>> found;
        for (int a = 0; a < 3 && !found; ++a) {
            Axis axis = static_cast<Axis>(a);
            SliceSearch s = find_rank_one_slice(t, axis);
            if (s.alpha)
                found.emplace(axis, *s.alpha);
        }
        BoundNode res{flat, {}, flat};
        if (found) {
            auto [axis, alpha] = *found;
            std::optional<BoundNode> best;
            Vector best_a;
            Dims best_dims{};
            for (const auto &a : affine_hyperplane(alpha)) {
                PeelCertificate cert = peel(t, axis, alpha, a);
                BoundNode child = run(cert.residual);
                if (!best || child.bound < best->bound) {
                    best = child;
                    best_a = a;
                    best_dims = cert.residual.dims();
                }
                // The flattening bound already wins.
                if (best->bound + 1 <= flat)
                    break;
            }
            if (best->bound + 1 > flat) {
                res.bound = best->bound + 1;
                res.trace.push_back({axis, alpha, best_a, best_dims, best->bound});
                res.trace.insert(res.trace.end(), best->trace.begin(), best->trace.end());
                res.final_flattening = best->final_flattening;
            }
        }
        if (!exhausted_)
            memo_.emplace(std::move(key), res);
        return res;
    }

    bool exhausted() const { return exhausted_; }
    std::uint64_t nodes() const { return nodes_; }

  private:
    static std::string memo_key(const Tensor3 &t)
    {
        std::string k;
        for (auto x : t.dims())
            k += std::to_string(x) + ",";
        for (const auto &x : t.entries())
            k += std::to_string(x.residue()) + ",";
        return k;
    }

    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::map<std::string, BoundNode> memo_;
};

} // namespace

SubstitutionBound substitution_lower_bound(const Tensor3 &p, std::uint64_t budget)
{
    if (!p.field().is_prime())
        throw UnsupportedField("substitution_lower_bound needs a finite field");
    Substitution s(budget);
    BoundNode n = s.run(p);
    SubstitutionBound out;
    Dims fr = flattening_ranks(p);
    out.flattening = std::max({fr[0], fr[1], fr[2]});
    out.bound = std::max(n.bound, out.flattening);
    out.trace = std::move(n.trace);
    out.final_flattening = out.trace.empty() ? out.flattening : n.final_flattening;
    out.budget_exhausted = s.exhausted();
    out.nodes = s.nodes();
    return out;
}

Decomposition slice_rank_decomposition(const Tensor3 &p, Axis axis)
{
    const Field f = p.field();
    Tensor3 front = p.to_front(axis);
    const Dims &d = front.dims();
    Decomposition out(f, d);
    for (std::size_t i = 0; i < d[0]; ++i) {
        Matrix m = front.slice(Axis::A, i);
        RowEchelon e = rref(m);
        for (std::size_t t = 0; t < e.rank(); ++t)
            out.push_back(RankOneTerm(unit_vector(f, d[0], i), m.column(e.pivots[t]),
                                      e.reduced.row(t)));
    }
    return out.permuted(front_permutation(axis));
}

UpperBound upper_bound(const Tensor3 &p, const std::optional<BlockSplit> &split)
{
    const Field f = p.field();
    std::optional<UpperBound> best;
    auto offer = [&](Decomposition d, std::string source) {
        if (best && d.size() >= best->witness.size())
            return;
        if (!certifies(d, p))
            return;
        best = UpperBound{std::move(d), std::move(source)};
    };
    for (int a = 0; a < 3; ++a) {
        Axis axis = static_cast<Axis>(a);
        offer(slice_rank_decomposition(p, axis), std::string("slice ranks along ") + axis_name(axis));
    }
    if (p.dims() == Dims{4, 4, 4} && p == matmul_tensor(2, 2, 2, f))
        offer(strassen_222(f), "Strassen table");
    if (split && split->a1 + split->a2 == p.dim(Axis::A)) {
        try {
            auto [p1, p2] = split_direct_sum(p, *split);
            UpperBound u1 = upper_bound(p1), u2 = upper_bound(p2);
            offer(Decomposition::concatenate_direct(u1.witness, u2.witness),
                  "concatenated blocks (" + u1.source + "; " + u2.source + ")");
        } catch (const PreconditionError &) {
            // not block supported; the plain bounds stand
        }
    }
    return *best;
}

} // namespace trank
