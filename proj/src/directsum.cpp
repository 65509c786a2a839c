#include "trank/directsum.hpp"

#include "trank/bounds.hpp"
#include "trank/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trank {

namespace {

Vector head(const Vector &x, std::size_t n)
{
    return Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
}

Vector tail(const Vector &x, std::size_t n)
{
    return Vector(x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
}

bool member(const Field &f, const std::vector<Vector> &basis, const Vector &x)
{
    if (is_zero(x))
        return true;
    std::vector<Vector> all = basis;
    all.push_back(x);
    return span_dimension(f, all, x.size()) == basis.size();
}

Matrix embed(const Matrix &m, std::size_t rows, std::size_t cols, std::size_t r0, std::size_t c0)
{
    Matrix out(m.field(), rows, cols);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(r0 + i, c0 + j) = m(i, j);
    return out;
}

Matrix block(const Matrix &m, std::size_t r0, std::size_t rows, std::size_t c0, std::size_t cols)
{
    Matrix out(m.field(), rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out(i, j) = m(r0 + i, c0 + j);
    return out;
}

Matrix reshape(const Field &f, const Vector &x, std::size_t rows, std::size_t cols)
{
    return Matrix(f, rows, cols, x);
}

// λ with targets[k] = Σ_i λ(i,k) generators[i], or nullopt.
std::optional<Matrix> express(const Field &f, const std::vector<Vector> &generators,
                              const std::vector<Vector> &targets, std::size_t n)
{
    if (targets.empty())
        return Matrix(f, generators.size(), 0);
    if (generators.empty()) {
        for (const auto &t : targets)
            if (!is_zero(t))
                return std::nullopt;
        return Matrix(f, 0, targets.size());
    }
    return solve_linear(Matrix::from_columns(f, generators, n), Matrix::from_columns(f, targets, n));
}

// Coordinates of x modulo span(basis) on the non-pivot positions.
class Quotient {
  public:
    Quotient(const Field &f, const std::vector<Vector> &vectors, std::size_t n)
        : basis_(span_basis(f, vectors, n)), n_(n)
    {
        for (const auto &b : basis_) {
            std::size_t p = 0;
            while (b[p].is_zero())
                ++p;
            pivots_.push_back(p);
        }
    }

    std::size_t dim() const { return n_ - pivots_.size(); }

    Vector reduce(Vector x) const
    {
        for (std::size_t t = 0; t < basis_.size(); ++t) {
            Scalar c = x[pivots_[t]];
            if (!c.is_zero())
                x = add(x, scale(-c, basis_[t]));
        }
        Vector out;
        for (std::size_t i = 0; i < n_; ++i)
            if (std::find(pivots_.begin(), pivots_.end(), i) == pivots_.end())
                out.push_back(x[i]);
        return out;
    }

  private:
    std::vector<Vector> basis_;
    std::vector<std::size_t> pivots_;
    std::size_t n_;
};

std::pair<Vector, Vector> factor_rank_one(const Matrix &m)
{
    const Field &f = m.field();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Vector w = m.row(i);
        if (is_zero(w))
            continue;
        std::size_t k = 0;
        while (w[k].is_zero())
            ++k;
        Vector v = zero_vector(f, m.rows());
        for (std::size_t j = 0; j < m.rows(); ++j)
            v[j] = m(j, k) / w[k];
        return {v, w};
    }
    throw PreconditionError("zero matrix has no rank-one factorization");
}

} // namespace

BlockSplit BlockSplit::of(const Tensor3 &p1, const Tensor3 &p2)
{
    BlockSplit s;
    s.a1 = p1.dim(Axis::A);
    s.a2 = p2.dim(Axis::A);
    s.b1 = p1.dim(Axis::B);
    s.b2 = p2.dim(Axis::B);
    s.c1 = p1.dim(Axis::C);
    s.c2 = p2.dim(Axis::C);
    return s;
}

void BlockSplit::check(const Dims &dims) const
{
    if (b1 + b2 != dims[1] || c1 + c2 != dims[2] || (a1 + a2 != 0 && a1 + a2 != dims[0]))
        throw DimensionError("block split does not match the ambient dimensions");
}

std::pair<Tensor3, Tensor3> split_direct_sum(const Tensor3 &p, const BlockSplit &split)
{
    split.check(p.dims());
    if (split.a1 + split.a2 != p.dim(Axis::A))
        throw DimensionError("block split has no A-part");
    const Field &f = p.field();
    Tensor3 p1(f, {split.a1, split.b1, split.c1});
    Tensor3 p2(f, {split.a2, split.b2, split.c2});
    const Dims &d = p.dims();
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k) {
                const Scalar &x = p(i, j, k);
                bool first = i < split.a1 && j < split.b1 && k < split.c1;
                bool second = i >= split.a1 && j >= split.b1 && k >= split.c1;
                if (first)
                    p1(i, j, k) = x;
                else if (second)
                    p2(i - split.a1, j - split.b1, k - split.c1) = x;
                else if (!x.is_zero())
                    throw PreconditionError("tensor is not supported on the two blocks");
            }
    return {p1, p2};
}

StickOutProfile stickout_profile(const Decomposition &d, const BlockSplit &split)
{
    split.check(d.dims());
    const Field &f = d.field();
    std::vector<Vector> e1, e2, f1, f2;
    for (const auto &t : d.terms()) {
        Vector v1 = head(t.v, split.b1), v2 = tail(t.v, split.b1);
        Vector w1 = head(t.w, split.c1), w2 = tail(t.w, split.c1);
        if (!is_zero(w2))
            e1.push_back(v1);
        if (!is_zero(w1))
            e2.push_back(v2);
        if (!is_zero(v2))
            f1.push_back(w1);
        if (!is_zero(v1))
            f2.push_back(w2);
    }
    StickOutProfile p;
    p.e1 = span_basis(f, e1, split.b1);
    p.e2 = span_basis(f, e2, split.b2);
    p.f1 = span_basis(f, f1, split.c1);
    p.f2 = span_basis(f, f2, split.c2);
    return p;
}

const char *type_name(TermType t)
{
    switch (t) {
    case TermType::Prime:
        return "Prime";
    case TermType::Bis:
        return "Bis";
    case TermType::HL:
        return "HL";
    case TermType::HR:
        return "HR";
    case TermType::VL:
        return "VL";
    case TermType::VR:
        return "VR";
    case TermType::Mix:
        return "Mix";
    }
    return "?";
}

std::size_t &TypeCounts::operator[](TermType t)
{
    switch (t) {
    case TermType::Prime:
        return prim;
    case TermType::Bis:
        return bis;
    case TermType::HL:
        return hl;
    case TermType::HR:
        return hr;
    case TermType::VL:
        return vl;
    case TermType::VR:
        return vr;
    case TermType::Mix:
        break;
    }
    return mix;
}

ClassifiedDecomposition classify(const Decomposition &d, const BlockSplit &split)
{
    const Field &f = d.field();
    ClassifiedDecomposition cd{d, split, stickout_profile(d, split), {}, {}};
    const StickOutProfile &pr = cd.profile;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto &t = d[i];
        Vector v1 = head(t.v, split.b1), v2 = tail(t.v, split.b1);
        Vector w1 = head(t.w, split.c1), w2 = tail(t.w, split.c1);
        bool zv1 = is_zero(v1), zv2 = is_zero(v2), zw1 = is_zero(w1), zw2 = is_zero(w2);
        bool inE1 = member(f, pr.e1, v1), inE2 = member(f, pr.e2, v2);
        bool inF1 = member(f, pr.f1, w1), inF2 = member(f, pr.f2, w2);
        std::optional<TermType> label;
        if (zv2 && zw2)
            label = TermType::Prime;
        else if (zv1 && zw1)
            label = TermType::Bis;
        else if (zv2 && inE1 && inF2)
            label = TermType::HL;
        else if (zv1 && inE2 && inF1)
            label = TermType::HR;
        else if (zw2 && inF1 && inE2)
            label = TermType::VL;
        else if (zw1 && inF2 && inE1)
            label = TermType::VR;
        else if (inE1 && inE2 && inF1 && inF2)
            label = TermType::Mix;
        if (!label)
            throw PreconditionError("term " + std::to_string(i) + " fits none of the seven types");
        cd.labels.push_back(*label);
        ++cd.counts[*label];
    }
    return cd;
}

Decomposition best_basis(const Tensor3 &p, const Decomposition &d, const BlockSplit &split)
{
    const Field &f = d.field();
    if (!f.is_prime())
        throw UnsupportedField("basis re-choice needs a finite field");
    split.check(d.dims());
    const std::size_t b = d.dims()[1], c = d.dims()[2];
    std::vector<Matrix> mats;
    for (const auto &t : d.terms())
        mats.push_back(t.matrix());
    MatrixSpace v = MatrixSpace::spanned_by(f, b, c, mats);
    const std::size_t r = v.dim();
    if (std::pow(static_cast<double>(f.modulus()), static_cast<double>(r)) > double(1 << 20))
        throw DimensionError("span of the decomposition is too large to enumerate");

    std::vector<Matrix> primes, bises;
    for (const auto &coef : ProjectivePoints(f, r)) {
        Matrix m(f, b, c);
        for (std::size_t i = 0; i < r; ++i)
            if (!coef[i].is_zero())
                m = m + v.basis()[i].scaled(coef[i]);
        if (matrix_rank(m) != 1)
            continue;
        bool in1 = true, in2 = true;
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                if (m(i, j).is_zero())
                    continue;
                bool blk1 = i < split.b1 && j < split.c1;
                bool blk2 = i >= split.b1 && j >= split.c1;
                in1 = in1 && blk1;
                in2 = in2 && blk2;
            }
        if (in1)
            primes.push_back(m);
        else if (in2)
            bises.push_back(m);
    }
    std::vector<Matrix> cands = primes;
    cands.insert(cands.end(), bises.begin(), bises.end());
    cands.insert(cands.end(), mats.begin(), mats.end());
    MatrixSpace chosen = MatrixSpace::spanned_by(f, b, c, cands);

    std::vector<Vector> gens, targets;
    for (const auto &m : chosen.basis())
        gens.push_back(m.vectorized());
    for (std::size_t i = 0; i < p.dim(Axis::A); ++i)
        targets.push_back(p.slice(Axis::A, i).vectorized());
    auto lambda = express(f, gens, targets, b * c);
    if (!lambda)
        throw PreconditionError("decomposition does not span the slices of the tensor");
    Decomposition out(f, d.dims());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Vector u = lambda->row(i);
        if (is_zero(u))
            continue;
        auto [vv, ww] = factor_rank_one(chosen.basis()[i]);
        out.push_back(RankOneTerm(u, vv, ww));
    }
    return out;
}

MatrixSpace block_sum(const MatrixSpace &wp, const MatrixSpace &wb)
{
    require_same_field(wp.field(), wb.field());
    const std::size_t rows = wp.rows() + wb.rows(), cols = wp.cols() + wb.cols();
    std::vector<Matrix> all;
    for (const auto &m : wp.basis())
        all.push_back(embed(m, rows, cols, 0, 0));
    for (const auto &m : wb.basis())
        all.push_back(embed(m, rows, cols, wp.rows(), wp.cols()));
    return MatrixSpace::spanned_by(wp.field(), rows, cols, all);
}

Tensor3 space_tensor(const MatrixSpace &w)
{
    return Tensor3::from_slices(w.field(), w.basis(), w.rows(), w.cols());
}

SpacePair slice_pair(const Tensor3 &p, const BlockSplit &split)
{
    auto [p1, p2] = split_direct_sum(p, split);
    return {slice_space(p1, Axis::A), slice_space(p2, Axis::A)};
}

bool decomposition_covers(const Decomposition &d, const MatrixSpace &w)
{
    std::vector<Vector> gens;
    for (const auto &t : d.terms())
        gens.push_back(t.matrix().vectorized());
    for (const auto &m : w.basis())
        if (!member(d.field(), gens, m.vectorized()))
            return false;
    return true;
}

namespace {

void require_pair(const SpacePair &w, const BlockSplit &split)
{
    if (w.prime.rows() != split.b1 || w.prime.cols() != split.c1 || w.bis.rows() != split.b2 ||
        w.bis.cols() != split.c2)
        throw DimensionError("matrix spaces do not match the block split");
}

Matrix primed_block(const ClassifiedDecomposition &cd, std::size_t v)
{
    const BlockSplit &s = cd.split;
    return block(cd.terms[v].matrix(), 0, s.b1, 0, s.c1);
}

Matrix bis_block(const ClassifiedDecomposition &cd, std::size_t v)
{
    const BlockSplit &s = cd.split;
    return block(cd.terms[v].matrix(), s.b1, s.b2, s.c1, s.c2);
}

TermType prime_or_bis(const ClassifiedDecomposition &cd, std::size_t v)
{
    if (v >= cd.labels.size())
        throw DimensionError("term index out of range");
    TermType t = cd.labels[v];
    if (t != TermType::Prime && t != TermType::Bis)
        throw PreconditionError("term " + std::to_string(v) + " is " + type_name(t) +
                                ", not Prime or Bis");
    return t;
}

} // namespace

SpacePair replete(const SpacePair &w, const ClassifiedDecomposition &cd, std::size_t v)
{
    require_pair(w, cd.split);
    SpacePair out = w;
    const Field &f = w.prime.field();
    if (prime_or_bis(cd, v) == TermType::Prime) {
        std::vector<Matrix> all = w.prime.basis();
        all.push_back(primed_block(cd, v));
        out.prime = MatrixSpace::spanned_by(f, w.prime.rows(), w.prime.cols(), all);
    } else {
        std::vector<Matrix> all = w.bis.basis();
        all.push_back(bis_block(cd, v));
        out.bis = MatrixSpace::spanned_by(f, w.bis.rows(), w.bis.cols(), all);
    }
    return out;
}

DigestResult digest(const SpacePair &w, const ClassifiedDecomposition &cd, std::size_t v,
                    bool require_replete)
{
    require_pair(w, cd.split);
    const BlockSplit &s = cd.split;
    const Field &f = w.prime.field();
    const bool is_prime = prime_or_bis(cd, v) == TermType::Prime;
    const MatrixSpace &target = is_prime ? w.prime : w.bis;
    if (require_replete && !target.contains(is_prime ? primed_block(cd, v) : bis_block(cd, v)))
        throw PreconditionError("pair is not replete with respect to the chosen term");

    const std::size_t rows = s.b1 + s.b2, cols = s.c1 + s.c2;
    const std::size_t r0 = is_prime ? 0 : s.b1, c0 = is_prime ? 0 : s.c1;
    std::vector<Vector> others, embedded;
    for (std::size_t i = 0; i < cd.terms.size(); ++i)
        if (i != v)
            others.push_back(cd.terms[i].matrix().vectorized());
    for (const auto &m : target.basis())
        embedded.push_back(embed(m, rows, cols, r0, c0).vectorized());
    std::vector<Matrix> inter;
    for (const auto &x : subspace_intersect(f, others, embedded, rows * cols))
        inter.push_back(block(reshape(f, x, rows, cols), r0, target.rows(), c0, target.cols()));
    MatrixSpace cut = MatrixSpace::spanned_by(f, target.rows(), target.cols(), inter);

    DigestResult out{w, std::nullopt};
    (is_prime ? out.s.prime : out.s.bis) = cut;

    MatrixSpace sum = block_sum(out.s.prime, out.s.bis);
    std::vector<Vector> targets;
    for (const auto &m : sum.basis())
        targets.push_back(m.vectorized());
    auto lambda = express(f, others, targets, rows * cols);
    if (lambda) {
        Decomposition red(f, {sum.dim(), rows, cols});
        for (std::size_t i = 0, t = 0; i < cd.terms.size(); ++i) {
            if (i == v)
                continue;
            Vector u = lambda->row(t++);
            if (!is_zero(u))
                red.push_back(RankOneTerm(u, cd.terms[i].v, cd.terms[i].w));
        }
        out.reduced = std::move(red);
    }
    return out;
}

HookPeel peel_hook_slice(const Tensor3 &p, const BlockSplit &split, const Vector &gamma,
                         const HookShape &hook, const std::optional<Decomposition> &minimal,
                         std::uint64_t budget)
{
    const Field &f = p.field();
    auto [p1, p2] = split_direct_sum(p, split);
    if (gamma.size() != split.c1)
        throw DimensionError("functional must live on the primed C-block");
    for (const auto &h : hook.cols)
        if (h.size() != split.c1 || !dot(gamma, h).is_zero())
            throw PreconditionError("functional does not vanish on the hook columns");
    Matrix v = p1.contract(Axis::C, gamma);
    if (matrix_rank(v) != 1)
        throw PreconditionError("slice p(γ) has rank " + std::to_string(matrix_rank(v)) +
                                ", expected 1");

    Decomposition dec = [&] {
        if (minimal) {
            if (!certifies(*minimal, p))
                throw PreconditionError("decomposition does not certify the tensor");
            return *minimal;
        }
        OracleResult res = rank_oracle(p, kDefaultMaxRank, budget);
        if (!res.exact())
            throw PreconditionError("rank oracle did not finish within the budget");
        return *res.witness;
    }();

    // C-axis view: the terms contribute the A⊗B matrices u⊗v.
    const std::size_t a = p.dim(Axis::A), b = p.dim(Axis::B);
    std::vector<Vector> gens;
    for (const auto &t : dec.terms())
        gens.push_back(outer(t.u, t.v).vectorized());
    Vector v_full = embed(v, a, b, 0, 0).vectorized();
    auto coef = span_coefficients(f, gens, v_full);
    if (!coef)
        throw PreconditionError("decomposition does not span the rank-one slice");
    std::size_t swap = 0;
    while ((*coef)[swap].is_zero())
        ++swap;
    std::vector<Vector> rest;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (i != swap)
            rest.push_back(gens[i]);

    // S' = <ℬ \ v> ∩ W'_C and the v-coordinate of every primed C-slice.
    std::vector<Vector> wc;
    for (std::size_t k = 0; k < split.c1; ++k)
        wc.push_back(embed(p1.slice(Axis::C, k), a, b, 0, 0).vectorized());
    std::vector<Vector> s_prime = subspace_intersect(f, rest, wc, a * b);
    std::vector<Vector> vs = {v_full};
    vs.insert(vs.end(), s_prime.begin(), s_prime.end());
    Vector c = zero_vector(f, split.c1);
    for (std::size_t k = 0; k < split.c1; ++k) {
        auto x = span_coefficients(f, vs, wc[k]);
        if (!x)
            throw PreconditionError("primed slice outside <v> + S'");
        c[k] = (*x)[0];
    }

    PeelCertificate cert = peel(p1, Axis::C, gamma, c);
    Tensor3 reduced = direct_sum(cert.residual, p2);
    BlockSplit ns = split;
    ns.c1 -= 1;

    std::size_t q = 0;
    while (gamma[q].is_zero())
        ++q;
    HookShape nh = hook;
    for (auto &h : nh.cols)
        h.erase(h.begin() + static_cast<std::ptrdiff_t>(q));
    bool preserved = is_hook_shaped(slice_space(cert.residual, Axis::A), nh);

    std::optional<Decomposition> red;
    const std::size_t cn = reduced.dim(Axis::C);
    std::vector<Vector> targets;
    for (std::size_t k = 0; k < cn; ++k)
        targets.push_back(reduced.slice(Axis::C, k).vectorized());
    if (auto lambda = express(f, rest, targets, a * b)) {
        Decomposition d(f, reduced.dims());
        for (std::size_t i = 0, t = 0; i < dec.size(); ++i) {
            if (i == swap)
                continue;
            Vector w = lambda->row(t++);
            if (!is_zero(w))
                d.push_back(RankOneTerm(dec[i].u, dec[i].v, w));
        }
        red = std::move(d);
    }
    return {std::move(reduced), ns, std::move(v), std::move(c), std::move(nh), preserved,
            std::move(red)};
}

std::vector<AuditItem> audit_inequalities(const ClassifiedDecomposition &cd, std::size_t r_prime,
                                          std::size_t r_bis, std::size_t r_sum,
                                          std::size_t dim_wp, std::size_t dim_wb)
{
    using ll = long long;
    const auto [e1, e2, f1, f2] = cd.profile.dims();
    const TypeCounts &n = cd.counts;
    const ll rp = static_cast<ll>(r_prime), rb = static_cast<ll>(r_bis), rs = static_cast<ll>(r_sum);
    const ll dp = static_cast<ll>(dim_wp), db = static_cast<ll>(dim_wb);
    const ll d = rp + rb - rs;
    std::vector<AuditItem> out;
    auto le = [&](std::string name, ll lhs, ll rhs) {
        out.push_back({std::move(name), lhs, rhs, lhs <= rhs, "<="});
    };
    auto ge = [&](std::string name, ll lhs, ll rhs) {
        out.push_back({std::move(name), lhs, rhs, lhs >= rhs, ">="});
    };
    le("R(W')+e'' <= R(W)-dim W''", rp + ll(e2), rs - db);
    le("R(W'')+e' <= R(W)-dim W'", rb + ll(e1), rs - dp);
    le("R(W')+f'' <= R(W)-dim W''", rp + ll(f2), rs - db);
    le("R(W'')+f' <= R(W)-dim W'", rb + ll(f1), rs - dp);
    ge("prim+hl+vl+min(mix,e'f') >= R(W')",
       ll(n.prim + n.hl + n.vl + std::min(n.mix, e1 * f1)), rp);
    ge("bis+hr+vr+min(mix,e''f'') >= R(W'')",
       ll(n.bis + n.hr + n.vr + std::min(n.mix, e2 * f2)), rb);
    if (d > 0) {
        le("e' < R(W')-dim W'", ll(e1) + 1, rp - dp);
        le("e'' < R(W'')-dim W''", ll(e2) + 1, rb - db);
        le("f' < R(W')-dim W'", ll(f1) + 1, rp - dp);
        le("f'' < R(W'')-dim W''", ll(f2) + 1, rb - db);
        ge("mix >= d", ll(n.mix), d);
        ge("hl+hr+mix >= e'+e''+d", ll(n.hl + n.hr + n.mix), ll(e1 + e2) + d);
        ge("vl+vr+mix >= f'+f''+d", ll(n.vl + n.vr + n.mix), ll(f1 + f2) + d);
    }
    if (cd.terms.size() != r_sum)
        out.push_back({"decomposition not minimal", ll(cd.terms.size()), rs, false, "=="});
    return out;
}

bool AdditivityReport::audit_clean() const
{
    return std::all_of(audit.begin(), audit.end(), [](const AuditItem &a) { return a.holds; });
}

namespace {

struct SumRanks {
    OracleResult prime, bis, sum;
};

SumRanks compute_ranks(const Tensor3 &p1, const Tensor3 &p2, std::uint64_t budget, bool shortcut)
{
    SumRanks r{rank_oracle(p1, kDefaultMaxRank, budget), rank_oracle(p2, kDefaultMaxRank, budget), {}};
    Tensor3 s = direct_sum(p1, p2);
    if (!(shortcut && r.prime.exact() && r.bis.exact())) {
        r.sum = rank_oracle(s, kDefaultMaxRank, budget);
        return r;
    }
    // The concatenated witnesses settle the top level, so only ranks below
    // R(p') + R(p'') need searching.
    const std::size_t top = r.prime.rank + r.bis.rank;
    Decomposition concat = Decomposition::concatenate_direct(*r.prime.witness, *r.bis.witness);
    if (top == 0) {
        r.sum = {OracleStatus::exact, 0, concat, 0};
        return r;
    }
    r.sum = rank_oracle(s, top - 1, budget);
    if (r.sum.status == OracleStatus::lower_bound_only && certifies(concat, s))
        r.sum = {OracleStatus::exact, top, concat, r.sum.nodes};
    return r;
}

} // namespace

AdditivityReport additivity_check(const Tensor3 &p1, const Tensor3 &p2, std::uint64_t budget)
{
    require_same_field(p1.field(), p2.field());
    AdditivityReport rep;
    SumRanks r = compute_ranks(p1, p2, budget, true);
    rep.prime = r.prime;
    rep.bis = r.bis;
    rep.sum = r.sum;
    if (!(rep.prime.exact() && rep.bis.exact() && rep.sum.exact()))
        return rep;
    rep.defect = static_cast<long long>(rep.prime.rank + rep.bis.rank) -
                 static_cast<long long>(rep.sum.rank);
    BlockSplit split = BlockSplit::of(p1, p2);
    rep.classified = classify(*rep.sum.witness, split);
    rep.audit = audit_inequalities(*rep.classified, rep.prime.rank, rep.bis.rank, rep.sum.rank,
                                   flattening_ranks(p1)[0], flattening_ranks(p2)[0]);
    if (*rep.defect != 0) {
        SumRanks again = compute_ranks(p1, p2, budget, false);
        Tensor3 s = direct_sum(p1, p2);
        rep.reverified = again.prime.exact() && again.bis.exact() && again.sum.exact() &&
                         certifies(*again.sum.witness, s).has_value() &&
                         static_cast<long long>(again.prime.rank + again.bis.rank) -
                                 static_cast<long long>(again.sum.rank) ==
                             *rep.defect;
    }
    return rep;
}

std::vector<MixCondition> MixConditionReport::violated() const
{
    std::vector<MixCondition> out;
    for (int i = 0; i < 3; ++i)
        if (!holds[i])
            out.push_back(static_cast<MixCondition>(i + 1));
    return out;
}

MixConditionReport check_mix_conditions(const ClassifiedDecomposition &cd, const MatrixSpace &wb)
{
    if (cd.counts.bis != 0)
        throw PreconditionError("mix conditions need an empty Bis set");
    const BlockSplit &s = cd.split;
    if (wb.rows() != s.b2 || wb.cols() != s.c2)
        throw DimensionError("W'' does not match the block split");
    const Field &f = cd.terms.field();
    const std::size_t fdim = cd.profile.f2.size();
    MixConditionReport rep;

    rep.k = s.b2;
    for (std::size_t k = 0; k < s.b2; ++k)
        if (find_hook_shape(wb, k, fdim)) {
            rep.k = k;
            break;
        }

    std::vector<Vector> et, ft;
    for (std::size_t i = 0; i < cd.terms.size(); ++i)
        if (cd.labels[i] == TermType::Mix) {
            et.push_back(tail(cd.terms[i].v, s.b1));
            ft.push_back(head(cd.terms[i].w, s.c1));
        }
    std::vector<Vector> e_tilde = span_basis(f, et, s.b2);
    rep.e_tilde_dim = e_tilde.size();
    rep.f_tilde_dim = span_dimension(f, ft, s.c1);
    // With no Mix terms there is nothing for condition (1) to bound.
    rep.holds[0] = et.empty() ||
                   static_cast<long long>(rep.e_tilde_dim) <= static_cast<long long>(rep.k) - 1;

    // VL images [v' mod E'] ⊗ w' in (B'/E') ⊗ F'.
    Quotient qe(f, cd.profile.e1, s.b1);
    std::vector<Vector> images, lefts, rights;
    for (std::size_t i = 0; i < cd.terms.size(); ++i)
        if (cd.labels[i] == TermType::VL) {
            Vector x = qe.reduce(head(cd.terms[i].v, s.b1));
            Vector y = head(cd.terms[i].w, s.c1);
            lefts.push_back(x);
            rights.push_back(y);
            images.push_back(outer(x, y).vectorized());
        }
    bool independent = span_dimension(f, images, qe.dim() * s.c1) == images.size();
    // With F' = 0 the target space is zero and conciseness is automatic.
    bool concise = cd.profile.f1.empty() ||
                   (span_dimension(f, lefts, qe.dim()) == qe.dim() &&
                    span_dimension(f, rights, s.c1) == cd.profile.f1.size());
    rep.holds[1] = independent && concise;

    // HR images [v'' mod Ẽ''] ⊗ w'.
    Quotient qt(f, e_tilde, s.b2);
    images.clear();
    for (std::size_t i = 0; i < cd.terms.size(); ++i)
        if (cd.labels[i] == TermType::HR) {
            Vector x = qt.reduce(tail(cd.terms[i].v, s.b1));
            images.push_back(outer(x, head(cd.terms[i].w, s.c1)).vectorized());
        }
    rep.holds[2] = span_dimension(f, images, qt.dim() * s.c1) == images.size();
    return rep;
}

} // namespace trank
