#include "trank/oracle.hpp"

#include "trank/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>

namespace trank {

const char *status_name(OracleStatus s)
{
    switch (s) {
    case OracleStatus::exact:
        return "exact";
    case OracleStatus::lower_bound_only:
        return "lower-bound-only";
    case OracleStatus::budget_exceeded:
        return "budget-exceeded";
    }
    return "?";
}

namespace {

constexpr std::size_t kPackedLen = 64;
using Packed = std::array<std::uint8_t, kPackedLen>;

struct Arith {
    std::uint32_t p;
    std::array<std::uint8_t, 256> inv{};

    explicit Arith(std::uint32_t p_) : p(p_)
    {
        for (std::uint32_t a = 1; a < p; ++a)
            for (std::uint32_t b = 1; b < p; ++b)
                if (a * b % p == 1)
                    inv[a] = static_cast<std::uint8_t>(b);
    }

    // x += c·y on the first n coordinates.
    void axpy(Packed &x, std::uint32_t c, const Packed &y, std::size_t n) const
    {
        if (c == 0)
            return;
        if (p == 2) {
            for (std::size_t i = 0; i < n; ++i)
                x[i] ^= y[i];
            return;
        }
        for (std::size_t i = 0; i < n; ++i)
            x[i] = static_cast<std::uint8_t>((x[i] + c * y[i]) % p);
    }

    void scale(Packed &x, std::uint32_t c, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = static_cast<std::uint8_t>(x[i] * c % p);
    }

    // Scales so the first nonzero coordinate is 1; false for the zero vector.
    bool normalize(Packed &x, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] != 0) {
                if (x[i] != 1)
                    scale(x, inv[x[i]], n);
                return true;
            }
        return false;
    }

    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
};

// Incremental echelon basis: each stored row is zero on the pivots of the
// rows stored before it, so reduction in insertion order is exact.
struct Echelon {
    std::vector<Packed> rows;
    std::vector<std::uint8_t> pivots;

    void reduce(Packed &x, const Arith &ar, std::size_t n) const
    {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            std::uint32_t c = x[pivots[k]];
            if (c != 0)
                ar.axpy(x, ar.neg(c), rows[k], n);
        }
    }

    bool insert(Packed x, const Arith &ar, std::size_t n)
    {
        reduce(x, ar, n);
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] != 0) {
                ar.scale(x, ar.inv[x[i]], n);
                rows.push_back(x);
                pivots.push_back(static_cast<std::uint8_t>(i));
                return true;
            }
        return false;
    }

    std::size_t rank() const { return rows.size(); }
};

struct PackedHash {
    std::size_t len;
    std::size_t operator()(const Packed &x) const
    {
        return std::hash<std::string_view>()(
            std::string_view(reinterpret_cast<const char *>(x.data()), len));
    }
};

struct PackedEq {
    std::size_t len;
    bool operator()(const Packed &a, const Packed &b) const
    {
        return std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len), b.begin());
    }
};

struct RankOneMatrix {
    std::uint32_t vi;
    std::uint32_t wi;
    Packed full;
};

struct ClassInfo {
    Packed q;
    std::vector<std::uint32_t> members;
    std::vector<Packed> fresh; // member vectors independent modulo span(Z)
};

// Search data for the slice space on one axis of a concise tensor.
class AxisSearch {
  public:
    AxisSearch(const Tensor3 &concise, Axis axis, const Arith &ar)
        : axis_(axis), front_(concise.to_front(axis)), ar_(ar)
    {
        const Dims &d = front_.dims();
        m_ = d[0];
        b_ = d[1];
        c_ = d[2];
        n_ = b_ * c_;
        qlen_ = n_ - m_;
        build();
    }

    Axis axis() const { return axis_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t classes() const { return classes_.size(); }

    // Search for a length-r decomposition. Returns true on success; sets
    // `out_of_budget` when the node budget ran out first.
    bool search(std::size_t r, std::uint64_t &nodes, std::uint64_t budget, bool &out_of_budget)
    {
        r_ = r;
        g_ = r - m_;
        nodes_ = &nodes;
        budget_ = budget;
        out_of_budget_ = false;
        if (g_ > qlen_)
            return false;
        theta_.assign(g_ + 2, 0);
        for (std::size_t j = 1; j <= g_ + 1; ++j)
            theta_[j] = theta_[j - 1] * ar_.p + 1;
        mark_.assign(classes_.size(), 0);
        chosen_.clear();
        in_t_.clear();
        spans_.assign(g_ + 1, {});
        spans_[0].push_back(Packed{});
        bool ok = dfs(0, 0, 0);
        out_of_budget = out_of_budget_;
        return ok;
    }

    // Decomposition of the front tensor from the last successful search.
    Decomposition witness(const Field &f) const
    {
        Echelon e;
        std::vector<std::uint32_t> picked;
        auto consider = [&](std::uint32_t idx) {
            if (picked.size() < r_ && e.insert(rank_ones_[idx].full, ar_, n_))
                picked.push_back(idx);
        };
        for (auto idx : zero_class_)
            consider(idx);
        for (auto cls : in_t_)
            for (auto idx : classes_[cls].members)
                consider(idx);

        std::vector<Vector> cols;
        for (auto idx : picked)
            cols.push_back(outer(to_vector(f, bpts_[rank_ones_[idx].vi]),
                                 to_vector(f, cpts_[rank_ones_[idx].wi]))
                               .vectorized());
        Matrix basis = Matrix::from_columns(f, cols, n_);
        Matrix rhs(f, n_, m_);
        for (std::size_t i = 0; i < m_; ++i) {
            Matrix s = front_.slice(Axis::A, i);
            for (std::size_t t = 0; t < n_; ++t)
                rhs(t, i) = s.vectorized()[t];
        }
        auto x = solve_linear(basis, rhs);
        if (!x)
            throw std::logic_error("oracle witness does not span the slice space");
        Decomposition d(f, front_.dims());
        for (std::size_t t = 0; t < picked.size(); ++t) {
            Vector u;
            for (std::size_t i = 0; i < m_; ++i)
                u.push_back((*x)(t, i));
            d.push_back(RankOneTerm(u, to_vector(f, bpts_[rank_ones_[picked[t]].vi]),
                                    to_vector(f, cpts_[rank_ones_[picked[t]].wi])));
        }
        return d;
    }

  private:
    static Vector to_vector(const Field &f, const std::vector<std::uint32_t> &x)
    {
        Vector v;
        for (auto d : x)
            v.push_back(Scalar::from_residue(f, d));
        return v;
    }

    void build()
    {
        const std::uint32_t p = ar_.p;
        // Reduced echelon basis of W, packed.
        RowEchelon we = rref(Matrix(front_.field(), m_, n_, front_.entries()));
        std::vector<Packed> wrows;
        std::vector<bool> is_piv(n_, false);
        for (std::size_t i = 0; i < we.rank(); ++i) {
            Packed x{};
            for (std::size_t t = 0; t < n_; ++t)
                x[t] = static_cast<std::uint8_t>(we.reduced(i, t).residue());
            wrows.push_back(x);
            is_piv[we.pivots[i]] = true;
        }
        std::vector<std::size_t> nonpiv;
        for (std::size_t t = 0; t < n_; ++t)
            if (!is_piv[t])
                nonpiv.push_back(t);

        bpts_ = projective_residues(p, b_);
        cpts_ = projective_residues(p, c_);
        std::unordered_map<Packed, std::uint32_t, PackedHash, PackedEq> index(
            64, PackedHash{qlen_}, PackedEq{qlen_});
        for (std::uint32_t vi = 0; vi < bpts_.size(); ++vi)
            for (std::uint32_t wi = 0; wi < cpts_.size(); ++wi) {
                RankOneMatrix ro{vi, wi, Packed{}};
                for (std::size_t j = 0; j < b_; ++j)
                    for (std::size_t k = 0; k < c_; ++k)
                        ro.full[j * c_ + k] =
                            static_cast<std::uint8_t>(bpts_[vi][j] * cpts_[wi][k] % p);
                Packed red = ro.full;
                for (std::size_t i = 0; i < wrows.size(); ++i) {
                    std::uint32_t coef = red[we.pivots[i]];
                    if (coef != 0)
                        ar_.axpy(red, ar_.neg(coef), wrows[i], n_);
                }
                Packed q{};
                for (std::size_t t = 0; t < qlen_; ++t)
                    q[t] = red[nonpiv[t]];
                auto idx = static_cast<std::uint32_t>(rank_ones_.size());
                rank_ones_.push_back(ro);
                if (!ar_.normalize(q, qlen_)) {
                    zero_class_.push_back(idx);
                    continue;
                }
                auto [it, inserted] =
                    index.emplace(q, static_cast<std::uint32_t>(classes_.size()));
                if (inserted)
                    classes_.push_back({q, {}, {}});
                classes_[it->second].members.push_back(idx);
            }

        for (auto idx : zero_class_)
            zspan_.insert(rank_ones_[idx].full, ar_, n_);
        for (auto &cls : classes_) {
            Echelon e = zspan_;
            for (auto idx : cls.members)
                if (e.insert(rank_ones_[idx].full, ar_, n_))
                    cls.fresh.push_back(rank_ones_[idx].full);
        }
        // Larger contributions first; this makes the suffix bound in dfs a
        // single lookup.
        std::stable_sort(classes_.begin(), classes_.end(),
                         [](const ClassInfo &x, const ClassInfo &y) {
                             return x.fresh.size() > y.fresh.size();
                         });
        index_ = decltype(index_)(classes_.size() * 2 + 1, PackedHash{qlen_}, PackedEq{qlen_});
        for (std::uint32_t i = 0; i < classes_.size(); ++i)
            index_.emplace(classes_[i].q, i);
    }

    std::size_t s_of(std::size_t cls) const { return classes_[cls].fresh.size(); }

    bool leaf()
    {
        Echelon e = zspan_;
        if (e.rank() >= r_)
            return e.rank() == r_;
        for (auto cls : in_t_)
            for (const auto &v : classes_[cls].fresh)
                if (e.insert(v, ar_, n_) && e.rank() == r_)
                    return true;
        return false;
    }

    bool dfs(std::size_t j, std::size_t start, std::size_t sum_s)
    {
        if (j == g_)
            return leaf();
        const std::size_t k = classes_.size();
        const std::size_t dimz = zspan_.rank();
        const std::size_t remaining_points = theta_[g_] - theta_[j];
        std::vector<std::uint32_t> found;
        for (std::size_t c = start; c + (g_ - j) <= k; ++c) {
            if (++*nodes_ > budget_) {
                out_of_budget_ = true;
                return false;
            }
            if (mark_[c])
                continue;
            // Every point added from here on has class index >= c.
            if (dimz + sum_s + remaining_points * s_of(c) < r_)
                break;

            found.clear();
            bool canonical = true;
            std::size_t new_s = 0;
            for (const auto &s : spans_[j]) {
                Packed x = s;
                ar_.axpy(x, 1, classes_[c].q, qlen_);
                ar_.normalize(x, qlen_);
                auto it = index_.find(x);
                if (it == index_.end())
                    continue;
                if (it->second < c) {
                    canonical = false;
                    break;
                }
                found.push_back(it->second);
                new_s += s_of(it->second);
            }
            if (!canonical)
                continue;
            const std::size_t after = remaining_points - (theta_[j + 1] - theta_[j]);
            const std::size_t tail_s = c + 1 < k ? s_of(c + 1) : 0;
            if (dimz + sum_s + new_s + after * tail_s < r_)
                continue;

            auto &next = spans_[j + 1];
            next.clear();
            for (const auto &s : spans_[j]) {
                Packed x = s;
                for (std::uint32_t lambda = 0; lambda < ar_.p; ++lambda) {
                    next.push_back(x);
                    ar_.axpy(x, 1, classes_[c].q, qlen_);
                }
            }
            for (auto f : found) {
                mark_[f] = 1;
                in_t_.push_back(f);
            }
            chosen_.push_back(static_cast<std::uint32_t>(c));
            if (dfs(j + 1, c + 1, sum_s + new_s))
                return true;
            if (out_of_budget_)
                return false;
            chosen_.pop_back();
            for (auto f : found) {
                mark_[f] = 0;
                in_t_.pop_back();
            }
        }
        return false;
    }

    Axis axis_;
    Tensor3 front_;
    const Arith &ar_;
    std::size_t m_ = 0, b_ = 0, c_ = 0, n_ = 0, qlen_ = 0;

    std::vector<std::vector<std::uint32_t>> bpts_, cpts_;
    std::vector<RankOneMatrix> rank_ones_;
    std::vector<std::uint32_t> zero_class_;
    Echelon zspan_;
    std::vector<ClassInfo> classes_;
    std::unordered_map<Packed, std::uint32_t, PackedHash, PackedEq> index_{
        1, PackedHash{0}, PackedEq{0}};

    // Per-search state.
    std::size_t r_ = 0, g_ = 0;
    std::uint64_t *nodes_ = nullptr;
    std::uint64_t budget_ = 0;
    bool out_of_budget_ = false;
    std::vector<std::size_t> theta_;
    std::vector<std::uint8_t> mark_;
    std::vector<std::uint32_t> chosen_;
    std::vector<std::uint32_t> in_t_;
    std::vector<std::vector<Packed>> spans_;
};

double log_binomial(double n, double k)
{
    if (k < 0 || k > n)
        return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

} // namespace

OracleResult rank_oracle(const Tensor3 &p, std::size_t max_rank, std::uint64_t budget)
{
    const Field f = p.field();
    if (!f.is_prime())
        throw UnsupportedField("rank_oracle searches over a finite field only");
    if (f.modulus() >= 256)
        throw UnsupportedField("rank_oracle supports GF(p) with p < 256");

    ConciseForm cf = concise_reduce(p);
    const Dims &d = cf.tensor.dims();
    OracleResult res;
    if (d[0] == 0 || d[1] == 0 || d[2] == 0) {
        res.rank = 0;
        res.witness = Decomposition(f, p.dims());
        return res;
    }

    Arith ar(f.modulus());
    std::array<std::optional<AxisSearch>, 3> axes;
    bool any = false;
    for (int a = 0; a < 3; ++a)
        if (d[(a + 1) % 3] * d[(a + 2) % 3] <= kPackedLen)
            any = true;
    if (!any)
        throw DimensionError("rank_oracle: every slice space of the concise tensor exceeds 64 entries");

    const std::size_t lower = *std::max_element(d.begin(), d.end());
    for (std::size_t r = lower; r <= max_rank; ++r) {
        // Pick the axis with the smallest estimated search tree.
        int best = -1;
        double best_cost = 0;
        for (int a = 0; a < 3; ++a) {
            Axis axis = static_cast<Axis>(a);
            std::size_t n = d[(a + 1) % 3] * d[(a + 2) % 3];
            if (n > kPackedLen)
                continue;
            if (!axes[a])
                axes[a].emplace(cf.tensor, axis, ar);
            const AxisSearch &s = *axes[a];
            double g = static_cast<double>(r - s.m());
            if (r - s.m() > s.n() - s.m())
                continue;
            double cost = log_binomial(static_cast<double>(s.classes()), g);
            if (best < 0 || cost < best_cost ||
                (cost == best_cost && (s.m() > axes[best]->m() ||
                                       (s.m() == axes[best]->m() && s.n() < axes[best]->n())))) {
                best = a;
                best_cost = cost;
            }
        }
        if (best < 0)
            continue;
        AxisSearch &s = *axes[best];
        bool out = false;
        if (s.search(r, res.nodes, budget, out)) {
            Decomposition front = s.witness(f);
            Decomposition back = front.permuted(front_permutation(s.axis()));
            for (int a = 0; a < 3; ++a)
                back = back.transform(static_cast<Axis>(a), cf.maps[a].embed);
            res.status = OracleStatus::exact;
            res.rank = r;
            res.witness = std::move(back);
            return res;
        }
        if (out) {
            res.status = OracleStatus::budget_exceeded;
            res.rank = r;
            return res;
        }
    }
    res.status = OracleStatus::lower_bound_only;
    res.rank = std::max(max_rank + 1, lower);
    return res;
}

std::map<std::size_t, std::uint64_t> max_rank_census(const Dims &dims, const Field &f)
{
    if (!f.is_prime())
        throw UnsupportedField("census needs a finite field");
    const std::size_t n = dims[0] * dims[1] * dims[2];
    double log2_count = static_cast<double>(n) * std::log2(static_cast<double>(f.modulus()));
    if (log2_count > 20.0 + 1e-9)
        throw DimensionError("census too large: p^(abc) exceeds 2^20");
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= f.modulus();
    std::map<std::size_t, std::uint64_t> hist;
    std::vector<long long> digits(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t x = idx;
        for (std::size_t i = 0; i < n; ++i) {
            digits[i] = static_cast<long long>(x % f.modulus());
            x /= f.modulus();
        }
        OracleResult r = rank_oracle(Tensor3::from_ints(f, dims, digits));
        if (!r.exact())
            throw std::logic_error("census: oracle did not finish");
        ++hist[r.rank];
    }
    return hist;
}

} // namespace trank
