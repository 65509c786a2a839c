#pragma once

// Reference implementations that share no code with the library's
// elimination or search routines.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "trank/tensor.hpp"

namespace oracle {

using namespace trank;

// Leibniz expansion over all permutations.
inline Scalar determinant(const Matrix &m, const std::vector<std::size_t> &rows,
                          const std::vector<std::size_t> &cols)
{
    const Field &f = m.field();
    std::vector<std::size_t> perm(cols.size());
    std::iota(perm.begin(), perm.end(), 0);
    Scalar det = Scalar::zero(f);
    do {
        Scalar term = Scalar::one(f);
        for (std::size_t i = 0; i < rows.size(); ++i)
            term *= m(rows[i], cols[perm[i]]);
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                inversions += perm[i] > perm[j];
        det = inversions % 2 ? det - term : det + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

template <class Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit &&visit)
{
    std::vector<bool> pick(n, false);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(k), pick.end(), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i])
                s.push_back(i);
        if (visit(s))
            return true;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return false;
}

// Largest k with a nonzero k×k minor.
inline std::size_t minor_rank(const Matrix &m)
{
    for (std::size_t k = std::min(m.rows(), m.cols()); k > 0; --k) {
        bool found = for_each_subset(m.rows(), k, [&](const std::vector<std::size_t> &rs) {
            return for_each_subset(m.cols(), k, [&](const std::vector<std::size_t> &cs) {
                return !determinant(m, rs, cs).is_zero();
            });
        });
        if (found)
            return k;
    }
    return 0;
}

// Base-p code of a tensor over GF(p), entry (i,j,k) row-major as digit order.
inline std::uint32_t encode(const Tensor3 &t)
{
    std::uint32_t code = 0, place = 1;
    for (const auto &x : t.entries()) {
        code += x.residue() * place;
        place *= t.field().modulus();
    }
    return code;
}

inline Tensor3 decode(const Field &f, const Dims &d, std::uint32_t code)
{
    Tensor3 t(f, d);
    std::vector<Scalar> e;
    for (std::size_t i = 0; i < d[0] * d[1] * d[2]; ++i) {
        e.push_back(Scalar::from_residue(f, code % f.modulus()));
        code /= f.modulus();
    }
    return Tensor3(f, d, e);
}

// Rank of every tensor of one shape over GF(p) by breadth-first search from
// zero, each step adding one simple tensor.
class RankTable {
  public:
    RankTable(Field f, Dims d) : f_(f), d_(d)
    {
        const std::uint32_t p = f.modulus();
        n_ = d[0] * d[1] * d[2];
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n_; ++i)
            total *= p;
        rank_.assign(total, 0xff);
        auto vectors = [&](std::size_t len) {
            std::vector<std::vector<std::uint32_t>> out;
            std::uint64_t cnt = 1;
            for (std::size_t i = 0; i < len; ++i)
                cnt *= p;
            for (std::uint64_t c = 1; c < cnt; ++c) {
                std::vector<std::uint32_t> v(len);
                std::uint64_t x = c;
                for (std::size_t i = 0; i < len; ++i, x /= p)
                    v[i] = static_cast<std::uint32_t>(x % p);
                out.push_back(v);
            }
            return out;
        };
        std::vector<std::vector<std::uint32_t>> simples;
        for (const auto &u : vectors(d[0]))
            for (const auto &v : vectors(d[1]))
                for (const auto &w : vectors(d[2])) {
                    std::vector<std::uint32_t> t;
                    for (auto a : u)
                        for (auto b : v)
                            for (auto c : w)
                                t.push_back(a * b * c % p);
                    simples.push_back(t);
                }
        std::sort(simples.begin(), simples.end());
        simples.erase(std::unique(simples.begin(), simples.end()), simples.end());

        std::vector<std::uint32_t> layer = {0};
        rank_[0] = 0;
        std::vector<std::uint32_t> digits(n_);
        for (std::uint8_t r = 1; !layer.empty(); ++r) {
            std::vector<std::uint32_t> next;
            for (auto code : layer) {
                std::uint32_t x = code;
                for (std::size_t i = 0; i < n_; ++i, x /= p)
                    digits[i] = x % p;
                for (const auto &s : simples) {
                    std::uint32_t y = 0, place = 1;
                    for (std::size_t i = 0; i < n_; ++i, place *= p)
                        y += (digits[i] + s[i]) % p * place;
                    if (rank_[y] == 0xff) {
                        rank_[y] = r;
                        next.push_back(y);
                    }
                }
            }
            layer = std::move(next);
            max_ = layer.empty() ? r - 1 : r;
        }
    }

    std::size_t rank(const Tensor3 &t) const { return rank_.at(encode(t)); }
    std::size_t rank_of_code(std::uint32_t c) const { return rank_.at(c); }
    std::size_t size() const { return rank_.size(); }
    std::size_t max_rank() const { return max_; }

  private:
    Field f_;
    Dims d_;
    std::size_t n_ = 0;
    std::size_t max_ = 0;
    std::vector<std::uint8_t> rank_;
};

inline Scalar random_scalar(const Field &f, std::mt19937_64 &rng)
{
    if (f.is_prime())
        return Scalar::from_residue(f, static_cast<std::uint32_t>(rng() % f.modulus()));
    long num = static_cast<long>(rng() % 21) - 10;
    long den = static_cast<long>(rng() % 5) + 1;
    return Scalar(f, mpq_class(num, den));
}

inline Matrix random_matrix(const Field &f, std::size_t r, std::size_t c, std::mt19937_64 &rng)
{
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = random_scalar(f, rng);
    return m;
}

inline Tensor3 random_tensor(const Field &f, const Dims &d, std::mt19937_64 &rng)
{
    std::vector<Scalar> e;
    for (std::size_t i = 0; i < d[0] * d[1] * d[2]; ++i)
        e.push_back(random_scalar(f, rng));
    return Tensor3(f, d, e);
}

inline Vector random_nonzero(const Field &f, std::size_t n, std::mt19937_64 &rng)
{
    while (true) {
        Vector v;
        for (std::size_t i = 0; i < n; ++i)
            v.push_back(random_scalar(f, rng));
        if (!is_zero(v))
            return v;
    }
}

inline Matrix random_invertible(const Field &f, std::size_t n, std::mt19937_64 &rng)
{
    while (true) {
        Matrix m = random_matrix(f, n, n, rng);
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        if (!determinant(m, all, all).is_zero())
            return m;
    }
}

inline Tensor3 diagonal(const Field &f, std::size_t n)
{
    Tensor3 t(f, {n, n, n});
    for (std::size_t i = 0; i < n; ++i)
        t(i, i, i) = Scalar::one(f);
    return t;
}

} // namespace oracle
