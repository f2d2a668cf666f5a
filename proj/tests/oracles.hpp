#pragma once

// Slow, independent reference computations. Nothing here calls the library's pow/qint/Fox or
// Magnus code; words are expanded into single letters and folded directly.

#include <map>
#include <vector>

#include "kummerian/words.hpp"

namespace oracle {

using kummerian::BigInt;

inline BigInt mod(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    return r < 0 ? r + m : r;
}

/// Extended Euclid inverse of a mod m; a must be a unit.
inline BigInt inverse(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        const BigInt q = r0 / r1;
        BigInt t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw std::domain_error("not invertible");
    return mod(s0, m);
}

/// Square and multiply; negative exponents through the inverse.
inline BigInt modpow(const BigInt& base, BigInt e, const BigInt& m) {
    BigInt b = mod(base, m);
    if (e < 0) {
        b = inverse(b, m);
        e = -e;
    }
    BigInt r = 1 % m;
    while (e > 0) {
        if ((e & 1) != 0) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

/// 1 + theta + ... + theta^(n-1) for n >= 0, and -theta^n [-n] for n < 0, summed term by term.
inline BigInt geometric_sum(const BigInt& theta, const BigInt& n, const BigInt& m) {
    if (n < 0) return mod(-modpow(theta, n, m) * geometric_sum(theta, -n, m), m);
    BigInt s = 0, t = 1 % m;
    for (BigInt k = 0; k < n; ++k) {
        s = (s + t) % m;
        t = t * mod(theta, m) % m;
    }
    return s;
}

/// Letters of w expanded into (generator, +1 / -1).
inline std::vector<std::pair<int, int>> expand_letters(const kummerian::Word& w) {
    std::vector<std::pair<int, int>> out;
    for (const auto& l : w.letters()) {
        const BigInt e = kummerian::integer_value(l.exponent);
        const int sign = e < 0 ? -1 : 1;
        for (BigInt k = 0; k < (e < 0 ? -e : e); ++k) out.emplace_back(l.generator, sign);
    }
    return out;
}

/// theta(w) mod m.
inline BigInt theta_of(const std::vector<BigInt>& theta, const kummerian::Word& w, const BigInt& m) {
    BigInt acc = 1 % m;
    for (auto [g, s] : expand_letters(w)) acc = acc * (s > 0 ? mod(theta[g], m) : inverse(theta[g], m)) % m;
    return acc;
}

/// c(w) mod m by c(gh) = c(g) + theta(g) c(h), c(x^-1) = -theta(x)^-1 c(x).
inline BigInt cocycle(const std::vector<BigInt>& theta, const std::vector<BigInt>& alpha, const kummerian::Word& w, const BigInt& m) {
    BigInt acc = 0, mult = 1 % m;
    for (auto [g, s] : expand_letters(w)) {
        if (s > 0) {
            acc = mod(acc + mult * alpha[g], m);
            mult = mult * theta[g] % m;
        } else {
            const BigInt inv = inverse(theta[g], m);
            acc = mod(acc - mult * inv * alpha[g], m);
            mult = mult * inv % m;
        }
    }
    return acc;
}

/// Fox matrix of P at theta mod m, by probing the cocycle oracle.
inline std::vector<std::vector<BigInt>> fox(const kummerian::Presentation& P, const std::vector<BigInt>& theta, const BigInt& m) {
    std::vector<std::vector<BigInt>> out;
    for (const auto& r : P.relators) {
        std::vector<BigInt> row;
        for (int i = 0; i < P.d(); ++i) {
            std::vector<BigInt> alpha(static_cast<std::size_t>(P.d()), 0);
            alpha[static_cast<std::size_t>(i)] = 1;
            row.push_back(cocycle(theta, alpha, r, m));
        }
        out.push_back(std::move(row));
    }
    return out;
}

/// Every orientation of the searched family mod p^N (theta = 1 mod p, or 1 mod 4 for p = 2)
/// that is well defined on G and has vanishing Fox matrix; lexicographic order.
inline std::vector<std::vector<BigInt>> exhaustive_orientations(const kummerian::Presentation& P, int N) {
    const BigInt m = kummerian::ipow(P.p, static_cast<unsigned>(N));
    const BigInt step = (P.p == 2 && N >= 2) ? BigInt(4) : BigInt(P.p);
    std::vector<BigInt> values;
    for (BigInt v = 1; v < m; v += step) values.push_back(v);
    std::vector<std::vector<BigInt>> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(P.d()), 0);
    while (true) {
        std::vector<BigInt> theta;
        for (auto k : idx) theta.push_back(values[k]);
        bool ok = true;
        for (const auto& r : P.relators) ok = ok && theta_of(theta, r, m) == 1 % m;
        if (ok)
            for (const auto& row : fox(P, theta, m))
                for (const auto& e : row) ok = ok && e == 0;
        if (ok) out.push_back(theta);
        std::size_t pos = idx.size();
        while (pos > 0 && ++idx[pos - 1] == values.size()) idx[--pos] = 0;
        if (pos == 0) break;
    }
    return out;
}

/// Random relator in the Frattini subgroup: a random word followed by powers fixing every
/// exponent sum to 0 mod p.
inline kummerian::Word random_frattini_relator(int d, std::uint64_t p, kummerian::RandomSource& rng, int length = 4) {
    kummerian::Word w = kummerian::random_word(d, rng, length, 3);
    const auto sums = kummerian::exponent_sums(w, d);
    for (int i = 0; i < d; ++i) {
        const BigInt s = mod(sums[static_cast<std::size_t>(i)], BigInt(p));
        if (s != 0) w.push({i, BigInt(p) - s});
    }
    if (w.empty()) w = kummerian::Word::generator(0, BigInt(p));
    return w;
}

/// Integer Magnus expansion of w up to total degree cap, multiplying single letters
/// (1 + X)^(+-1) with (1 + X)^-1 = 1 - X + X^2 - ...
inline std::map<std::vector<int>, BigInt> magnus(const kummerian::Word& w, int cap) {
    std::map<std::vector<int>, BigInt> acc{{{}, 1}};
    for (auto [g, s] : expand_letters(w)) {
        std::map<std::vector<int>, BigInt> next;
        for (const auto& [mono, c] : acc) {
            std::vector<int> m = mono;
            BigInt coef = 1;
            for (int k = 0; static_cast<int>(mono.size()) + k <= cap; ++k) {
                if (k > 0) {
                    if (s > 0 && k > 1) break;
                    m.push_back(g);
                    coef = s > 0 ? BigInt(1) : -coef;
                }
                next[m] += c * coef;
            }
        }
        acc.clear();
        for (auto& [m, c] : next)
            if (c != 0) acc.emplace(m, c);
    }
    return acc;
}

/// Solutions of A x = b over F_p by enumeration (small systems only).
inline std::vector<std::vector<std::int64_t>> enumerate_solutions(std::int64_t p, const std::vector<std::vector<std::int64_t>>& A,
                                                                  const std::vector<std::int64_t>& b, std::size_t n) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> x(n, 0);
    while (true) {
        bool ok = true;
        for (std::size_t r = 0; r < A.size() && ok; ++r) {
            std::int64_t s = 0;
            for (std::size_t c = 0; c < n; ++c) s += A[r][c] * x[c];
            ok = ((s - b[r]) % p + p) % p == 0;
        }
        if (ok) out.push_back(x);
        std::size_t pos = n;
        while (pos > 0 && ++x[pos - 1] == p) x[--pos] = 0;
        if (pos == 0) break;
    }
    return out;
}

}  // namespace oracle
