#pragma once

// Truncated Magnus expansion x_i -> 1 + X_i in the noncommutative power series ring, and the
// degree-2 data it yields: Bockstein/cup pairing tables per relator, the cup-product kernel,
// lower-central weights, and Labute's mildness inequality for relators u^(p^f) v.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "kummerian/modlinalg.hpp"
#include "kummerian/words.hpp"

namespace kummerian {

using Monomial = std::vector<int>;

/// Coefficients of monomials of degree <= degree_cap, over Z/p^e, or over Z when e == 0.
class MagnusSeries {
public:
    MagnusSeries(std::uint64_t p, int e, int degree_cap) : p_(p), e_(e), cap_(degree_cap) {
        if (e_ > 0) modulus_ = ipow(p, static_cast<unsigned>(e_));
        coeffs_[{}] = 1;
    }

    std::uint64_t prime() const { return p_; }
    int exponent() const { return e_; }
    int degree_cap() const { return cap_; }
    const std::map<Monomial, BigInt>& coefficients() const { return coeffs_; }

    BigInt coefficient(const Monomial& m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? BigInt(0) : it->second;
    }

    /// Right multiplication by (1 + X_g)^n = sum_k C(n, k) X_g^k (any sign of n).
    void multiply_letter(int g, const BigInt& n) {
        std::vector<BigInt> binom{1};
        for (int k = 1; k <= cap_; ++k) binom.push_back(binom.back() * (n - (k - 1)) / k);
        std::map<Monomial, BigInt> out;
        for (const auto& [m, c] : coeffs_) {
            Monomial mono = m;
            for (int k = 0; static_cast<int>(m.size()) + k <= cap_; ++k) {
                if (k > 0) mono.push_back(g);
                add_to(out, mono, c * binom[static_cast<std::size_t>(k)]);
            }
        }
        coeffs_ = std::move(out);
    }

    MagnusSeries operator*(const MagnusSeries& o) const {
        if (p_ != o.p_ || e_ != o.e_) throw std::invalid_argument("Magnus series over different rings");
        MagnusSeries r(p_, e_, std::min(cap_, o.cap_));
        r.coeffs_.clear();
        for (const auto& [m1, c1] : coeffs_)
            for (const auto& [m2, c2] : o.coeffs_) {
                if (static_cast<int>(m1.size() + m2.size()) > r.cap_) continue;
                Monomial m = m1;
                m.insert(m.end(), m2.begin(), m2.end());
                r.add_to(r.coeffs_, m, c1 * c2);
            }
        return r;
    }

    bool operator==(const MagnusSeries& o) const {
        return p_ == o.p_ && e_ == o.e_ && cap_ == o.cap_ && coeffs_ == o.coeffs_;
    }

    /// Lowest positive degree carrying a nonzero coefficient.
    std::optional<int> lowest_nonconstant_degree() const {
        std::optional<int> best;
        for (const auto& [m, c] : coeffs_)
            if (!m.empty() && (!best || static_cast<int>(m.size()) < *best)) best = static_cast<int>(m.size());
        return best;
    }

private:
    void add_to(std::map<Monomial, BigInt>& target, const Monomial& m, BigInt c) const {
        if (e_ > 0) c = mod_floor(c, modulus_);
        if (c == 0) return;
        auto [it, inserted] = target.emplace(m, c);
        if (inserted) return;
        it->second += c;
        if (e_ > 0) it->second = mod_floor(it->second, modulus_);
        if (it->second == 0) target.erase(it);
    }

    std::uint64_t p_;
    int e_;
    int cap_;
    BigInt modulus_ = 0;
    std::map<Monomial, BigInt> coeffs_;
};

inline MagnusSeries expand_unchecked(const Word& w, std::uint64_t p, int degree_cap, int e) {
    MagnusSeries s(p, e, degree_cap);
    for (const auto& l : w.letters()) {
        if (is_truncated(l.exponent)) throw std::invalid_argument("Magnus expansion needs integer exponents");
        s.multiply_letter(l.generator, std::get<BigInt>(l.exponent));
    }
    return s;
}

/// Magnus expansion of w truncated at total degree D over Z/p^e (D <= 4, 1 <= e <= 2).
inline MagnusSeries expand(const Word& w, std::uint64_t p, int degree_cap, int e) {
    if (degree_cap < 0 || degree_cap > 4) throw std::invalid_argument("degree cap must be in 0..4");
    if (e < 1 || e > 2) throw std::invalid_argument("coefficient exponent must be 1 or 2");
    return expand_unchecked(w, p, degree_cap, e);
}

// ---------------------------------------------------------------------------
// Pairing tables

/// Pairing data of one relator against Bock(chi_i) and chi_i u chi_k. Signs are normalized so
/// that x_i^p pairs to 1 with Bock(chi_i) and [x_i, x_k] pairs to 1 with chi_i u chi_k.
struct RelatorPairing {
    std::size_t relator = 0;
    fp::Vec bockstein;                  // a_i
    std::vector<fp::Vec> cup;           // cup[i][k] for i < k, zero elsewhere
    std::optional<fp::Vec> p2_diagonal;  // p = 2: chi_i u chi_i = Bock(chi_i)
    bool calibrated = true;

    /// (r, chi_i u chi_k) for all i, k, by antisymmetry plus the p = 2 diagonal.
    fp::Mat form(std::int64_t p) const {
        const std::size_t d = bockstein.size();
        fp::Mat M(d, fp::Vec(d, 0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = i + 1; k < d; ++k) {
                M[i][k] = cup[i][k];
                M[k][i] = fp::reduce(-cup[i][k], p);
            }
        if (p2_diagonal)
            for (std::size_t i = 0; i < d; ++i) M[i][i] = (*p2_diagonal)[i];
        return M;
    }
};

struct PairingTable {
    std::uint64_t p = 2;
    int d = 0;
    std::vector<RelatorPairing> relators;
};

inline std::optional<std::pair<int, Word>> split_power_prefix(const Word& r, std::uint64_t p);

inline RelatorPairing relator_pairing(const Word& r, std::uint64_t p, int d, std::size_t index = 0) {
    const auto sq = expand_unchecked(r, p, 1, 2);
    const auto lin = expand_unchecked(r, p, 2, 1);
    RelatorPairing out;
    out.relator = index;
    const auto P = static_cast<std::int64_t>(p);
    out.cup.assign(static_cast<std::size_t>(d), fp::Vec(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i) {
        const BigInt c = sq.coefficient({i});
        if (c % p != 0) throw std::invalid_argument("relator is not in the Frattini subgroup");
        out.bockstein.push_back(static_cast<std::int64_t>(c / p));
        for (int k = i + 1; k < d; ++k)
            out.cup[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = static_cast<std::int64_t>(lin.coefficient({i, k}) % P);
    }
    if (p == 2) {
        out.p2_diagonal = out.bockstein;
        out.calibrated = split_power_prefix(r, p).has_value();
    }
    return out;
}

/// Per-relator pairing table of P.
inline PairingTable pairing_table(const Presentation& P) {
    PairingTable t;
    t.p = P.p;
    t.d = P.d();
    for (std::size_t j = 0; j < P.relators.size(); ++j) t.relators.push_back(relator_pairing(P.relators[j], P.p, P.d(), j));
    return t;
}

struct CupKernel {
    std::vector<fp::Vec> basis;  // of {psi : psi u chi = 0 for all chi}
    bool nondegenerate = false;
    /// One relator and a non-degenerate cup form.
    bool demushkin_like = false;
};

inline CupKernel cup_kernel(const Presentation& P) {
    const auto table = pairing_table(P);
    const auto p = static_cast<std::int64_t>(P.p);
    const auto d = static_cast<std::size_t>(P.d());
    fp::Mat rows;
    for (const auto& rel : table.relators) {
        const auto M = rel.form(p);
        for (std::size_t k = 0; k < d; ++k) {
            fp::Vec row(d);
            for (std::size_t i = 0; i < d; ++i) row[i] = M[i][k];
            rows.push_back(std::move(row));
        }
    }
    CupKernel out;
    if (rows.empty()) {
        for (std::size_t i = 0; i < d; ++i) {
            fp::Vec e(d, 0);
            e[i] = 1;
            out.basis.push_back(std::move(e));
        }
    } else {
        out.basis = fp::nullspace(p, rows, d);
    }
    out.nondegenerate = out.basis.empty();
    out.demushkin_like = out.nondegenerate && P.relators.size() == 1;
    return out;
}

// ---------------------------------------------------------------------------
// Weights and mildness

inline constexpr int kMaxOmegaCap = 6;

/// Lower-central weight of w if it is at most `cap`: the lowest degree with a nonzero integer
/// Magnus coefficient. nullopt means "> cap".
inline std::optional<int> omega(const Word& w, int cap) {
    if (cap < 1 || cap > kMaxOmegaCap) throw std::invalid_argument("omega cap must be in 1.." + std::to_string(kMaxOmegaCap));
    return expand_unchecked(w, 0, cap, 0).lowest_nonconstant_degree();
}

/// Splits r = x_g^(p^f) v with f >= 1; returns f and v.
inline std::optional<std::pair<int, Word>> split_power_prefix(const Word& r, std::uint64_t p) {
    if (r.size() < 2) return std::nullopt;
    const auto& first = r.letters().front();
    if (is_truncated(first.exponent)) return std::nullopt;
    BigInt n = std::get<BigInt>(first.exponent);
    if (n <= 1) return std::nullopt;
    int f = 0;
    while (n % p == 0) {
        n /= p;
        ++f;
    }
    if (n != 1) return std::nullopt;
    std::vector<Letter> rest(r.letters().begin() + 1, r.letters().end());
    return std::make_pair(f, Word::from_letters(rest));
}

enum class Mildness { True, False, NotApplicable };

struct MildnessVerdict {
    std::size_t relator = 0;
    Mildness status = Mildness::NotApplicable;
    int f = 0;
    int omega_u = 0;
    int omega_v = 0;
    /// (f - 1 + omega(v)/omega(u)) / f as numerator/denominator (unreduced).
    BigInt numerator = 0;
    BigInt denominator = 1;
};

/// Labute's condition (1/f)(f - 1 + omega(v)/omega(u)) < p for relators u^(p^f) v with u a
/// generator; other relators are NotApplicable, as are those with omega(v) beyond the cap.
inline std::vector<MildnessVerdict> labute_mildness(const Presentation& P) {
    std::vector<MildnessVerdict> out;
    for (std::size_t j = 0; j < P.relators.size(); ++j) {
        MildnessVerdict v;
        v.relator = j;
        if (auto split = split_power_prefix(P.relators[j], P.p)) {
            const Word u = Word::generator(P.relators[j].letters().front().generator);
            const auto wu = omega(u, kMaxOmegaCap);
            const auto wv = omega(split->second, kMaxOmegaCap);
            if (wu && wv) {
                v.f = split->first;
                v.omega_u = *wu;
                v.omega_v = *wv;
                v.numerator = BigInt(v.f - 1) * v.omega_u + v.omega_v;
                v.denominator = BigInt(v.f) * v.omega_u;
                v.status = v.numerator < BigInt(P.p) * v.denominator ? Mildness::True : Mildness::False;
            }
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace kummerian
