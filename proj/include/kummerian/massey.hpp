#pragma once

// Massey products <phi_1, ..., phi_n> in H^1(G, F_p) through unipotent representations:
// the product is non-empty iff some homomorphism G -> U_{n+1}(F_p)/center has the phi_i on
// its superdiagonal, and contains 0 iff such a homomorphism lifts to U_{n+1}(F_p) itself.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kummerian/modlinalg.hpp"
#include "kummerian/words.hpp"

namespace kummerian {

/// Values of a character G -> F_p on the generators.
using CharacterFp = fp::Vec;

/// Unipotent upper-triangular matrix over F_p.
class UMatrix {
public:
    UMatrix(int size, std::int64_t p) : size_(size), p_(p), a_(static_cast<std::size_t>(size * size), 0) {
        for (int i = 0; i < size; ++i) set(i, i, 1);
    }

    int size() const { return size_; }
    std::int64_t prime() const { return p_; }
    std::int64_t at(int i, int j) const { return a_[static_cast<std::size_t>(i * size_ + j)]; }
    void set(int i, int j, std::int64_t v) { a_[static_cast<std::size_t>(i * size_ + j)] = fp::reduce(v, p_); }

    bool is_valid_unipotent() const {
        for (int i = 0; i < size_; ++i)
            for (int j = 0; j <= i; ++j)
                if (at(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }
    bool is_identity() const { return *this == UMatrix(size_, p_); }
    /// Identity except possibly in the corner entry (0, size - 1).
    bool is_central() const {
        for (int i = 0; i < size_; ++i)
            for (int j = i + 1; j < size_; ++j)
                if (!(i == 0 && j == size_ - 1) && at(i, j) != 0) return false;
        return true;
    }

    UMatrix operator*(const UMatrix& o) const {
        UMatrix r(size_, p_);
        for (int i = 0; i < size_; ++i)
            for (int j = i + 1; j < size_; ++j) {
                std::int64_t s = 0;
                for (int k = i; k <= j; ++k) s = fp::reduce(s + at(i, k) * o.at(k, j), p_);
                r.set(i, j, s);
            }
        return r;
    }

    bool operator==(const UMatrix& o) const { return size_ == o.size_ && p_ == o.p_ && a_ == o.a_; }

private:
    int size_;
    std::int64_t p_;
    std::vector<std::int64_t> a_;
};

/// Smallest e with p^e >= size; U_size(F_p) has exponent p^e.
inline int unipotent_exponent_log(std::int64_t p, int size) {
    int e = 0;
    for (std::int64_t q = 1; q < size; q *= p) ++e;
    return e;
}

/// M^k for k >= 0 via M^k = sum_j C(k, j) (M - I)^j.
inline UMatrix unipotent_power(const UMatrix& M, const BigInt& k) {
    const int n = M.size();
    const auto p = M.prime();
    UMatrix nil = M;
    for (int i = 0; i < n; ++i) nil.set(i, i, 0);
    std::vector<std::int64_t> acc(static_cast<std::size_t>(n * n), 0), cur(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i) acc[static_cast<std::size_t>(i * n + i)] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cur[static_cast<std::size_t>(i * n + j)] = nil.at(i, j);
    BigInt binom = 1;
    for (int j = 1; j < n; ++j) {
        binom = binom * (k - (j - 1)) / j;
        const auto c = static_cast<std::int64_t>(mod_floor(binom, BigInt(p)));
        for (std::size_t t = 0; t < acc.size(); ++t) acc[t] = fp::reduce(acc[t] + c * cur[t], p);
        std::vector<std::int64_t> nxt(static_cast<std::size_t>(n * n), 0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                std::int64_t s = 0;
                for (int m = 0; m < n; ++m)
                    s = fp::reduce(s + cur[static_cast<std::size_t>(a * n + m)] * nil.at(m, b), p);
                nxt[static_cast<std::size_t>(a * n + b)] = s;
            }
        cur = std::move(nxt);
    }
    UMatrix out(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.set(i, j, acc[static_cast<std::size_t>(i * n + j)]);
    return out;
}

/// One unipotent matrix per generator.
class UnipotentAssignment {
public:
    explicit UnipotentAssignment(std::vector<UMatrix> matrices) : m_(std::move(matrices)) {
        if (m_.empty()) throw std::invalid_argument("assignment needs at least one generator");
        for (const auto& M : m_)
            if (M.size() != m_[0].size() || M.prime() != m_[0].prime() || !M.is_valid_unipotent())
                throw std::invalid_argument("assignment matrices must be unipotent of a common size and prime");
    }
    int d() const { return static_cast<int>(m_.size()); }
    int size() const { return m_[0].size(); }
    std::int64_t prime() const { return m_[0].prime(); }
    const UMatrix& operator[](int g) const { return m_.at(static_cast<std::size_t>(g)); }
    UMatrix& operator[](int g) { return m_.at(static_cast<std::size_t>(g)); }

private:
    std::vector<UMatrix> m_;
};

/// gamma(w) for the homomorphism sending x_g to assignment[g]. Exponents are reduced modulo
/// the exponent p^e of the unipotent group; truncated exponents need precision >= e.
inline UMatrix unipotent_eval(const UnipotentAssignment& gamma, const Word& w) {
    const auto p = gamma.prime();
    const int e = unipotent_exponent_log(p, gamma.size());
    const BigInt group_exponent = ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(e));
    UMatrix acc(gamma.size(), p);
    for (const auto& l : w.letters()) {
        if (l.generator >= gamma.d()) throw std::invalid_argument("word uses a generator outside the assignment");
        if (const auto* t = std::get_if<PadicScalar>(&l.exponent); t && t->precision() < e)
            throw std::invalid_argument("truncated exponent has too little precision for U_" + std::to_string(gamma.size()));
        acc = acc * unipotent_power(gamma[l.generator], mod_floor(integer_value(l.exponent), group_exponent));
    }
    return acc;
}

struct MasseyVerdict {
    bool non_empty = false;
    bool contains_zero = false;
    /// Ranks of the solved systems: modulo the center, and in full.
    std::size_t rank_center = 0;
    std::size_t rank_full = 0;
    /// Off-superdiagonal entries of a representation realizing 0, when one exists. For the
    /// triple product: per generator, entries (1,3), (2,4), (1,4).
    std::optional<fp::Vec> witness;
    /// False when a staged search stopped at its branch cap.
    bool complete = true;

    bool essential() const { return non_empty && !contains_zero; }
};

namespace detail {

inline void check_characters(const Presentation& P, const std::vector<CharacterFp>& phis) {
    for (const auto& phi : phis) {
        if (static_cast<int>(phi.size()) != P.d())
            throw std::invalid_argument("character has " + std::to_string(phi.size()) + " values for " + std::to_string(P.d()) + " generators");
    }
}

inline UnipotentAssignment triple_assignment(const Presentation& P, const std::vector<CharacterFp>& phi, const fp::Vec& u) {
    const auto p = static_cast<std::int64_t>(P.p);
    std::vector<UMatrix> mats;
    for (int g = 0; g < P.d(); ++g) {
        const auto gi = static_cast<std::size_t>(g);
        UMatrix M(4, p);
        M.set(0, 1, phi[0][gi]);
        M.set(1, 2, phi[1][gi]);
        M.set(2, 3, phi[2][gi]);
        M.set(0, 2, u[3 * gi]);
        M.set(1, 3, u[3 * gi + 1]);
        M.set(0, 3, u[3 * gi + 2]);
        mats.push_back(M);
    }
    return UnipotentAssignment(std::move(mats));
}

// Entries of gamma(r_j) above the diagonal, six per relator; the sixth is the corner.
inline constexpr int kTripleEntries[6][2] = {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3}};

inline fp::Vec triple_constraints(const Presentation& P, const std::vector<CharacterFp>& phi, const fp::Vec& u) {
    const auto gamma = triple_assignment(P, phi, u);
    fp::Vec out;
    for (const auto& r : P.relators) {
        const auto M = unipotent_eval(gamma, r);
        for (const auto& e : kTripleEntries) out.push_back(M.at(e[0], e[1]));
    }
    return out;
}

}  // namespace detail

/// Triple Massey product status. The entries of gamma(r_j) are affine in the 3d unknown
/// entries (1,3), (2,4), (1,4) of the generator matrices (no product in U_4 multiplies two
/// of them), so the affine forms are read off by probing and both questions become linear
/// systems over F_p.
inline MasseyVerdict triple_massey(const Presentation& P, const CharacterFp& phi1, const CharacterFp& phi2, const CharacterFp& phi3) {
    const std::vector<CharacterFp> phi{phi1, phi2, phi3};
    detail::check_characters(P, phi);
    const auto p = static_cast<std::int64_t>(P.p);
    const std::size_t unknowns = 3 * static_cast<std::size_t>(P.d());

    const fp::Vec zero(unknowns, 0);
    const fp::Vec f0 = detail::triple_constraints(P, phi, zero);
    std::vector<fp::Vec> columns;
    for (std::size_t k = 0; k < unknowns; ++k) {
        fp::Vec e = zero;
        e[k] = 1;
        fp::Vec fk = detail::triple_constraints(P, phi, e);
        for (std::size_t c = 0; c < fk.size(); ++c) fk[c] = fp::reduce(fk[c] - f0[c], p);
        columns.push_back(std::move(fk));
    }

    // spot-check affinity at a few pseudo-random points
    RandomSource rng(0x3a55e7);
    for (int trial = 0; trial < 4; ++trial) {
        fp::Vec u(unknowns);
        for (auto& x : u) x = rng.uniform(0, p - 1);
        const auto fu = detail::triple_constraints(P, phi, u);
        for (std::size_t c = 0; c < fu.size(); ++c) {
            std::int64_t predicted = f0[c];
            for (std::size_t k = 0; k < unknowns; ++k) predicted = fp::reduce(predicted + columns[k][c] * u[k], p);
            if (predicted != fu[c]) throw std::logic_error("relator entries are not affine in the unknowns");
        }
    }

    fp::AffineSystem center, full;
    center.p = full.p = p;
    center.unknowns = full.unknowns = unknowns;
    for (std::size_t c = 0; c < f0.size(); ++c) {
        fp::Vec row(unknowns);
        for (std::size_t k = 0; k < unknowns; ++k) row[k] = columns[k][c];
        const bool corner = c % 6 == 5;
        if (!corner) center.add_equation(row, -f0[c]);
        full.add_equation(std::move(row), -f0[c]);
    }
    const auto cs = fp::solve_affine(center);
    const auto fs = fp::solve_affine(full);
    MasseyVerdict v;
    v.non_empty = !cs.empty;
    v.contains_zero = !fs.empty;
    v.rank_center = cs.rank;
    v.rank_full = fs.rank;
    if (!fs.empty) v.witness = fs.particular;
    return v;
}

inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

/// Exhaustive check over all p^(3d) choices of the unknown entries.
inline MasseyVerdict brute_force_massey(const Presentation& P, const CharacterFp& phi1, const CharacterFp& phi2, const CharacterFp& phi3) {
    const std::vector<CharacterFp> phi{phi1, phi2, phi3};
    detail::check_characters(P, phi);
    const auto p = static_cast<std::int64_t>(P.p);
    const std::size_t unknowns = 3 * static_cast<std::size_t>(P.d());
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < unknowns; ++k) {
        total *= static_cast<std::uint64_t>(p);
        if (total > kBruteForceLimit) throw std::length_error("brute force needs p^(3d) <= 10^6");
    }
    MasseyVerdict v;
    fp::Vec u(unknowns, 0);
    for (std::uint64_t it = 0; it < total; ++it) {
        std::uint64_t x = it;
        for (std::size_t k = 0; k < unknowns; ++k) {
            u[k] = static_cast<std::int64_t>(x % static_cast<std::uint64_t>(p));
            x /= static_cast<std::uint64_t>(p);
        }
        const auto gamma = detail::triple_assignment(P, phi, u);
        bool central = true, identity = true;
        for (const auto& r : P.relators) {
            const auto M = unipotent_eval(gamma, r);
            central = central && M.is_central();
            identity = identity && M.is_identity();
        }
        v.non_empty = v.non_empty || central;
        if (identity && !v.contains_zero) {
            v.contains_zero = true;
            v.witness = u;
        }
        if (v.contains_zero) break;
    }
    return v;
}

/// n-fold Massey product for 2 <= n <= 5 by solving one diagonal at a time: with the lower
/// diagonals fixed, the entries on diagonal s of every gamma(r_j) are affine in the diagonal-s
/// unknowns. Every solution of each stage is explored (up to max_branches); if the cap is hit
/// the verdict is marked incomplete. Experimental for n >= 4.
inline MasseyVerdict massey_product(const Presentation& P, const std::vector<CharacterFp>& phis, std::uint64_t max_branches = 100000) {
    const int n = static_cast<int>(phis.size());
    if (n < 2 || n > 5) throw std::invalid_argument("Massey products are supported for 2 <= n <= 5");
    detail::check_characters(P, phis);
    const auto p = static_cast<std::int64_t>(P.p);
    const int size = n + 1;
    const int d = P.d();

    std::vector<UMatrix> base;
    for (int g = 0; g < d; ++g) {
        UMatrix M(size, p);
        for (int i = 0; i < n; ++i) M.set(i, i + 1, phis[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)]);
        base.push_back(M);
    }

    MasseyVerdict v;
    std::uint64_t branches = 0;

    const auto diagonal_values = [&](const std::vector<UMatrix>& mats, int s) {
        const UnipotentAssignment gamma(mats);
        fp::Vec out;
        for (const auto& r : P.relators) {
            const auto M = unipotent_eval(gamma, r);
            for (int i = 0; i + s < size; ++i) out.push_back(M.at(i, i + s));
        }
        return out;
    };
    const auto with_stage = [&](std::vector<UMatrix> mats, int s, const fp::Vec& x) {
        const int per = size - s;
        for (int g = 0; g < d; ++g)
            for (int i = 0; i < per; ++i) mats[static_cast<std::size_t>(g)].set(i, i + s, x[static_cast<std::size_t>(g * per + i)]);
        return mats;
    };

    const std::function<void(const std::vector<UMatrix>&, int)> stage = [&](const std::vector<UMatrix>& mats, int s) {
        if (v.contains_zero || !v.complete) return;
        const std::size_t unknowns = static_cast<std::size_t>(d * (size - s));
        const fp::Vec zero(unknowns, 0);
        const fp::Vec f0 = diagonal_values(with_stage(mats, s, zero), s);
        fp::AffineSystem sys;
        sys.p = p;
        sys.unknowns = unknowns;
        std::vector<fp::Vec> columns;
        for (std::size_t k = 0; k < unknowns; ++k) {
            fp::Vec e = zero;
            e[k] = 1;
            fp::Vec fk = diagonal_values(with_stage(mats, s, e), s);
            for (std::size_t c = 0; c < fk.size(); ++c) fk[c] = fp::reduce(fk[c] - f0[c], p);
            columns.push_back(std::move(fk));
        }
        for (std::size_t c = 0; c < f0.size(); ++c) {
            fp::Vec row(unknowns);
            for (std::size_t k = 0; k < unknowns; ++k) row[k] = columns[k][c];
            sys.add_equation(std::move(row), -f0[c]);
        }
        const auto sol = fp::solve_affine(sys);
        if (s == n) {
            v.non_empty = true;
            if (!sol.empty) {
                v.contains_zero = true;
                v.rank_full = sol.rank;
                fp::Vec w;
                const auto done = with_stage(mats, s, sol.particular);
                for (int g = 0; g < d; ++g)
                    for (int t = 2; t <= n; ++t)
                        for (int i = 0; i + t < size; ++i) w.push_back(done[static_cast<std::size_t>(g)].at(i, i + t));
                v.witness = w;
            }
            return;
        }
        v.rank_center = std::max(v.rank_center, sol.rank);
        sol.for_each([&](const fp::Vec& x) {
            if (++branches > max_branches) {
                v.complete = false;
                return false;
            }
            stage(with_stage(mats, s, x), s + 1);
            return !v.contains_zero && v.complete;
        });
    };

    // superdiagonal entries of gamma(r_j) are phi_i(r_j), zero for Frattini relators
    for (const auto& x : diagonal_values(base, 1))
        if (x != 0) throw std::invalid_argument("characters do not vanish on the relators");
    stage(base, 2);
    return v;
}

}  // namespace kummerian
