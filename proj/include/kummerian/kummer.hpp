#pragma once

// Kummerian decision at a fixed orientation, and the search for all Kummerian orientations by
// lifting solutions digit by digit.
//
// For a finitely generated torsion-free pair, Kummerian means that every assignment on the
// generators extends to a 1-cocycle. Since c(r_j) = sum_i fox(j, i) alpha_i, that happens at
// precision N exactly when the Fox matrix vanishes mod p^N.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kummerian/cocycle.hpp"
#include "kummerian/modlinalg.hpp"
#include "kummerian/words.hpp"

namespace kummerian {

enum class KummerStatus { KummerianAt, Refuted };

struct FoxWitness {
    std::size_t relator = 0;
    int generator = 0;
    PadicScalar value;
};

struct KummerVerdict {
    KummerStatus status = KummerStatus::KummerianAt;
    int precision = 1;
    std::optional<FoxWitness> witness;  // set exactly when refuted

    bool kummerian() const { return status == KummerStatus::KummerianAt; }
};

/// KummerianAt(N) iff every Fox entry vanishes mod p^N; otherwise Refuted(N) with the entry
/// of least valuation (first in row-major order on ties).
/// Throws ThetaNotWellDefined if theta(r_j) != 1 mod p^N.
inline KummerVerdict is_kummerian_at(const Presentation& P, const Orientation& theta, int precision) {
    if (precision > theta.precision())
        throw std::invalid_argument("orientation is only known to precision " + std::to_string(theta.precision()));
    const FoxMatrix M = fox_matrix(P, theta.truncate(precision));
    KummerVerdict v;
    v.precision = M.precision;
    for (std::size_t j = 0; j < M.rows(); ++j)
        for (std::size_t i = 0; i < M.entries[j].size(); ++i) {
            const auto& e = M.entries[j][i];
            if (e.is_zero()) continue;
            if (!v.witness || e.valuation() < v.witness->value.valuation())
                v.witness = FoxWitness{j, static_cast<int>(i), e};
        }
    if (v.witness) v.status = KummerStatus::Refuted;
    return v;
}

struct SearchLimits {
    std::uint64_t max_solutions = 1000;
    std::uint64_t max_branches = 100000;
};

enum class SearchStatus { Solutions, Empty, CapExceeded };

struct OrientationSearchResult {
    SearchStatus status = SearchStatus::Empty;
    int precision = 1;
    /// Empty: first level with no surviving branch. CapExceeded: level being built when a cap
    /// was hit. Solutions: equals precision.
    int level = 1;
    /// Level of the single starting class (1 for p odd, 2 for p = 2).
    int start_level = 1;
    std::vector<Orientation> solutions;  // sorted by residue vectors
    std::uint64_t explored_branches = 0;
    /// survivors[k] = number of classes mod p^k satisfying all constraints, for
    /// start_level <= k <= last level reached; zero elsewhere.
    std::vector<std::uint64_t> survivors;
};

namespace detail {

/// The constraint vector at theta (all at theta's precision): theta(r_j) - 1 for every
/// relator, then the Fox entries row by row.
inline std::vector<PadicScalar> search_constraints(const Presentation& P, const Orientation& theta) {
    std::vector<PadicScalar> out;
    for (const auto& t : relator_thetas(P, theta)) out.push_back(t.value() - PadicScalar::one(P.p, theta.precision()));
    for (auto& row : fox_matrix_unchecked(P, theta).entries)
        for (auto& e : row) out.push_back(e);
    for (const auto& v : out)
        if (v.precision() < theta.precision())
            throw std::invalid_argument("a relator's truncated exponents have less precision than the search");
    return out;
}

inline std::vector<BigInt> lift_residues(const std::vector<BigInt>& base, const BigInt& step, const fp::Vec& delta) {
    std::vector<BigInt> out = base;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += step * delta[i];
    return out;
}

}  // namespace detail

/// All orientations in the torsion-free family ((1+pZ)^d for p odd, (1+4Z)^d for p = 2) for
/// which theta(r_j) = 1 and the Fox matrix vanishes mod p^N.
///
/// Level k holds the classes mod p^k satisfying every constraint mod p^k. A class t lifts to
/// t + p^k delta at level k+1 iff F(t)/p^k + J delta = 0 over F_p, where column i of J is the
/// exact finite difference (F(t + p^k e_i) - F(t))/p^k mod p. The constraints are integral
/// power series in theta, so second-order terms vanish mod p^(2k) and the linearization is
/// exact mod p^(k+1).
inline OrientationSearchResult search_orientations(const Presentation& P, int precision, const SearchLimits& limits = {}) {
    if (precision < 1) throw std::invalid_argument("precision must be >= 1");
    const std::uint64_t p = P.p;
    const int d = P.d();
    OrientationSearchResult res;
    res.precision = precision;
    res.start_level = std::min(p == 2 ? 2 : 1, precision);
    res.survivors.assign(static_cast<std::size_t>(precision) + 1, 0);

    const auto satisfied = [&](const std::vector<BigInt>& residues, int k) {
        for (const auto& c : detail::search_constraints(P, Orientation::from_residues(p, k, residues)))
            if (!c.is_zero()) return false;
        return true;
    };

    std::vector<std::vector<BigInt>> current{std::vector<BigInt>(static_cast<std::size_t>(d), BigInt(1))};
    res.explored_branches = 1;
    if (!satisfied(current[0], res.start_level)) {
        res.status = SearchStatus::Empty;
        res.level = res.start_level;
        return res;
    }
    res.survivors[static_cast<std::size_t>(res.start_level)] = 1;

    for (int k = res.start_level; k < precision; ++k) {
        const int next_level = k + 1;
        const BigInt step = ipow(p, static_cast<unsigned>(k));
        std::vector<std::vector<BigInt>> next;
        for (const auto& base : current) {
            const auto f0 = detail::search_constraints(P, Orientation::from_residues(p, next_level, base));
            fp::AffineSystem sys;
            sys.p = static_cast<std::int64_t>(p);
            sys.unknowns = static_cast<std::size_t>(d);
            std::vector<fp::Vec> columns;
            for (int i = 0; i < d; ++i) {
                fp::Vec delta(static_cast<std::size_t>(d), 0);
                delta[static_cast<std::size_t>(i)] = 1;
                const auto fi = detail::search_constraints(P, Orientation::from_residues(p, next_level, detail::lift_residues(base, step, delta)));
                fp::Vec col;
                for (std::size_t c = 0; c < fi.size(); ++c)
                    col.push_back(static_cast<std::int64_t>(((fi[c] - f0[c]).residue() / step) % p));
                columns.push_back(std::move(col));
            }
            for (std::size_t c = 0; c < f0.size(); ++c) {
                fp::Vec row;
                for (int i = 0; i < d; ++i) row.push_back(columns[static_cast<std::size_t>(i)][c]);
                const BigInt& r = f0[c].residue();
                if (r % step != 0) throw std::logic_error("search invariant broken: constraint not divisible by p^k");
                sys.add_equation(std::move(row), -static_cast<std::int64_t>((r / step) % p));
            }
            const auto sol = fp::solve_affine(sys);
            const std::uint64_t room = limits.max_branches - std::min(limits.max_branches, res.explored_branches);
            if (sol.count(room + 1) > room) {
                res.status = SearchStatus::CapExceeded;
                res.level = next_level;
                res.explored_branches = limits.max_branches + 1;
                return res;
            }
            res.explored_branches += sol.count();
            sol.for_each([&](const fp::Vec& delta) {
                next.push_back(detail::lift_residues(base, step, delta));
                return true;
            });
        }
        res.survivors[static_cast<std::size_t>(next_level)] = next.size();
        if (next.empty()) {
            res.status = SearchStatus::Empty;
            res.level = next_level;
            return res;
        }
        current = std::move(next);
    }

    if (current.size() > limits.max_solutions) {
        res.status = SearchStatus::CapExceeded;
        res.level = precision;
        return res;
    }
    std::sort(current.begin(), current.end());
    for (const auto& residues : current) {
        Orientation theta = Orientation::from_residues(p, precision, residues);
        if (!is_kummerian_at(P, theta, precision).kummerian())
            throw std::logic_error("search produced an orientation that fails the Kummerian check");
        res.solutions.push_back(std::move(theta));
    }
    res.status = SearchStatus::Solutions;
    res.level = precision;
    return res;
}

}  // namespace kummerian
