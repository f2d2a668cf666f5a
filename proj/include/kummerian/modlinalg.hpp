#pragma once

// Dense affine systems over F_p. Systems here have at most a few dozen unknowns.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kummerian::fp {

using Vec = std::vector<std::int64_t>;
using Mat = std::vector<Vec>;

inline std::int64_t reduce(std::int64_t x, std::int64_t p) {
    x %= p;
    return x < 0 ? x + p : x;
}

inline std::int64_t inverse(std::int64_t a, std::int64_t p) {
    // Fermat: a^(p-2).
    std::int64_t result = 1, base = reduce(a, p);
    if (base == 0) throw std::domain_error("zero has no inverse mod p");
    for (std::int64_t e = p - 2; e > 0; e >>= 1) {
        if (e & 1) result = static_cast<std::int64_t>((static_cast<__int128>(result) * base) % p);
        base = static_cast<std::int64_t>((static_cast<__int128>(base) * base) % p);
    }
    return result;
}

struct AffineSystem {
    std::int64_t p = 2;
    std::size_t unknowns = 0;
    Mat A;  // rows of length `unknowns`
    Vec b;

    void add_equation(Vec row, std::int64_t rhs) {
        if (row.size() != unknowns) throw std::invalid_argument("equation length does not match unknowns");
        A.push_back(std::move(row));
        b.push_back(rhs);
    }
};

/// Either empty, or particular + span(basis). Free coordinates of `particular` are zero and
/// basis vector k has a 1 in free coordinate k and zeros in the other free coordinates.
struct AffineSolutionSet {
    std::int64_t p = 2;
    bool empty = true;
    Vec particular;
    std::vector<Vec> basis;
    std::vector<std::size_t> free_columns;
    std::size_t rank = 0;

    std::size_t dimension() const { return basis.size(); }

    /// Number of points, saturating at `cap`.
    std::uint64_t count(std::uint64_t cap = UINT64_MAX) const {
        if (empty) return 0;
        std::uint64_t n = 1;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (n > cap / static_cast<std::uint64_t>(p)) return cap;
            n *= static_cast<std::uint64_t>(p);
        }
        return n;
    }

    /// Visits every point, lexicographically by the free coordinates. The visitor returns false
    /// to stop early; the function returns false if it was stopped.
    bool for_each(const std::function<bool(const Vec&)>& visit) const {
        if (empty) return true;
        const std::size_t k = basis.size();
        std::vector<std::int64_t> t(k, 0);
        while (true) {
            Vec x = particular;
            for (std::size_t j = 0; j < k; ++j)
                if (t[j])
                    for (std::size_t i = 0; i < x.size(); ++i) x[i] = reduce(x[i] + t[j] * basis[j][i], p);
            if (!visit(x)) return false;
            // odometer over t, last coordinate fastest
            std::size_t pos = k;
            bool carried_out = true;
            while (pos > 0) {
                --pos;
                if (++t[pos] < p) {
                    carried_out = false;
                    break;
                }
                t[pos] = 0;
            }
            if (carried_out) return true;
        }
    }

    std::vector<Vec> points() const {
        std::vector<Vec> out;
        for_each([&](const Vec& x) {
            out.push_back(x);
            return true;
        });
        return out;
    }
};

/// Gaussian elimination to reduced row echelon form over F_p.
inline AffineSolutionSet solve_affine(const AffineSystem& sys) {
    const std::int64_t p = sys.p;
    const std::size_t n = sys.unknowns;
    const std::size_t m = sys.A.size();
    Mat M(m, Vec(n + 1, 0));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) M[r][c] = reduce(sys.A[r][c], p);
        M[r][n] = reduce(sys.b[r], p);
    }

    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t sel = row;
        while (sel < m && M[sel][col] == 0) ++sel;
        if (sel == m) continue;
        std::swap(M[row], M[sel]);
        const std::int64_t inv = inverse(M[row][col], p);
        for (auto& v : M[row]) v = reduce(v * inv, p);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || M[r][col] == 0) continue;
            const std::int64_t f = M[r][col];
            for (std::size_t c = 0; c <= n; ++c) M[r][c] = reduce(M[r][c] - f * M[row][c], p);
        }
        pivots.push_back(col);
        ++row;
    }

    AffineSolutionSet out;
    out.p = p;
    out.rank = pivots.size();
    for (std::size_t r = pivots.size(); r < m; ++r)
        if (M[r][n] != 0) return out;

    out.empty = false;
    out.particular.assign(n, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) out.particular[pivots[r]] = M[r][n];

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Vec v(n, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = reduce(-M[r][f], p);
        out.basis.push_back(std::move(v));
        out.free_columns.push_back(f);
    }
    return out;
}

inline AffineSolutionSet solve_affine(std::int64_t p, const Mat& A, const Vec& b) {
    AffineSystem sys;
    sys.p = p;
    sys.unknowns = A.empty() ? 0 : A[0].size();
    sys.A = A;
    sys.b = b;
    return solve_affine(sys);
}

/// Basis of {x : A x = 0} for A with `n` columns.
inline std::vector<Vec> nullspace(std::int64_t p, const Mat& A, std::size_t n) {
    AffineSystem sys;
    sys.p = p;
    sys.unknowns = n;
    for (const auto& row : A) sys.add_equation(row, 0);
    return solve_affine(sys).basis;
}

inline std::size_t rank(std::int64_t p, const Mat& A, std::size_t n) {
    AffineSystem sys;
    sys.p = p;
    sys.unknowns = n;
    for (const auto& row : A) sys.add_equation(row, 0);
    return solve_affine(sys).rank;
}

}  // namespace kummerian::fp
