#pragma once

// Truncated p-adic integers Z/p^N and the multiplicative 1-units acting on them.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace kummerian {

using BigInt = boost::multiprecision::cpp_int;

class PrimeMismatch : public std::invalid_argument {
public:
    PrimeMismatch(std::uint64_t a, std::uint64_t b)
        : std::invalid_argument("prime mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

inline BigInt ipow(std::uint64_t base, unsigned exponent) {
    return boost::multiprecision::pow(BigInt(base), exponent);
}

/// Nonnegative representative of x modulo m (m > 0).
inline BigInt mod_floor(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

/// p-adic valuation of an integer; returns `cap` for zero or when the valuation reaches cap.
inline int valuation(BigInt x, std::uint64_t p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (v < cap && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

/// An element of Z/p^N. Binary operations work at the smaller of the two precisions.
class PadicScalar {
public:
    PadicScalar(std::uint64_t p, int precision, const BigInt& value)
        : p_(p), precision_(precision) {
        if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
        if (precision < 1) throw std::invalid_argument("precision must be >= 1");
        modulus_ = ipow(p, static_cast<unsigned>(precision));
        residue_ = mod_floor(value, modulus_);
    }

    static PadicScalar zero(std::uint64_t p, int precision) { return {p, precision, 0}; }
    static PadicScalar one(std::uint64_t p, int precision) { return {p, precision, 1}; }

    std::uint64_t prime() const { return p_; }
    int precision() const { return precision_; }
    const BigInt& residue() const { return residue_; }
    const BigInt& modulus() const { return modulus_; }

    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return residue_ % p_ != 0; }
    /// Valuation of the residue; equals precision() for zero.
    int valuation() const { return kummerian::valuation(residue_, p_, precision_); }

    /// Reduce to a precision not exceeding the current one.
    PadicScalar truncate(int precision) const {
        if (precision > precision_)
            throw std::invalid_argument("cannot raise precision by truncation");
        return {p_, precision, residue_};
    }
    /// Reinterpret the representative at another precision (higher precision picks the
    /// canonical lift in [0, p^old)).
    PadicScalar lift(int precision) const { return {p_, precision, residue_}; }

    PadicScalar operator-() const { return {p_, precision_, -residue_}; }
    PadicScalar operator+(const PadicScalar& o) const {
        check(o);
        return {p_, std::min(precision_, o.precision_), residue_ + o.residue_};
    }
    PadicScalar operator-(const PadicScalar& o) const {
        check(o);
        return {p_, std::min(precision_, o.precision_), residue_ - o.residue_};
    }
    PadicScalar operator*(const PadicScalar& o) const {
        check(o);
        return {p_, std::min(precision_, o.precision_), residue_ * o.residue_};
    }
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

    PadicScalar inverse() const {
        if (!is_unit()) throw std::domain_error("not a unit: " + to_string());
        return {p_, precision_, boost::integer::mod_inverse(residue_, modulus_)};
    }

    /// Equality of primes, precisions and residues.
    bool operator==(const PadicScalar& o) const {
        return p_ == o.p_ && precision_ == o.precision_ && residue_ == o.residue_;
    }

    /// Congruence at the smaller precision.
    bool congruent(const PadicScalar& o) const {
        check(o);
        return (*this - o).is_zero();
    }

    /// "r mod p^N".
    std::string to_string() const {
        return residue_.str() + " mod " + std::to_string(p_) + "^" + std::to_string(precision_);
    }

    void check(const PadicScalar& o) const {
        if (p_ != o.p_) throw PrimeMismatch(p_, o.p_);
    }

private:
    std::uint64_t p_;
    int precision_;
    BigInt modulus_;
    BigInt residue_;
};

/// A 1-unit: congruent to 1 mod p, and to 1 mod 4 when p = 2. The image of such values is
/// torsion free.
class UnitOneScalar {
public:
    explicit UnitOneScalar(PadicScalar value) : value_(std::move(value)) {
        if (!admissible(value_))
            throw std::invalid_argument("not an admissible 1-unit: " + value_.to_string());
    }
    UnitOneScalar(std::uint64_t p, int precision, const BigInt& value)
        : UnitOneScalar(PadicScalar(p, precision, value)) {}

    static UnitOneScalar one(std::uint64_t p, int precision) { return UnitOneScalar(PadicScalar::one(p, precision)); }

    static bool admissible(const PadicScalar& v) {
        const std::uint64_t p = v.prime();
        if (p == 2 && v.precision() >= 2) return v.residue() % 4 == 1;
        return v.residue() % p == 1 % p;
    }

    const PadicScalar& value() const { return value_; }
    std::uint64_t prime() const { return value_.prime(); }
    int precision() const { return value_.precision(); }
    bool is_one() const { return value_.residue() == 1; }

    UnitOneScalar operator*(const UnitOneScalar& o) const { return UnitOneScalar(value_ * o.value_); }
    UnitOneScalar inverse() const { return UnitOneScalar(value_.inverse()); }
    UnitOneScalar truncate(int precision) const { return UnitOneScalar(value_.truncate(precision)); }
    bool operator==(const UnitOneScalar& o) const { return value_ == o.value_; }

private:
    PadicScalar value_;
};

/// base^exponent for an integer exponent of any sign. The 1-units of Z/p^N form a group of
/// order dividing p^N, so the exponent only matters modulo p^N.
inline UnitOneScalar pow(const UnitOneScalar& base, const BigInt& exponent) {
    const PadicScalar& b = base.value();
    const BigInt e = mod_floor(exponent, b.modulus());
    return UnitOneScalar(PadicScalar(b.prime(), b.precision(), boost::multiprecision::powm(b.residue(), e, b.modulus())));
}

/// base^lambda for a truncated exponent; the result carries the smaller precision.
inline UnitOneScalar pow(const UnitOneScalar& base, const PadicScalar& lambda) {
    base.value().check(lambda);
    const int n = std::min(base.precision(), lambda.precision());
    return pow(base.truncate(n), lambda.residue());
}

/// The theta-integer [lambda]_theta: lambda when theta = 1, otherwise
/// (theta^lambda - 1)/(theta - 1). Evaluated as sum_{m>=1} C(lambda, m) (theta - 1)^(m-1),
/// whose terms with m > N vanish mod p^N. lambda only matters modulo p^(2N) here.
inline PadicScalar qint(const UnitOneScalar& theta, const BigInt& lambda) {
    const PadicScalar& t = theta.value();
    const std::uint64_t p = t.prime();
    const int n = t.precision();
    const BigInt guard = ipow(p, static_cast<unsigned>(2 * n));
    const BigInt lam = mod_floor(lambda, guard);
    const BigInt delta = t.residue() - 1;
    if (delta == 0) return {p, n, lam};

    BigInt sum = 0;
    BigInt binom = lam;  // C(lam, m)
    BigInt dpow = 1;     // delta^(m-1)
    for (int m = 1; m <= n && binom != 0; ++m) {
        sum += binom * dpow;
        binom = binom * (lam - m) / (m + 1);
        dpow *= delta;
    }
    return {p, n, sum};
}

inline PadicScalar qint(const UnitOneScalar& theta, const PadicScalar& lambda) {
    theta.value().check(lambda);
    const int n = std::min(theta.precision(), lambda.precision());
    return qint(theta.truncate(n), lambda.residue());
}

}  // namespace kummerian
