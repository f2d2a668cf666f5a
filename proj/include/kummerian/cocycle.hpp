#pragma once

// Twisted 1-cocycles c(gh) = c(g) + theta(g) c(h) on a free group, and the theta-twisted
// Fox matrix of a presentation.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "kummerian/padic.hpp"
#include "kummerian/words.hpp"

namespace kummerian {

/// Values theta(x_i) of a candidate orientation, all admissible 1-units at a common prime and
/// precision.
class Orientation {
public:
    explicit Orientation(std::vector<UnitOneScalar> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("orientation needs at least one generator");
        for (const auto& v : values_) {
            values_[0].value().check(v.value());
            if (v.precision() != values_[0].precision()) throw std::invalid_argument("orientation values differ in precision");
        }
    }

    static Orientation from_residues(std::uint64_t p, int precision, const std::vector<BigInt>& residues) {
        std::vector<UnitOneScalar> v;
        for (const auto& r : residues) v.emplace_back(p, precision, r);
        return Orientation(std::move(v));
    }
    static Orientation trivial(std::uint64_t p, int precision, int d) {
        return from_residues(p, precision, std::vector<BigInt>(static_cast<std::size_t>(d), BigInt(1)));
    }

    std::uint64_t prime() const { return values_[0].prime(); }
    int precision() const { return values_[0].precision(); }
    int d() const { return static_cast<int>(values_.size()); }
    const UnitOneScalar& operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    const std::vector<UnitOneScalar>& values() const { return values_; }

    std::vector<BigInt> residues() const {
        std::vector<BigInt> out;
        for (const auto& v : values_) out.push_back(v.value().residue());
        return out;
    }

    Orientation truncate(int precision) const {
        std::vector<UnitOneScalar> v;
        for (const auto& x : values_) v.push_back(x.truncate(precision));
        return Orientation(std::move(v));
    }

    bool operator==(const Orientation& o) const { return values_ == o.values_; }

private:
    std::vector<UnitOneScalar> values_;
};

/// Prescribed values c(x_i).
class CocycleAssignment {
public:
    explicit CocycleAssignment(std::vector<PadicScalar> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("assignment needs at least one generator");
        for (const auto& v : values_) values_.front().check(v);
    }
    static CocycleAssignment basis(std::uint64_t p, int precision, int d, int i) {
        std::vector<PadicScalar> v(static_cast<std::size_t>(d), PadicScalar::zero(p, precision));
        v.at(static_cast<std::size_t>(i)) = PadicScalar::one(p, precision);
        return CocycleAssignment(std::move(v));
    }
    static CocycleAssignment from_residues(std::uint64_t p, int precision, const std::vector<BigInt>& residues) {
        std::vector<PadicScalar> v;
        for (const auto& r : residues) v.emplace_back(p, precision, r);
        return CocycleAssignment(std::move(v));
    }

    int d() const { return static_cast<int>(values_.size()); }
    const PadicScalar& operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    const std::vector<PadicScalar>& values() const { return values_; }

private:
    std::vector<PadicScalar> values_;
};

class ThetaNotWellDefined : public std::runtime_error {
public:
    ThetaNotWellDefined(std::size_t relator, const PadicScalar& value)
        : std::runtime_error("theta is not well defined on G: theta(r" + std::to_string(relator + 1) + ") = " + value.to_string() + ", not 1"),
          relator_(relator), value_(value) {}
    std::size_t relator() const { return relator_; }
    const PadicScalar& value() const { return value_; }

private:
    std::size_t relator_;
    PadicScalar value_;
};

namespace detail {

inline void check_generator(int g, int d) {
    if (g >= d) throw std::invalid_argument("word uses generator " + std::to_string(g + 1) + " beyond " + std::to_string(d));
}

inline UnitOneScalar letter_power(const UnitOneScalar& t, const Exponent& e) {
    if (auto* n = std::get_if<BigInt>(&e)) return pow(t, *n);
    return pow(t, std::get<PadicScalar>(e));
}

inline PadicScalar letter_qint(const UnitOneScalar& t, const Exponent& e) {
    if (auto* n = std::get_if<BigInt>(&e)) return qint(t, *n);
    return qint(t, std::get<PadicScalar>(e));
}

}  // namespace detail

/// Multiplicative extension of theta to words.
inline UnitOneScalar theta_of_word(const Orientation& theta, const Word& w) {
    UnitOneScalar acc = UnitOneScalar::one(theta.prime(), theta.precision());
    for (const auto& l : w.letters()) {
        detail::check_generator(l.generator, theta.d());
        acc = acc * detail::letter_power(theta[l.generator], l.exponent);
    }
    return acc;
}

/// c(w) for the unique cocycle on the free group with c(x_i) = alpha_i, folding left to right:
/// c(x_i^l w') = [l]_{theta_i} alpha_i + theta_i^l c(w'). The result carries the smallest
/// precision among theta, alpha and the truncated exponents of w.
inline PadicScalar evaluate(const Orientation& theta, const CocycleAssignment& alpha, const Word& w) {
    if (alpha.d() != theta.d()) throw std::invalid_argument("theta and alpha differ in length");
    theta[0].value().check(alpha[0]);
    const int n = std::min(theta.precision(), alpha[0].precision());
    PadicScalar acc = PadicScalar::zero(theta.prime(), n);
    PadicScalar mult = PadicScalar::one(theta.prime(), n);
    for (const auto& l : w.letters()) {
        detail::check_generator(l.generator, theta.d());
        const auto& t = theta[l.generator];
        acc += mult * detail::letter_qint(t, l.exponent) * alpha[l.generator];
        mult *= detail::letter_power(t, l.exponent).value();
    }
    return acc;
}

/// Rows are relators, columns generators; entry (j, i) is the coefficient of alpha_i in c(r_j).
struct FoxMatrix {
    std::uint64_t p = 2;
    int precision = 1;
    std::vector<std::vector<PadicScalar>> entries;

    std::size_t rows() const { return entries.size(); }
    bool is_zero() const {
        for (const auto& row : entries)
            for (const auto& e : row)
                if (!e.is_zero()) return false;
        return true;
    }
};

/// theta(r_j) for every relator.
inline std::vector<UnitOneScalar> relator_thetas(const Presentation& P, const Orientation& theta) {
    std::vector<UnitOneScalar> out;
    for (const auto& r : P.relators) out.push_back(theta_of_word(theta, r));
    return out;
}

/// Fox matrix by probing with basis assignments, without checking that theta factors through G.
inline FoxMatrix fox_matrix_unchecked(const Presentation& P, const Orientation& theta) {
    if (P.p != theta.prime()) throw PrimeMismatch(P.p, theta.prime());
    if (theta.d() != P.d()) throw std::invalid_argument("orientation has " + std::to_string(theta.d()) + " values for " + std::to_string(P.d()) + " generators");
    FoxMatrix M;
    M.p = P.p;
    M.precision = theta.precision();
    std::vector<CocycleAssignment> probes;
    for (int i = 0; i < P.d(); ++i) probes.push_back(CocycleAssignment::basis(P.p, theta.precision(), P.d(), i));
    for (const auto& r : P.relators) {
        std::vector<PadicScalar> row;
        for (const auto& e : probes) row.push_back(evaluate(theta, e, r));
        for (const auto& v : row) M.precision = std::min(M.precision, v.precision());
        M.entries.push_back(std::move(row));
    }
    return M;
}

/// Fox matrix of P at theta. Throws ThetaNotWellDefined unless theta(r_j) = 1 mod p^N for all j.
inline FoxMatrix fox_matrix(const Presentation& P, const Orientation& theta) {
    const auto values = relator_thetas(P, theta);
    for (std::size_t j = 0; j < values.size(); ++j)
        if (!values[j].is_one()) throw ThetaNotWellDefined(j, values[j].value());
    return fox_matrix_unchecked(P, theta);
}

class NotInKernel : public std::invalid_argument {
public:
    explicit NotInKernel(const PadicScalar& value)
        : std::invalid_argument("theta(h) = " + value.to_string() + " is not 1") {}
};

/// The generator h^(-theta(g)) g h g^-1 of K. The exponent -theta(g) is represented by the
/// integer -t, t the residue of theta(g) taken in (-p^N/2, p^N/2]; at precision N every
/// cocycle sees only the class of the exponent.
inline Word k_generator(const Word& g, const Word& h, const Orientation& theta) {
    const auto th = theta_of_word(theta, h);
    if (!th.is_one()) throw NotInKernel(th.value());
    const auto tg = theta_of_word(theta, g).value();
    BigInt t = tg.residue();
    if (2 * t > tg.modulus()) t -= tg.modulus();
    return power(h, BigInt(-t)) * g * h * g.inverse();
}

}  // namespace kummerian
