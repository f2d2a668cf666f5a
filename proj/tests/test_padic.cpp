#include <gtest/gtest.h>

#include "kummerian/padic.hpp"
#include "kummerian/words.hpp"
#include "oracles.hpp"

using namespace kummerian;

namespace {

UnitOneScalar unit(std::uint64_t p, int n, long long v) { return UnitOneScalar(p, n, BigInt(v)); }

}  // namespace

TEST(Padic, ResiduesAreReduced) {
    PadicScalar x(3, 2, BigInt(-1));
    EXPECT_EQ(x.residue(), 8);
    EXPECT_EQ(x.modulus(), 9);
    EXPECT_EQ((x + PadicScalar(3, 2, BigInt(1))).residue(), 0);
    EXPECT_EQ(x.to_string(), "8 mod 3^2");
}

TEST(Padic, MixedPrecisionTakesMinimum) {
    PadicScalar a(3, 4, BigInt(10)), b(3, 2, BigInt(5));
    const auto c = a * b;
    EXPECT_EQ(c.precision(), 2);
    EXPECT_EQ(c.residue(), 50 % 9);
}

TEST(Padic, PrimeMismatchThrows) {
    EXPECT_THROW(PadicScalar(3, 2, BigInt(1)) + PadicScalar(5, 2, BigInt(1)), PrimeMismatch);
    EXPECT_THROW(PadicScalar(4, 2, BigInt(1)), std::invalid_argument);
}

TEST(Padic, InverseOfUnitAndNonUnit) {
    PadicScalar x(3, 5, BigInt(-8));
    EXPECT_EQ((x * x.inverse()).residue(), 1);
    EXPECT_EQ(x.inverse().residue(), oracle::inverse(BigInt(-8), BigInt(243)));
    EXPECT_THROW(PadicScalar(3, 5, BigInt(9)).inverse(), std::domain_error);
}

TEST(Padic, Valuation) {
    EXPECT_EQ(PadicScalar(3, 4, BigInt(18)).valuation(), 2);
    EXPECT_EQ(PadicScalar(3, 4, BigInt(0)).valuation(), 4);
    EXPECT_EQ(PadicScalar(2, 5, BigInt(12)).valuation(), 2);
}

TEST(Padic, TruncateAndLift) {
    PadicScalar x(3, 4, BigInt(50));
    EXPECT_EQ(x.truncate(2).residue(), 5);
    EXPECT_THROW(x.truncate(5), std::invalid_argument);
    EXPECT_EQ(x.truncate(2).lift(4).residue(), 5);
}

TEST(UnitOne, AdmissibilityPolicy) {
    EXPECT_NO_THROW(unit(3, 2, 4));
    EXPECT_THROW(unit(3, 2, 5), std::invalid_argument);
    EXPECT_NO_THROW(unit(2, 3, 5));
    EXPECT_THROW(unit(2, 3, 3), std::invalid_argument);
}

TEST(Pow, Examples) {
    EXPECT_EQ(pow(unit(3, 3, 4), BigInt(3)).value().residue(), oracle::modpow(4, 3, 27));
    EXPECT_EQ(pow(unit(3, 3, 4), BigInt(3)).value().residue(), 10);
    EXPECT_EQ(pow(unit(3, 3, 4), BigInt(9)).value().residue(), 1);
    for (long long l : {-7LL, 0LL, 5LL, 123456789LL}) EXPECT_TRUE(pow(unit(5, 3, 1), BigInt(l)).is_one());
}

TEST(Pow, TruncatedExponentNeedsPrecision) {
    const auto t = unit(3, 3, 4);
    EXPECT_EQ(pow(t, PadicScalar(3, 3, BigInt(3))).value().residue(), 10);
    EXPECT_EQ(pow(t, PadicScalar(3, 2, BigInt(3))).precision(), 2);
    EXPECT_THROW(pow(t, PadicScalar(5, 3, BigInt(3))), PrimeMismatch);
}

TEST(Qint, Examples) {
    EXPECT_EQ(qint(unit(2, 3, 5), BigInt(4)).residue(), 4);
    EXPECT_EQ(qint(unit(2, 3, 5), BigInt(4)).residue(), oracle::geometric_sum(5, 4, 8));
    EXPECT_EQ(qint(unit(3, 3, 4), BigInt(3)).residue(), 21);
    for (long long l : {-11LL, -1LL, 0LL, 1LL, 7LL, 1000LL}) EXPECT_EQ(qint(unit(3, 4, 1), BigInt(l)).residue(), oracle::mod(BigInt(l), BigInt(81)));
}

TEST(Qint, TruncatedLambda) {
    const auto t = unit(3, 4, 7);
    EXPECT_EQ(qint(t, PadicScalar(3, 4, BigInt(5))).residue(), oracle::geometric_sum(7, 5, 81));
    // the class of lambda mod p^N determines [lambda]
    EXPECT_EQ(qint(t, BigInt(5 + 81)).residue(), qint(t, BigInt(5)).residue());
}

TEST(PadicProperties, GeometricSumIdentity) {
    RandomSource rng(0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 7}[static_cast<std::size_t>(rng.uniform(0, 3))];
        const int N = static_cast<int>(rng.uniform(1, 6));
        const BigInt m = ipow(p, static_cast<unsigned>(N));
        const BigInt step = (p == 2 && N >= 2) ? BigInt(4) : BigInt(p);
        const UnitOneScalar t(p, N, oracle::mod(1 + step * rng.uniform(0, 1000), m));
        const BigInt a = rng.uniform(0, 300), b = rng.uniform(0, 300);
        EXPECT_EQ(qint(t, a + b), qint(t, a) + pow(t, a).value() * qint(t, b));
        EXPECT_EQ(qint(t, -b), -(pow(t, -b).value() * qint(t, b)));
    }
}

TEST(PadicProperties, ValuationExactness) {
    for (std::uint64_t p : {3, 5, 7}) {
        const int N = 6;
        for (long long t : {1 + static_cast<long long>(p), 1 + 2 * static_cast<long long>(p), 1 + static_cast<long long>(p * p)}) {
            const UnitOneScalar th(p, N, BigInt(t));
            const int v = valuation(BigInt(t - 1), p, N);
            for (int f = 0; f < N - v; ++f) EXPECT_EQ(qint(th, ipow(p, static_cast<unsigned>(f))).valuation(), f) << "p=" << p << " t=" << t << " f=" << f;
        }
    }
}

TEST(PadicProperties, AgreesWithBigIntegerOracle) {
    RandomSource rng(0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 7, 11}[static_cast<std::size_t>(rng.uniform(0, 4))];
        const int N = static_cast<int>(rng.uniform(1, 8));
        const BigInt m = ipow(p, static_cast<unsigned>(N));
        const BigInt step = (p == 2 && N >= 2) ? BigInt(4) : BigInt(p);
        const BigInt tv = oracle::mod(1 + step * rng.uniform(0, 100000), m);
        const UnitOneScalar t(p, N, tv);
        const BigInt lambda = rng.uniform(-2000, 2000);
        ASSERT_EQ(pow(t, lambda).value().residue(), oracle::modpow(tv, lambda, m)) << p << " " << N << " " << tv << " " << lambda;
        ASSERT_EQ(qint(t, lambda).residue(), oracle::geometric_sum(tv, lambda, m)) << p << " " << N << " " << tv << " " << lambda;
    }
}
