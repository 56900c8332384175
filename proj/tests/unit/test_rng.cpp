#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "catspec/rng.hpp"

using namespace catspec;

TEST(Rng, SameSeedSameSequence) {
    RngStream a(42, 3), b(42, 3);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
    RngStream a(42, 3), b(42, 4), c(43, 3);
    int same_b = 0, same_c = 0;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        same_b += x == b.next_u64();
        same_c += x == c.next_u64();
    }
    EXPECT_EQ(same_b, 0);
    EXPECT_EQ(same_c, 0);
}

TEST(Rng, SubstreamsAreReproducibleAndDistinct) {
    const RngStream base(7, 1);
    RngStream s1 = base.substream(5), s2 = base.substream(5), s3 = base.substream(6);
    EXPECT_EQ(s1.next_u64(), s2.next_u64());
    EXPECT_NE(s1.next_u64(), s3.next_u64());
    RngStream consumed(7, 1);
    consumed.next_u64();
    RngStream s4 = consumed.substream(5);
    RngStream s5 = base.substream(5);
    EXPECT_EQ(s4.next_u64(), s5.next_u64());
}

TEST(Rng, UniformMoments) {
    RngStream r(1, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 2e-3);
}

TEST(Rng, NormalMoments) {
    RngStream r(2, 0);
    const int n = 200000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(Rng, ExponentialMean) {
    RngStream r(3, 0);
    const int n = 100000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.exponential(2.5);
    EXPECT_NEAR(s / n, 2.5, 5.0 * 2.5 / std::sqrt(n));
}

TEST(Rng, PoissonChiSquare) {
    for (double mean : {0.7, 12.0, 117.0}) {
        RngStream r(4, static_cast<std::uint64_t>(mean * 10));
        const int n = 100000;
        const int kmax = static_cast<int>(mean + 8 * std::sqrt(mean) + 10);
        std::vector<double> counts(kmax + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            const auto k = r.poisson(mean);
            counts[std::min<std::uint64_t>(k, kmax)] += 1.0;
        }
        double chi2 = 0.0;
        int bins = 0;
        double tail_obs = 0.0, tail_exp = 0.0;
        for (int k = 0; k <= kmax; ++k) {
            const double p = std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
            const double expected = n * p;
            if (expected < 5.0) {
                tail_obs += counts[k];
                tail_exp += expected;
                continue;
            }
            chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
            ++bins;
        }
        if (tail_exp > 0.0) {
            chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / std::max(tail_exp, 1.0);
            ++bins;
        }
        // generous bound: mean + 5 sd of a chi-square with `bins` degrees of freedom
        EXPECT_LT(chi2, bins + 5.0 * std::sqrt(2.0 * bins)) << "mean " << mean;
    }
}

TEST(Rng, BernoulliRate) {
    RngStream r(5, 0);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3);
    EXPECT_NEAR(hits / double(n), 0.3, 5.0 * std::sqrt(0.21 / n));
}

TEST(Rng, Mix64IsDeterministicAndSpreads) {
    EXPECT_EQ(mix64(0), mix64(0));
    EXPECT_NE(mix64(1), mix64(2));
}
