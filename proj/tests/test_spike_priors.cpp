#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "hlab/spike_priors.hpp"
#include "test_util.hpp"

using namespace hlab;
using namespace hlab::testutil;

TEST_CASE("base distribution names round-trip") {
    for (BaseDist d : {BaseDist::Rademacher, BaseDist::Gaussian, BaseDist::UniformSqrt3})
        CHECK(base_dist_from_string(to_string(d)) == d);
    CHECK_THROWS_AS(base_dist_from_string("cauchy"), std::invalid_argument);
}

TEST_CASE("base distributions have mean 0 and variance 1") {
    for (BaseDist d : {BaseDist::Rademacher, BaseDist::Gaussian, BaseDist::UniformSqrt3}) {
        SpikePrior prior{d, std::nullopt};
        Rng rng(Seed{1});
        const int n = 100, draws = 1000;  // 1e5 entries total
        double sum = 0.0, sumsq = 0.0;
        const double scale = std::sqrt(static_cast<double>(n));
        for (int t = 0; t < draws; ++t) {
            Vector x = sample_spike(prior, n, rng);
            for (int i = 0; i < n; ++i) {
                double v = scale * x(i);  // back to the unnormalized base draw
                sum += v;
                sumsq += v * v;
            }
        }
        const double m = n * draws;
        CHECK(std::abs(sum / m) <= 3.0 / std::sqrt(m));
        // kurtosis of all three bases is <= 3, so SE of the sample variance <= sqrt(2/m)
        CHECK(std::abs(sumsq / m - 1.0) <= 3.0 * std::sqrt(2.0 / m));
    }
}

TEST_CASE("Rademacher spikes sit on the hypercube with unit norm") {
    Vector x = sample_spike(SpikePrior{BaseDist::Rademacher, std::nullopt}, 4, Seed{2});
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x(i)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(x.squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Gaussian spike norm concentrates at 1") {
    SpikePrior prior{BaseDist::Gaussian, std::nullopt};
    Rng rng(Seed{3});
    const int n = 100, m = 10000;
    double sum = 0.0;
    for (int t = 0; t < m; ++t) sum += sample_spike(prior, n, rng).squaredNorm();
    // Var(||x||^2) = 2/n
    CHECK(std::abs(sum / m - 1.0) <= 3.0 * std::sqrt(2.0 / n / m));
}

TEST_CASE("truncation enforces the norm bound") {
    SpikePrior prior{BaseDist::Gaussian, -0.99};
    Rng rng(Seed{4});
    for (int t = 0; t < 2000; ++t) {
        Vector x = sample_spike(prior, 100, rng);
        double ns = x.squaredNorm();
        CHECK(ns <= 2.0);
        if (ns > 0.0) CHECK(-0.99 * ns > -1.0);
    }
}

TEST_CASE("truncation rarely fires at mild parameters") {
    // the altered fraction is the chi-square tail P{||x||^2 > 1/0.9}, which
    // needs n in the thousands before it drops under 1%
    SpikePrior prior{BaseDist::Gaussian, -0.9};
    Rng rng(Seed{5});
    const int m = 2000;
    int altered = 0;
    for (int t = 0; t < m; ++t)
        if (sample_spike(prior, 4000, rng).squaredNorm() == 0.0) ++altered;
    CHECK(static_cast<double>(altered) / m <= 0.01);
}

TEST_CASE("norm concentration holds for every configured prior") {
    for (BaseDist d : {BaseDist::Rademacher, BaseDist::Gaussian, BaseDist::UniformSqrt3}) {
        SpikePrior prior{d, std::nullopt};
        Rng rng(Seed{6});
        const int m = 2000;
        int far = 0;
        for (int t = 0; t < m; ++t)
            if (std::abs(sample_spike(prior, 400, rng).squaredNorm() - 1.0) > 0.2) ++far;
        CHECK(static_cast<double>(far) / m <= 0.05);
    }
}

TEST_CASE("is_beta_good captures the almost-sure bound") {
    SpikePrior rad{BaseDist::Rademacher, std::nullopt};
    SpikePrior gauss{BaseDist::Gaussian, std::nullopt};
    SpikePrior gauss_t{BaseDist::Gaussian, -0.9};
    SpikePrior unif{BaseDist::UniformSqrt3, std::nullopt};

    CHECK(is_beta_good(rad, -0.99));
    CHECK_FALSE(is_beta_good(gauss, -0.9));
    CHECK(is_beta_good(gauss_t, -0.9));
    CHECK(is_beta_good(gauss_t, -0.5));
    CHECK_FALSE(is_beta_good(SpikePrior{BaseDist::Gaussian, -0.3}, -0.9));
    CHECK(is_beta_good(gauss, 0.0));
    CHECK(is_beta_good(gauss, 2.0));
    CHECK(is_beta_good(unif, -0.2));        // ||x||^2 <= 3 always
    CHECK_FALSE(is_beta_good(unif, -0.5));
    CHECK_THROWS_AS(is_beta_good(rad, -1.0), std::domain_error);
}

TEST_CASE("overlap PMF small cases match enumeration") {
    auto p1 = overlap_pmf_rademacher(1);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0].value == 1.0);
    CHECK(p1[0].probability == 0.5);
    CHECK(p1[1].value == -1.0);
    CHECK(p1[1].probability == 0.5);

    // n = 2 oracle: enumerate all 16 sign pairs directly
    std::map<int, int> counts;  // overlap * 2 -> count
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            int s1[2] = {(a & 1) ? 1 : -1, (a & 2) ? 1 : -1};
            int s2[2] = {(b & 1) ? 1 : -1, (b & 2) ? 1 : -1};
            counts[s1[0] * s2[0] + s1[1] * s2[1]] += 1;
        }
    auto p2 = overlap_pmf_rademacher(2);
    REQUIRE(p2.size() == 3);
    for (const auto& atom : p2) {
        int key = static_cast<int>(std::lround(atom.value * 2.0));
        CHECK(atom.probability == doctest::Approx(counts[key] / 16.0).epsilon(1e-15));
    }
}

TEST_CASE("overlap PMF is exactly normalized with variance 1/n") {
    for (int n : {1, 2, 5, 17, 64}) {
        auto pmf = overlap_pmf_rademacher(n);
        Rational total = 0;
        double var = 0.0;
        for (const auto& atom : pmf) {
            total += atom.probability_exact;
            var += atom.value * atom.value * atom.probability;
        }
        CHECK(total == 1);
        CHECK(var == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("overlap PMF matches a Monte Carlo histogram at n=10") {
    const int n = 10;
    auto pmf = overlap_pmf_rademacher(n);
    SpikePrior prior{BaseDist::Rademacher, std::nullopt};
    Rng rng(Seed{7});
    const long m = 100000;
    std::vector<long> counts(n + 1, 0);
    for (long t = 0; t < m; ++t) {
        Vector x1 = sample_spike(prior, n, rng);
        Vector x2 = sample_spike(prior, n, rng);
        double r = x1.dot(x2);
        int k = static_cast<int>(std::lround((n - r * n) / 2.0));
        counts[k] += 1;
    }
    double chi2 = 0.0;
    for (int k = 0; k <= n; ++k) {
        double expect = pmf[k].probability * m;
        chi2 += (counts[k] - expect) * (counts[k] - expect) / expect;
    }
    CHECK(chi2 <= chi2_critical_01(n));  // n+1 cells, n degrees of freedom
}

TEST_CASE("local Chernoff fit succeeds for subgaussian priors") {
    ChernoffFit fr = fit_local_chernoff(SpikePrior{BaseDist::Rademacher, std::nullopt}, 100,
                                        100000, Seed{8});
    REQUIRE(fr.fitted);
    CHECK(fr.eta <= 0.3);
    CHECK(fr.c == 2.0);
    CHECK(fr.delta > 0.0);
    // tail table starts at t=0 with survival 1, which the C=2 bound absorbs
    REQUIRE(!fr.tail.empty());
    CHECK(fr.tail.front().first == 0.0);
    CHECK(fr.tail.front().second == 1.0);

    ChernoffFit fg = fit_local_chernoff(SpikePrior{BaseDist::Gaussian, std::nullopt}, 100,
                                        50000, Seed{9});
    CHECK(fg.fitted);

    CHECK_THROWS_AS(fit_local_chernoff(SpikePrior{}, 100, 100, Seed{0}), std::invalid_argument);
}

TEST_CASE("fitted Chernoff bound actually dominates the tabulated tail") {
    ChernoffFit f = fit_local_chernoff(SpikePrior{BaseDist::Rademacher, std::nullopt}, 50,
                                       20000, Seed{10});
    REQUIRE(f.fitted);
    for (auto [t, surv] : f.tail) {
        if (t > f.delta) continue;
        double bound = f.c * std::exp(-0.5 * (1.0 - f.eta) * 50 * t * t);
        double se = std::sqrt(std::max(surv * (1.0 - surv), 1.0 / f.trials) / f.trials);
        CHECK(surv <= bound + 3.0 * se);
    }
}
