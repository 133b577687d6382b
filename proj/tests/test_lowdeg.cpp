#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hlab/lowdeg.hpp"
#include "test_util.hpp"

using namespace hlab;

namespace {

WishartParams rademacher_params(int n, double gamma, double beta) {
    return {n, gamma, beta, SpikePrior{BaseDist::Rademacher, std::nullopt}};
}

long double binomial(int n, int k) {
    long double b = 1.0L;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

// coefficient of x^d in (1-4x)^{-N/2} via the explicit double sum over
// nonnegative (d_1, ..., d_N) with sum d: prod_i C(2 d_i, d_i)
long double double_sum_coeff(int N, int d, std::vector<int>& parts, int pos = 0, int left = -1) {
    if (left < 0) left = d;
    if (pos == N) return left == 0 ? [&] {
        long double p = 1.0L;
        for (int di : parts) p *= binomial(2 * di, di);
        return p;
    }() : 0.0L;
    long double acc = 0.0L;
    for (int di = 0; di <= left; ++di) {
        parts[pos] = di;
        acc += double_sum_coeff(N, d, parts, pos + 1, left - di);
    }
    return acc;
}

// every multi-index over n coordinates with even total order <= max_order
std::vector<MultiIndex> even_indices(int n, int max_order) {
    std::vector<MultiIndex> out;
    std::vector<int> entry(n, 0);
    std::function<void(int, int)> go = [&](int coord, int used) {
        if (coord == n) {
            if (used % 2 == 0) out.push_back(MultiIndex{entry});
            return;
        }
        for (int a = 0; a <= max_order - used; ++a) {
            entry[coord] = a;
            go(coord + 1, used + a);
        }
        entry[coord] = 0;
    };
    go(0, 0);
    return out;
}

// brute-force component sum: one even block per sample, combined order <= D
double component_sum(const WishartParams& params, int D) {
    std::vector<MultiIndex> idx = even_indices(params.n, D);
    double total = 0.0;
    AlphaBlocks current;
    std::function<void(int, int)> pick = [&](int block, int left) {
        if (block == params.sample_count()) {
            total += lr_component_sq(current, params);
            return;
        }
        for (const MultiIndex& m : idx) {
            if (m.order() > left) continue;
            current.push_back(m);
            pick(block + 1, left - m.order());
            current.pop_back();
        }
    };
    pick(0, D);
    return total;
}

}  // namespace

TEST_CASE("phi closed form") {
    CHECK(phi(0.0, 7) == 1.0);
    CHECK(phi(0.1, 2) == doctest::Approx(1.0 / 0.6).epsilon(1e-14));
    CHECK_THROWS_AS(phi(0.25, 2), std::domain_error);
    CHECK_THROWS_AS(phi(1.0, 2), std::domain_error);

    // N=1 generating function of central binomial coefficients at x = 0.1
    long double partial = 0.0L, xpow = 1.0L;
    for (int k = 0; k <= 40; ++k) {
        partial += binomial(2 * k, k) * xpow;
        xpow *= 0.1L;
    }
    CHECK(phi(0.1, 1) == doctest::Approx(static_cast<double>(partial)).epsilon(1e-10));
}

TEST_CASE("phi_truncated has the advertised Taylor coefficients") {
    CHECK(phi_truncated(0.7L, 5, 0) == 1.0L);
    // N=1, k=2: 1 + 2x + 6x^2
    for (double x : {0.0, 0.05, -0.3, 2.0})
        CHECK(static_cast<double>(phi_truncated(x, 1, 2)) ==
              doctest::Approx(1.0 + 2.0 * x + 6.0 * x * x).epsilon(1e-14));
    // N=2, k=2: geometric series of (1-4x)^{-1}, so 1 + 4x + 16x^2; the
    // double-sum oracle below confirms c_2 = C(4,2) + C(2,1)^2 + C(4,2) = 16
    CHECK(static_cast<double>(phi_truncated(0.05L, 2, 2)) ==
          doctest::Approx(1.0 + 0.2 + 0.04).epsilon(1e-14));

    CHECK_THROWS_AS(phi_truncated(0.1L, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(phi_truncated(0.1L, 2, -1), std::invalid_argument);
}

TEST_CASE("truncated coefficients match the combinatorial double sum") {
    for (int N = 1; N <= 3; ++N)
        for (int d = 0; d <= 4; ++d) {
            std::vector<int> parts(N, 0);
            long double oracle = double_sum_coeff(N, d, parts);
            // extract coefficient d as the difference of consecutive truncations at x=1
            long double coeff = phi_truncated(1.0L, N, d) - (d > 0 ? phi_truncated(1.0L, N, d - 1) : 0.0L);
            CHECK(static_cast<double>(coeff) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
        }
}

TEST_CASE("truncation is dominated by the full function on [0, 0.24]") {
    for (int N : {1, 2, 5, 20})
        for (int k : {0, 1, 3, 10, 50})
            for (double x = 0.0; x <= 0.24 + 1e-12; x += 0.02)
                CHECK(static_cast<double>(phi_truncated(x, N, k)) <= phi(x, N) * (1.0 + 1e-13));
}

TEST_CASE("component formula small cases") {
    WishartParams params = rademacher_params(2, 2.0, 0.5);
    REQUIRE(params.sample_count() == 1);

    // odd block vanishes
    CHECK(lr_component_sq({MultiIndex{{1, 0}}}, params) == 0.0);
    CHECK(lr_component_sq({MultiIndex{{2, 1}}}, params) == 0.0);
    // all-zero index is the unit constant component
    CHECK(lr_component_sq({MultiIndex{{0, 0}}}, params) == 1.0);
    WishartParams zero_beta = rademacher_params(2, 2.0, 0.0);
    CHECK(lr_component_sq({MultiIndex{{0, 0}}}, zero_beta) == 1.0);
    // alpha = (2, 0): beta^2 * (1!!^2 / 2!) * (E[x_1^2])^2 = 0.25 * 0.5 * 0.25
    CHECK(lr_component_sq({MultiIndex{{2, 0}}}, params) == doctest::Approx(0.03125).epsilon(1e-14));

    CHECK_THROWS_AS(lr_component_sq({MultiIndex{{2, 0}}, MultiIndex{{0, 0}}}, params),
                    std::invalid_argument);
}

TEST_CASE("component Monte Carlo oracle agrees with the closed form") {
    WishartParams params = rademacher_params(3, 1.5, 0.4);
    REQUIRE(params.sample_count() == 2);

    // beta = 0: <1, H-hat_alpha>^2 is the Kronecker delta at alpha = 0
    WishartParams flat = rademacher_params(3, 1.5, 0.0);
    McEstimate unit = lr_component_oracle({MultiIndex{{0, 0, 0}}, MultiIndex{{0, 0, 0}}}, flat,
                                          20000, Seed{1});
    CHECK(std::abs(unit.value - 1.0) <= 3.0 * unit.stderr_ + 1e-9);

    McEstimate odd = lr_component_oracle({MultiIndex{{1, 0, 0}}, MultiIndex{{0, 0, 0}}}, params,
                                         20000, Seed{2});
    CHECK(std::abs(odd.value) <= 3.0 * odd.stderr_ + 1e-4);

    AlphaBlocks blocks{MultiIndex{{2, 0, 0}}, MultiIndex{{0, 2, 0}}};
    double closed = lr_component_sq(blocks, params);
    McEstimate est = lr_component_oracle(blocks, params, 200000, Seed{3});
    CHECK(std::abs(est.value - closed) <= 3.0 * est.stderr_ + 1e-6);
}

TEST_CASE("norm evaluation trivial cases") {
    LowDegreeQuery q;
    q.params = rademacher_params(6, 2.0, 0.0);
    q.degree_bound = 8;
    CHECK(lr_norm_lowdeg(q).value == doctest::Approx(1.0).epsilon(1e-14));

    q.params = rademacher_params(6, 2.0, 0.7);
    for (int d : {0, 1}) {
        q.degree_bound = d;
        CHECK(lr_norm_lowdeg(q).value == 1.0);
    }

    q.params.prior.base = BaseDist::Gaussian;
    q.degree_bound = 4;
    CHECK_THROWS_AS(lr_norm_lowdeg(q), std::invalid_argument);
}

TEST_CASE("norm equals the brute-force component sum at small size") {
    for (double beta : {0.3, 0.5, -0.6}) {
        for (int n : {2, 3, 4}) {
            WishartParams params = rademacher_params(n, 2.0, beta);
            REQUIRE(params.sample_count() <= 2);
            for (int D : {2, 4}) {
                LowDegreeQuery q;
                q.params = params;
                q.degree_bound = D;
                double via_pmf = lr_norm_lowdeg(q).value;
                double via_components = component_sum(params, D);
                CHECK(via_pmf == doctest::Approx(via_components).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("norm is nondecreasing in the degree bound") {
    LowDegreeQuery q;
    q.params = rademacher_params(8, 2.0, 0.6);
    double prev = 0.0;
    for (int D = 0; D <= 20; D += 2) {
        q.degree_bound = D;
        double v = lr_norm_lowdeg(q).value;
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("degree limit recovers the exact second moment") {
    WishartParams params = rademacher_params(6, 2.0, 0.5);
    LowDegreeQuery q;
    q.params = params;
    q.degree_bound = 200;
    CHECK(std::abs(lr_norm_lowdeg(q).value - second_moment_exact(params)) <= 1e-8);

    // and the projection never exceeds it
    for (int D : {2, 6, 20, 60}) {
        q.degree_bound = D;
        CHECK(lr_norm_lowdeg(q).value <= second_moment_exact(params) + 1e-12);
    }
}

TEST_CASE("Monte Carlo norm estimate brackets the exact value") {
    WishartParams params = rademacher_params(50, 2.0, 0.5);
    LowDegreeQuery exact_q;
    exact_q.params = params;
    exact_q.degree_bound = 6;
    double exact = lr_norm_lowdeg(exact_q).value;

    LowDegreeQuery mc_q = exact_q;
    mc_q.method = LowDegMethod::MonteCarlo;
    mc_q.mc_trials = 40000;
    mc_q.seed = Seed{4};
    LowDegResult r = lr_norm_lowdeg(mc_q);
    CHECK(r.stderr_ > 0.0);
    CHECK(std::abs(r.value - exact) <= 4.0 * r.stderr_ + 1e-9);

    mc_q.mc_trials = 10;
    CHECK_THROWS_AS(lr_norm_lowdeg(mc_q), std::invalid_argument);
}

TEST_CASE("deviation split partitions the norm") {
    LowDegreeQuery q;
    q.params = rademacher_params(10, 2.0, 0.5);
    q.degree_bound = 6;
    double norm = lr_norm_lowdeg(q).value;

    auto [r1_all, r2_none] = deviations_split(q, 1.5);
    CHECK(r2_none == 0.0);
    CHECK(r1_all == doctest::Approx(norm).epsilon(1e-12));

    auto [r1_zero, r2_rest] = deviations_split(q, 0.0);
    // only the r = 0 atom survives on the small side, contributing its mass
    double p0 = 0.0;
    for (const auto& atom : overlap_pmf_rademacher(10))
        if (atom.value == 0.0) p0 += atom.probability;
    CHECK(r1_zero == doctest::Approx(p0).epsilon(1e-12));
    CHECK(r1_zero + r2_rest == doctest::Approx(norm).epsilon(1e-12));

    auto [r1, r2] = deviations_split(q, 0.2);
    CHECK(r1 + r2 == doctest::Approx(norm).epsilon(1e-12));
    CHECK(r1 >= 0.0);
    CHECK(r2 >= 0.0);
}

TEST_CASE("large-overlap contribution decays with dimension") {
    double prev = 1e300;
    for (int n : {50, 100, 200, 400}) {
        LowDegreeQuery q;
        q.params = rademacher_params(n, 2.0, 0.5);
        q.degree_bound = 6;
        double r2 = deviations_split(q, 0.2).second;
        CHECK(r2 < prev);
        prev = r2;
    }
}

TEST_CASE("growth lower bound formula and range checks") {
    CHECK(growth_lower_bound(100, 50, 0.9, 1) ==
          doctest::Approx(0.5 * 0.81 * 99.0 * 49.0 / 10000.0).epsilon(1e-12));
    CHECK_THROWS_AS(growth_lower_bound(100, 50, 0.9, 0), std::domain_error);
    CHECK_THROWS_AS(growth_lower_bound(100, 50, 0.9, 51), std::domain_error);

    // diverges along d = log n above the BBP threshold
    CHECK(growth_lower_bound(10000, 20000, 0.9, 20) > 1e3);
}

TEST_CASE("exact norm respects the growth lower bound above threshold") {
    for (int n : {50, 200}) {
        WishartParams params = rademacher_params(n, 0.5, 0.9);
        for (int d : {1, 2, 3}) {
            LowDegreeQuery q;
            q.params = params;
            q.degree_bound = 2 * d;
            CHECK(lr_norm_lowdeg(q).value >=
                  growth_lower_bound(n, params.sample_count(), 0.9, d));
        }
    }
}

TEST_CASE("threshold scan emits one row per grid cell with unit floor") {
    SpikePrior prior{BaseDist::Rademacher, std::nullopt};
    auto rows = threshold_scan(0.5, {0.5, 0.9}, 6, {50, 100}, prior);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.method == "exact-rademacher");
        CHECK(row.D == 6);
        CHECK(row.gamma == 0.5);
        CHECK(row.lr_norm_sq >= 1.0);
        CHECK(row.N == static_cast<int>(std::ceil(row.n / 0.5 - 1e-9)));
    }
}

TEST_CASE("norm depends on beta only through its square") {
    for (int n : {20, 100}) {
        LowDegreeQuery plus;
        plus.params = rademacher_params(n, 0.5, 0.9);
        plus.degree_bound = 6;
        LowDegreeQuery minus = plus;
        minus.params.beta = -0.9;
        CHECK(lr_norm_lowdeg(plus).value == lr_norm_lowdeg(minus).value);
    }
}
