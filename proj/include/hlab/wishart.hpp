#pragma once

#include <optional>

#include "hlab/linalg.hpp"
#include "hlab/rng.hpp"
#include "hlab/spike_priors.hpp"

namespace hlab {

struct WishartParams {
    int n = 0;
    double gamma = 1.0;    // aspect ratio, > 0
    double beta = 0.0;     // spike strength, > -1
    SpikePrior prior;

    int sample_count() const;  // N = ceil(n / gamma)
    void validate() const;
};

struct SampleSet {
    Matrix samples;               // n x N, one sample per column
    bool planted = false;         // harness-only label
    std::optional<Vector> spike;  // present iff planted
};

// N i.i.d. N(0, I_n) columns.
SampleSet sample_null(const WishartParams& params, Seed seed);

// x ~ prior; if beta ||x||^2 >= -1, each y = g + tau <xhat, g> xhat with
// tau = sqrt(1 + beta ||x||^2) - 1, so Cov(y) = I + beta x x^T; otherwise the
// samples fall back to N(0, I_n).
SampleSet sample_planted(const WishartParams& params, Seed seed);

// Y = (1/N) sum_i y_i y_i^T
Matrix sample_covariance(const SampleSet& s);

// log of the null-vs-planted likelihood ratio
//   L = E_x[(1 + beta ||x||^2)^{-N/2} prod_i exp(beta <x,y_i>^2 / (2 (1 + beta ||x||^2)))].
// Rademacher prior: exact enumeration of all 2^n spikes (requires n <= 20).
// Other priors: inner Monte Carlo over mc_spikes draws of x.
// Throws std::invalid_argument if the prior is not beta-good.
double log_likelihood_ratio(const SampleSet& s, const WishartParams& params,
                            long mc_spikes = 0, Seed seed = {});
double likelihood_ratio(const SampleSet& s, const WishartParams& params,
                        long mc_spikes = 0, Seed seed = {});

// E_Q[L^2] = E_{x1,x2}[(1 - beta^2 <x1,x2>^2)^{-N/2}], exact over the Rademacher
// overlap law. Requires Rademacher prior and |beta| < 1 (throws std::domain_error
// on |beta| >= 1: the overlap +-1 atoms diverge).
double second_moment_exact(const WishartParams& params);

// Monte Carlo evaluation of the same expectation for priors with
// ||x||^2 < 1/|beta| almost surely.
double second_moment_mc(const WishartParams& params, long trials, Seed seed);

}  // namespace hlab
