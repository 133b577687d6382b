#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

#include "hlab/linalg.hpp"
#include "hlab/rng.hpp"

namespace hlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class BaseDist { Rademacher, Gaussian, UniformSqrt3 };

std::string to_string(BaseDist d);
BaseDist base_dist_from_string(const std::string& s);

// Normalized spike prior: entries i.i.d. pi/sqrt(n) with E[pi]=0, E[pi^2]=1,
// optionally beta-truncated (x kept only if beta_t ||x||^2 > -1 and ||x||^2 <= 2,
// else replaced by 0).
struct SpikePrior {
    BaseDist base = BaseDist::Rademacher;
    std::optional<double> truncation_beta;  // must be > -1 when set

    void validate() const;
};

Vector sample_spike(const SpikePrior& prior, int n, Seed seed);
Vector sample_spike(const SpikePrior& prior, int n, Rng& rng);

// Whether beta ||x||^2 > -1 holds almost surely for this prior.
// Throws std::domain_error for beta <= -1.
bool is_beta_good(const SpikePrior& prior, double beta);

struct OverlapAtom {
    double value;        // (n - 2k) / n
    double probability;  // C(n, k) / 2^n
    Rational probability_exact;
};

// Exact law of <x1, x2> for two independent Rademacher spikes.
std::vector<OverlapAtom> overlap_pmf_rademacher(int n);

// Empirical local Chernoff tail fit: smallest eta on {0.05, 0.10, ..., 0.50} such
// that P{|<x1,x2>| >= t} <= C exp(-(1-eta) n t^2 / 2) holds (within Monte Carlo
// error) for all tabulated t in [0, delta], with C = 2 and delta the largest
// passing grid point. fitted == false when no grid point passes.
struct ChernoffFit {
    bool fitted = false;
    double eta = 0.0;
    double delta = 0.0;
    double c = 2.0;
    std::vector<std::pair<double, double>> tail;  // (t, empirical P{|overlap| >= t})
    long trials = 0;
};

ChernoffFit fit_local_chernoff(const SpikePrior& prior, int n, long trials, Seed seed);

}  // namespace hlab
