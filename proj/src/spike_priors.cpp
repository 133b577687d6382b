#include "hlab/spike_priors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hlab {

std::string to_string(BaseDist d) {
    switch (d) {
        case BaseDist::Rademacher: return "rademacher";
        case BaseDist::Gaussian: return "gaussian";
        case BaseDist::UniformSqrt3: return "uniform";
    }
    return "?";
}

BaseDist base_dist_from_string(const std::string& s) {
    if (s == "rademacher") return BaseDist::Rademacher;
    if (s == "gaussian") return BaseDist::Gaussian;
    if (s == "uniform") return BaseDist::UniformSqrt3;
    throw std::invalid_argument("unknown prior base: " + s);
}

void SpikePrior::validate() const {
    if (truncation_beta && !(*truncation_beta > -1.0))
        throw std::domain_error("truncation beta must be > -1");
}

namespace {

double draw_base(BaseDist d, Rng& rng) {
    switch (d) {
        case BaseDist::Rademacher: return static_cast<double>(rng.rademacher());
        case BaseDist::Gaussian: return rng.gaussian();
        case BaseDist::UniformSqrt3: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    }
    return 0.0;
}

}  // namespace

Vector sample_spike(const SpikePrior& prior, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_spike: dimension must be >= 1");
    prior.validate();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = scale * draw_base(prior.base, rng);
    if (prior.truncation_beta) {
        double ns = x.squaredNorm();
        if (!(*prior.truncation_beta * ns > -1.0 && ns <= 2.0)) x.setZero();
    }
    return x;
}

Vector sample_spike(const SpikePrior& prior, int n, Seed seed) {
    Rng rng(seed);
    return sample_spike(prior, n, rng);
}

bool is_beta_good(const SpikePrior& prior, double beta) {
    if (!(beta > -1.0)) throw std::domain_error("is_beta_good: beta must be > -1");
    prior.validate();
    if (beta >= 0.0) return true;
    // beta < 0: need ||x||^2 < 1/|beta| almost surely
    if (prior.base == BaseDist::Rademacher && !prior.truncation_beta) return true;  // ||x||^2 = 1
    if (prior.truncation_beta && *prior.truncation_beta <= beta) return true;       // kept x has beta_t ||x||^2 > -1
    if (prior.base == BaseDist::Rademacher) return true;
    if (prior.base == BaseDist::UniformSqrt3 && !prior.truncation_beta)
        return beta > -1.0 / 3.0;  // ||x||^2 <= 3 always
    return false;
}

std::vector<OverlapAtom> overlap_pmf_rademacher(int n) {
    if (n < 1) throw std::invalid_argument("overlap_pmf_rademacher: n must be >= 1");
    std::vector<OverlapAtom> atoms(n + 1);
    BigInt binom = 1;
    BigInt denom = BigInt(1) << n;
    for (int k = 0; k <= n; ++k) {
        Rational p(binom, denom);
        atoms[k].value = static_cast<double>(n - 2 * k) / n;
        atoms[k].probability_exact = p;
        atoms[k].probability = p.convert_to<double>();
        if (k < n) binom = binom * (n - k) / (k + 1);
    }
    return atoms;
}

ChernoffFit fit_local_chernoff(const SpikePrior& prior, int n, long trials, Seed seed) {
    if (trials < 10000) throw std::invalid_argument("fit_local_chernoff: need trials >= 1e4");
    Rng base(seed);
    std::vector<double> overlaps(trials);
    for (long t = 0; t < trials; ++t) {
        Rng rng = base.substream("chernoff-pair", static_cast<std::uint64_t>(t));
        Vector x1 = sample_spike(prior, n, rng);
        Vector x2 = sample_spike(prior, n, rng);
        overlaps[t] = std::abs(x1.dot(x2));
    }
    std::sort(overlaps.begin(), overlaps.end());

    ChernoffFit fit;
    fit.trials = trials;
    const double tmax = 1.0;
    for (double t = 0.0; t <= tmax + 1e-12; t += 0.02) {
        auto it = std::lower_bound(overlaps.begin(), overlaps.end(), t);
        double surv = static_cast<double>(overlaps.end() - it) / trials;
        fit.tail.emplace_back(t, surv);
    }

    const double c = 2.0;
    for (int ei = 1; ei <= 10; ++ei) {
        double eta = 0.05 * ei;
        double best_delta = 0.0;
        for (int di = 20; di >= 1; --di) {
            double delta = 0.05 * di;
            bool ok = true;
            for (auto [t, surv] : fit.tail) {
                if (t > delta + 1e-12) continue;
                double bound = c * std::exp(-0.5 * (1.0 - eta) * n * t * t);
                double se = std::sqrt(std::max(surv * (1.0 - surv), 1.0 / trials) / trials);
                if (surv > bound + 3.0 * se) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                best_delta = delta;
                break;
            }
        }
        if (best_delta > 0.0) {
            fit.fitted = true;
            fit.eta = eta;
            fit.delta = best_delta;
            fit.c = c;
            return fit;
        }
    }
    return fit;  // fitted == false; caller reports
}

}  // namespace hlab
