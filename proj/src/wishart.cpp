#include "hlab/wishart.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hlab {

int WishartParams::sample_count() const {
    return static_cast<int>(std::ceil(static_cast<double>(n) / gamma - 1e-9));
}

void WishartParams::validate() const {
    if (n < 1) throw std::invalid_argument("WishartParams: n must be >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("WishartParams: gamma must be > 0");
    if (!(beta > -1.0)) throw std::invalid_argument("WishartParams: beta must be > -1");
    prior.validate();
}

SampleSet sample_null(const WishartParams& params, Seed seed) {
    params.validate();
    Rng rng = Rng(seed).substream("wishart-null");
    const int n = params.n, N = params.sample_count();
    SampleSet s;
    s.samples.resize(n, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < n; ++i) s.samples(i, j) = rng.gaussian();
    return s;
}

SampleSet sample_planted(const WishartParams& params, Seed seed) {
    params.validate();
    Rng rng = Rng(seed).substream("wishart-planted");
    const int n = params.n, N = params.sample_count();
    SampleSet s;
    s.planted = true;
    Vector x = sample_spike(params.prior, n, rng);
    s.spike = x;
    s.samples.resize(n, N);
    const double ns = x.squaredNorm();
    if (params.beta * ns >= -1.0 && ns > 0.0) {
        Vector xhat = x / std::sqrt(ns);
        const double tau = std::sqrt(1.0 + params.beta * ns) - 1.0;
        for (int j = 0; j < N; ++j) {
            Vector g(n);
            for (int i = 0; i < n; ++i) g(i) = rng.gaussian();
            s.samples.col(j) = g + tau * xhat.dot(g) * xhat;
        }
    } else {
        // x = 0 or covariance not PSD: fall back to the null law
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < n; ++i) s.samples(i, j) = rng.gaussian();
    }
    return s;
}

Matrix sample_covariance(const SampleSet& s) {
    if (s.samples.cols() < 1) throw std::invalid_argument("sample_covariance: empty sample set");
    Matrix y = (s.samples * s.samples.transpose()) / static_cast<double>(s.samples.cols());
    return 0.5 * (y + y.transpose());
}

namespace {

// log of one spike's contribution to L given precomputed sum_i <x, y_i>^2
double log_spike_term(double beta, double ns, double sumsq, int N) {
    const double a = 1.0 + beta * ns;
    return -0.5 * N * std::log(a) + 0.5 * beta / a * sumsq;
}

double logsumexp(const std::vector<double>& v) {
    double m = v[0];
    for (double t : v) m = std::max(m, t);
    double s = 0.0;
    for (double t : v) s += std::exp(t - m);
    return m + std::log(s);
}

}  // namespace

double log_likelihood_ratio(const SampleSet& s, const WishartParams& params,
                            long mc_spikes, Seed seed) {
    params.validate();
    if (!is_beta_good(params.prior, params.beta))
        throw std::invalid_argument("log_likelihood_ratio: prior is not beta-good");
    const int n = params.n, N = params.sample_count();
    if (s.samples.rows() != n || s.samples.cols() != N)
        throw std::invalid_argument("log_likelihood_ratio: sample set does not match params");

    if (params.prior.base == BaseDist::Rademacher && !params.prior.truncation_beta) {
        if (n > 20) throw std::invalid_argument("exact likelihood ratio limited to n <= 20");
        // enumerate x in {+-1/sqrt(n)}^n; ||x||^2 = 1 for all of them
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        const std::uint64_t count = 1ULL << n;
        std::vector<double> terms;
        terms.reserve(count);
        Vector x(n);
        for (std::uint64_t bits = 0; bits < count; ++bits) {
            for (int i = 0; i < n; ++i) x(i) = (bits >> i) & 1 ? scale : -scale;
            double sumsq = 0.0;
            for (int j = 0; j < N; ++j) {
                double d = x.dot(s.samples.col(j));
                sumsq += d * d;
            }
            terms.push_back(log_spike_term(params.beta, 1.0, sumsq, N));
        }
        return logsumexp(terms) - n * std::log(2.0);
    }

    if (mc_spikes < 1)
        throw std::invalid_argument("log_likelihood_ratio: non-Rademacher prior needs mc_spikes >= 1");
    Rng rng = Rng(seed).substream("lr-inner-mc");
    std::vector<double> terms;
    terms.reserve(mc_spikes);
    for (long t = 0; t < mc_spikes; ++t) {
        Vector x = sample_spike(params.prior, n, rng);
        double ns = x.squaredNorm();
        double sumsq = 0.0;
        for (int j = 0; j < N; ++j) {
            double d = x.dot(s.samples.col(j));
            sumsq += d * d;
        }
        terms.push_back(log_spike_term(params.beta, ns, sumsq, N));
    }
    return logsumexp(terms) - std::log(static_cast<double>(mc_spikes));
}

double likelihood_ratio(const SampleSet& s, const WishartParams& params, long mc_spikes, Seed seed) {
    return std::exp(log_likelihood_ratio(s, params, mc_spikes, seed));
}

double second_moment_exact(const WishartParams& params) {
    params.validate();
    if (params.prior.base != BaseDist::Rademacher || params.prior.truncation_beta)
        throw std::invalid_argument("second_moment_exact: requires untruncated Rademacher prior");
    if (std::abs(params.beta) >= 1.0)
        throw std::domain_error("second_moment_exact: diverges for |beta| >= 1 (overlap +-1 atoms)");
    const int N = params.sample_count();
    const double b2 = params.beta * params.beta;
    long double acc = 0.0L;
    for (const auto& atom : overlap_pmf_rademacher(params.n)) {
        long double r2 = static_cast<long double>(atom.value) * atom.value;
        acc += static_cast<long double>(atom.probability) *
               std::exp(-0.5L * N * std::log1p(-static_cast<long double>(b2) * r2));
    }
    return static_cast<double>(acc);
}

double second_moment_mc(const WishartParams& params, long trials, Seed seed) {
    params.validate();
    if (trials < 1) throw std::invalid_argument("second_moment_mc: trials must be >= 1");
    Rng base(seed);
    long double acc = 0.0L;
    const int N = params.sample_count();
    const double b2 = params.beta * params.beta;
    for (long t = 0; t < trials; ++t) {
        Rng rng = base.substream("second-moment-pair", static_cast<std::uint64_t>(t));
        Vector x1 = sample_spike(params.prior, params.n, rng);
        Vector x2 = sample_spike(params.prior, params.n, rng);
        double r = x1.dot(x2);
        double arg = 1.0 - b2 * r * r;
        if (!(arg > 0.0))
            throw std::domain_error("second_moment_mc: overlap reached 1/|beta|; prior violates precondition");
        acc += std::exp(-0.5L * N * std::log(static_cast<long double>(arg)));
    }
    return static_cast<double>(acc / trials);
}

}  // namespace hlab
