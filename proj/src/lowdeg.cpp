#include "hlab/lowdeg.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

double phi(double x, int N) {
    if (!(x < 0.25)) throw std::domain_error("phi: requires x < 1/4");
    return std::exp(-0.5 * N * std::log1p(-4.0 * x));
}

long double phi_truncated(long double x, int N, int k) {
    if (N < 1) throw std::invalid_argument("phi_truncated: N must be >= 1");
    if (k < 0) throw std::invalid_argument("phi_truncated: truncation must be >= 0");
    long double acc = 1.0L;
    long double term = 1.0L;  // c_d x^d
    for (int d = 0; d < k; ++d) {
        term *= x * 2.0L * (N + 2 * d) / (d + 1);
        acc += term;
    }
    return acc;
}

namespace {

// E_x[x^m] for an untruncated i.i.d. prior; coordinates independent
double spike_moment(const std::vector<int>& m, const WishartParams& params) {
    if (params.prior.truncation_beta)
        throw std::invalid_argument("lr_component_sq: spike moments require an untruncated prior");
    const int n = params.n;
    double acc = 1.0;
    for (int mj : m) {
        if (mj == 0) continue;
        if (mj % 2 == 1) return 0.0;  // all supported bases are symmetric
        double base_moment;
        switch (params.prior.base) {
            case BaseDist::Rademacher: base_moment = 1.0; break;
            case BaseDist::Gaussian:
                base_moment = double_factorial(mj - 1).convert_to<double>();
                break;
            case BaseDist::UniformSqrt3:
                base_moment = std::pow(3.0, mj / 2) / (mj + 1);  // E[u^m], u ~ U[-sqrt3, sqrt3]
                break;
            default: base_moment = 0.0;
        }
        acc *= base_moment * std::pow(static_cast<double>(n), -0.5 * mj);
    }
    return acc;
}

}  // namespace

double lr_component_sq(const AlphaBlocks& blocks, const WishartParams& params) {
    params.validate();
    const int N = params.sample_count();
    if (static_cast<int>(blocks.size()) != N)
        throw std::invalid_argument("lr_component_sq: need one block per sample");

    int total = 0;
    double dfact_ratio = 1.0;  // prod_i (|a_i|-1)!!^2 / a_i!
    std::vector<int> msum(params.n, 0);
    for (const MultiIndex& a : blocks) {
        if (static_cast<int>(a.alpha.size()) != params.n)
            throw std::invalid_argument("lr_component_sq: block length mismatch");
        int k = a.order();
        if (k % 2 == 1) return 0.0;
        total += k;
        double df = double_factorial(k - 1).convert_to<double>();
        dfact_ratio *= df * df / a.factorial().convert_to<double>();
        for (int j = 0; j < params.n; ++j) msum[j] += a.alpha[j];
    }
    if (total == 0) return 1.0;  // constant component; also covers beta = 0 with 0^0 = 1
    double moment = spike_moment(msum, params);
    return std::pow(params.beta, total) * dfact_ratio * moment * moment;
}

McEstimate lr_component_oracle(const AlphaBlocks& blocks, const WishartParams& params,
                               long trials, Seed seed) {
    params.validate();
    const int n = params.n, N = params.sample_count();
    if (n > 6 || N > 3) throw std::invalid_argument("lr_component_oracle: limited to n <= 6, N <= 3");
    if (params.prior.base != BaseDist::Rademacher || params.prior.truncation_beta)
        throw std::invalid_argument("lr_component_oracle: Rademacher prior only");
    Rng base(seed);
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        Rng rng = base.substream("component-oracle", static_cast<std::uint64_t>(t));
        SampleSet s;
        s.samples.resize(n, N);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < n; ++i) s.samples(i, j) = rng.gaussian();
        double h = 1.0;
        for (int j = 0; j < N; ++j) h *= evaluate_multi(blocks[j], s.samples.col(j), true);
        double val = likelihood_ratio(s, params) * h;
        sum += val;
        sumsq += val * val;
    }
    double mean = sum / trials;
    double var = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1));
    double se_mean = std::sqrt(var / trials);
    // delta method for mean^2
    return {mean * mean, 2.0 * std::abs(mean) * se_mean};
}

LowDegResult lr_norm_lowdeg(const LowDegreeQuery& q) {
    q.params.validate();
    if (q.degree_bound < 0) throw std::invalid_argument("lr_norm_lowdeg: D must be >= 0");
    const int N = q.params.sample_count();
    const int k = q.degree_bound / 2;
    const long double b2 = static_cast<long double>(q.params.beta) * q.params.beta;

    if (q.method == LowDegMethod::ExactRademacher) {
        if (q.params.prior.base != BaseDist::Rademacher || q.params.prior.truncation_beta)
            throw std::invalid_argument("lr_norm_lowdeg: exact method requires untruncated Rademacher prior");
        long double acc = 0.0L;
        for (const auto& atom : overlap_pmf_rademacher(q.params.n)) {
            long double r2 = static_cast<long double>(atom.value) * atom.value;
            acc += static_cast<long double>(atom.probability) * phi_truncated(b2 * r2 / 4.0L, N, k);
        }
        return {static_cast<double>(acc), 0.0};
    }

    if (q.mc_trials < 20) throw std::invalid_argument("lr_norm_lowdeg: Monte Carlo needs >= 20 trials");
    Rng base(q.seed);
    const int nbatch = 20;
    std::vector<long double> batch(nbatch, 0.0L);
    std::vector<long> counts(nbatch, 0);
    for (long t = 0; t < q.mc_trials; ++t) {
        Rng rng = base.substream("lowdeg-pair", static_cast<std::uint64_t>(t));
        Vector x1 = sample_spike(q.params.prior, q.params.n, rng);
        Vector x2 = sample_spike(q.params.prior, q.params.n, rng);
        long double r = x1.dot(x2);
        int b = static_cast<int>(t % nbatch);
        batch[b] += phi_truncated(b2 * r * r / 4.0L, N, k);
        counts[b] += 1;
    }
    long double mean = 0.0L;
    for (int b = 0; b < nbatch; ++b) {
        batch[b] /= counts[b];
        mean += batch[b];
    }
    mean /= nbatch;
    long double var = 0.0L;
    for (int b = 0; b < nbatch; ++b) var += (batch[b] - mean) * (batch[b] - mean);
    var /= (nbatch - 1);
    double se = std::sqrt(static_cast<double>(var / nbatch));
    return {static_cast<double>(mean), se};
}

std::pair<double, double> deviations_split(const LowDegreeQuery& q, double eps) {
    q.params.validate();
    const int N = q.params.sample_count();
    const int k = q.degree_bound / 2;
    const long double b2 = static_cast<long double>(q.params.beta) * q.params.beta;

    if (q.method == LowDegMethod::ExactRademacher) {
        long double r1 = 0.0L, r2 = 0.0L;
        for (const auto& atom : overlap_pmf_rademacher(q.params.n)) {
            long double v = static_cast<long double>(atom.probability) *
                            phi_truncated(b2 * static_cast<long double>(atom.value) * atom.value / 4.0L, N, k);
            (std::abs(atom.value) <= eps ? r1 : r2) += v;
        }
        return {static_cast<double>(r1), static_cast<double>(r2)};
    }

    if (q.mc_trials < 1) throw std::invalid_argument("deviations_split: Monte Carlo needs trials");
    Rng base(q.seed);
    long double r1 = 0.0L, r2 = 0.0L;
    for (long t = 0; t < q.mc_trials; ++t) {
        Rng rng = base.substream("lowdeg-pair", static_cast<std::uint64_t>(t));
        Vector x1 = sample_spike(q.params.prior, q.params.n, rng);
        Vector x2 = sample_spike(q.params.prior, q.params.n, rng);
        long double r = x1.dot(x2);
        long double v = phi_truncated(b2 * r * r / 4.0L, N, k);
        (std::abs(static_cast<double>(r)) <= eps ? r1 : r2) += v;
    }
    return {static_cast<double>(r1 / q.mc_trials), static_cast<double>(r2 / q.mc_trials)};
}

double growth_lower_bound(int n, int N, double beta, int d) {
    if (d < 1 || d > std::min(n, N)) throw std::domain_error("growth_lower_bound: need 1 <= d <= min(n, N)");
    double log_base = 2.0 * std::log(std::abs(beta)) + std::log(static_cast<double>(n - d)) +
                      std::log(static_cast<double>(N - d)) - 2.0 * std::log(static_cast<double>(n));
    double log_val = -std::log(2.0 * std::sqrt(static_cast<double>(d))) + d * log_base;
    return std::exp(log_val);
}

std::vector<ScanRow> threshold_scan(double gamma, const std::vector<double>& betas, int D,
                                    const std::vector<int>& ns, const SpikePrior& prior) {
    std::vector<ScanRow> rows;
    for (double beta : betas) {
        for (int n : ns) {
            LowDegreeQuery q;
            q.params = {n, gamma, beta, prior};
            q.degree_bound = D;
            q.method = LowDegMethod::ExactRademacher;
            LowDegResult r = lr_norm_lowdeg(q);
            rows.push_back({n, q.params.sample_count(), D, gamma, beta, r.value, r.stderr_, "exact-rademacher"});
        }
    }
    return rows;
}

}  // namespace hlab
