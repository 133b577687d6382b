#pragma once

#include <string>
#include <vector>

#include "hlab/hermite.hpp"
#include "hlab/wishart.hpp"

namespace hlab {

enum class LowDegMethod { ExactRademacher, MonteCarlo };

struct LowDegreeQuery {
    WishartParams params;
    int degree_bound = 0;  // D
    LowDegMethod method = LowDegMethod::ExactRademacher;
    long mc_trials = 0;
    Seed seed;
};

// phi_N(x) = (1 - 4x)^{-N/2}, log-space; throws std::domain_error for x >= 1/4.
double phi(double x, int N);

// Taylor truncation of phi_N to degree k: sum_{d<=k} c_d x^d with the exact
// coefficient recurrence c_0 = 1, c_{d+1} = c_d * 2 (N + 2d) / (d + 1).
// Defined for all x; accumulated in long double.
long double phi_truncated(long double x, int N, int k);

// One block per sample; each MultiIndex runs over the n coordinates.
using AlphaBlocks = std::vector<MultiIndex>;

// Squared projection of L onto H-hat_alpha:
//   beta^{|alpha|} prod_i (|alpha_i|-1)!!^2 / alpha_i! * (E_x[x^{sum_i alpha_i}])^2
// when every |alpha_i| is even, else 0 (0^0 = 1 at beta = 0, alpha = 0).
// Requires an untruncated i.i.d. prior so the spike moment is exact.
double lr_component_sq(const AlphaBlocks& blocks, const WishartParams& params);

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

// Independent Monte Carlo oracle: (mean over null draws of L(y) H-hat_alpha(y))^2,
// L by exact spike enumeration; SE via the delta method.
McEstimate lr_component_oracle(const AlphaBlocks& blocks, const WishartParams& params,
                               long trials, Seed seed);

struct LowDegResult {
    double value = 0.0;
    double stderr_ = 0.0;  // 0 for the exact route
};

// ||L^{<=D}||^2 = E_{x1,x2}[phi_{N, floor(D/2)}(beta^2 <x1,x2>^2 / 4)];
// exact over the Rademacher overlap law, or Monte Carlo over spike pairs
// (SE from 20 batch means).
LowDegResult lr_norm_lowdeg(const LowDegreeQuery& q);

// (R1, R2): contributions with |overlap| <= eps and the remainder.
std::pair<double, double> deviations_split(const LowDegreeQuery& q, double eps);

// (1 / (2 sqrt(d))) (beta^2 (n-d)(N-d) / n^2)^d, log-space arithmetic.
double growth_lower_bound(int n, int N, double beta, int d);

struct ScanRow {
    int n = 0, N = 0, D = 0;
    double gamma = 0.0, beta = 0.0;
    double lr_norm_sq = 0.0, stderr_ = 0.0;
    std::string method;
};

std::vector<ScanRow> threshold_scan(double gamma, const std::vector<double>& betas, int D,
                                    const std::vector<int>& ns, const SpikePrior& prior);

}  // namespace hlab
