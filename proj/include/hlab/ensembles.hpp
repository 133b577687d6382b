#pragma once

#include "hlab/linalg.hpp"
#include "hlab/rng.hpp"

namespace hlab {

// GOE(n) draw: W_ii ~ N(0, 2/n), W_ij ~ N(0, 1/n) independently for i <= j,
// symmetrized. Throws std::invalid_argument for n < 1.
Matrix sample_goe(int n, Seed seed);
Matrix sample_goe(int n, Rng& rng);

// CDF of the semicircle distribution with density sqrt(4 - t^2) / (2 pi) on [-2, 2],
// clamped to [0, 1] outside the support.
double semicircle_cdf(double lambda);

// The unique g in (0, 4] with 1 - F(2 - g) = 1 - 1/gamma, i.e. the eigenvalue-edge
// gap such that a 1/gamma fraction of the semicircle mass lies below 2 - g.
// Bisection to absolute tolerance 1e-10. Throws std::domain_error for gamma <= 1.
double edge_gap(double gamma);

}  // namespace hlab
