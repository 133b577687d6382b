#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hlab/linalg.hpp"
#include "hlab/rng.hpp"

namespace hlab {

struct CertificationResult {
    double bound = 0.0;
    std::string certifier_name;
    double seconds = 0.0;
};

// Exact max of x^T W x over x in {+-1/sqrt(n)}^n by Gray-code enumeration of
// 2^{n-1} sign patterns (x and -x coincide). Throws for n > 20.
std::pair<double, Vector> sk_bruteforce(const Matrix& w);

// bound = lambda_max(W); valid for every symmetric W since ||x|| = 1 on the hypercube.
CertificationResult spectral_certificate(const Matrix& w);

// x = sgn(v_max)/sqrt(n) with sign(0) -> +1; returns (x, x^T W x).
std::pair<Vector, double> spectral_rounding(const Matrix& w);

struct SkSurvey {
    int n = 0;
    int instances = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> optima;
};

// Brute-force ground-state statistics over seeded GOE instances, n <= 20.
SkSurvey sk_ground_state_survey(int n, int instances, Seed seed);

}  // namespace hlab
