#pragma once

#include <functional>
#include <string>

#include "hlab/wishart.hpp"

namespace hlab {

enum class Hypothesis { Null, Planted };

using Detector = std::function<Hypothesis(const SampleSet&, const WishartParams&)>;

// Critical |beta| of the spectral transition: sqrt(gamma).
// Throws std::domain_error for gamma <= 0.
double bbp_threshold(double gamma);

// Thresholds the extreme eigenvalue of the sample covariance at the
// Marchenko-Pastur bulk edge (1 +- sqrt(gamma'))^2 with margin n^{-2/3},
// where gamma' = n/N. For beta < 0 the smallest nonzero eigenvalue is used
// (the smallest of the N top eigenvalues when N < n).
Hypothesis spectral_detect(const SampleSet& s, const WishartParams& params);

struct DetectionReport {
    long trials = 0;
    double type1 = 0.0;  // null labeled planted
    double type2 = 0.0;  // planted labeled null
    std::string detector_name;
    WishartParams params;

    double total_error() const { return 0.5 * (type1 + type2); }
};

// trials/2 null + trials/2 planted instances on substream seeds.
DetectionReport run_detection_experiment(const WishartParams& params, const Detector& detector,
                                         const std::string& name, long trials, Seed seed);

}  // namespace hlab
