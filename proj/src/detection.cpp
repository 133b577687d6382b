#include "hlab/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

double bbp_threshold(double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("bbp_threshold: gamma must be > 0");
    return std::sqrt(gamma);
}

Hypothesis spectral_detect(const SampleSet& s, const WishartParams& params) {
    params.validate();
    const int n = params.n, N = params.sample_count();
    const double gp = static_cast<double>(n) / N;
    // edge fluctuations are Tracy-Widom at scale n^{-2/3}; an n^{-1/4} margin
    // would swallow the whole bulk-to-outlier gap at these aspect ratios
    const double margin = std::pow(static_cast<double>(n), -2.0 / 3.0);
    Vector lam = symmetric_eigenvalues(sample_covariance(s));
    if (params.beta >= 0.0) {
        double edge = (1.0 + std::sqrt(gp)) * (1.0 + std::sqrt(gp));
        return lam(n - 1) > edge + margin ? Hypothesis::Planted : Hypothesis::Null;
    }
    double edge = (1.0 - std::sqrt(gp)) * (1.0 - std::sqrt(gp));
    // rank(Y) <= N: when N < n the smallest nonzero eigenvalue is the (n-N)-th
    double lam_min = N < n ? lam(n - N) : lam(0);
    return lam_min < edge - margin ? Hypothesis::Planted : Hypothesis::Null;
}

DetectionReport run_detection_experiment(const WishartParams& params, const Detector& detector,
                                         const std::string& name, long trials, Seed seed) {
    params.validate();
    if (trials < 2) throw std::invalid_argument("run_detection_experiment: trials must be >= 2");
    const long half = trials / 2;
    Rng base(seed);
    long false_planted = 0, false_null = 0;
    for (long t = 0; t < half; ++t) {
        Seed sub{base.substream("detect-null", static_cast<std::uint64_t>(t)).next_u64()};
        SampleSet s = sample_null(params, sub);
        if (detector(s, params) == Hypothesis::Planted) ++false_planted;
    }
    for (long t = 0; t < half; ++t) {
        Seed sub{base.substream("detect-planted", static_cast<std::uint64_t>(t)).next_u64()};
        SampleSet s = sample_planted(params, sub);
        if (detector(s, params) == Hypothesis::Null) ++false_null;
    }
    DetectionReport rep;
    rep.trials = 2 * half;
    rep.type1 = static_cast<double>(false_planted) / half;
    rep.type2 = static_cast<double>(false_null) / half;
    rep.detector_name = name;
    rep.params = params;
    return rep;
}

}  // namespace hlab
