#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hlab/detection.hpp"

using namespace hlab;

namespace {

WishartParams rademacher_params(int n, double gamma, double beta) {
    return {n, gamma, beta, SpikePrior{BaseDist::Rademacher, std::nullopt}};
}

}  // namespace

TEST_CASE("bbp_threshold is the square root of the aspect ratio") {
    CHECK(bbp_threshold(0.5) == doctest::Approx(0.7071067811865476).epsilon(1e-14));
    CHECK(bbp_threshold(1.0) == 1.0);
    CHECK(bbp_threshold(4.0) == 2.0);
    CHECK_THROWS_AS(bbp_threshold(0.0), std::domain_error);
    CHECK_THROWS_AS(bbp_threshold(-1.0), std::domain_error);
}

TEST_CASE("harness bookkeeping with degenerate detectors") {
    WishartParams params = rademacher_params(20, 2.0, 0.5);

    Detector oracle = [](const SampleSet& s, const WishartParams&) {
        return s.planted ? Hypothesis::Planted : Hypothesis::Null;
    };
    DetectionReport rep = run_detection_experiment(params, oracle, "oracle", 40, Seed{1});
    CHECK(rep.trials == 40);
    CHECK(rep.type1 == 0.0);
    CHECK(rep.type2 == 0.0);
    CHECK(rep.total_error() == 0.0);
    CHECK(rep.detector_name == "oracle");

    Detector always_null = [](const SampleSet&, const WishartParams&) { return Hypothesis::Null; };
    DetectionReport rep2 = run_detection_experiment(params, always_null, "null", 40, Seed{1});
    CHECK(rep2.type1 == 0.0);
    CHECK(rep2.type2 == 1.0);
    CHECK(rep2.total_error() == 0.5);

    CHECK_THROWS_AS(run_detection_experiment(params, oracle, "oracle", 1, Seed{1}),
                    std::invalid_argument);
}

TEST_CASE("experiments replay bit-for-bit") {
    WishartParams params = rademacher_params(60, 0.5, -0.9);
    DetectionReport a = run_detection_experiment(params, spectral_detect, "spectral", 40, Seed{2});
    DetectionReport b = run_detection_experiment(params, spectral_detect, "spectral", 40, Seed{2});
    CHECK(a.type1 == b.type1);
    CHECK(a.type2 == b.type2);
}

TEST_CASE("spectral detector separates hypotheses above the BBP threshold") {
    // beta^2 = 0.81 > gamma = 0.5
    WishartParams params = rademacher_params(200, 0.5, -0.9);
    DetectionReport rep = run_detection_experiment(params, spectral_detect, "spectral", 100, Seed{3});
    CHECK(rep.total_error() <= 0.15);
}

TEST_CASE("spectral detector is near chance below the BBP threshold") {
    // beta^2 = 0.16 < gamma = 0.5
    WishartParams params = rademacher_params(200, 0.5, -0.4);
    DetectionReport rep = run_detection_experiment(params, spectral_detect, "spectral", 100, Seed{4});
    CHECK(rep.total_error() >= 0.3);
}

TEST_CASE("beta=0 leaves the spectral detector at chance") {
    WishartParams params = rademacher_params(200, 0.5, 0.0);
    DetectionReport rep = run_detection_experiment(params, spectral_detect, "spectral", 100, Seed{5});
    // planted == null in law, so whatever the detector's firing rate p is,
    // type1 = p and type2 = 1 - p up to Monte Carlo noise: total error is 1/2
    CHECK(std::abs(rep.total_error() - 0.5) <= 0.1);
}

TEST_CASE("spectral detector power is monotone in beta^2") {
    const double gamma = 0.5;
    double prev = 1.0;
    for (double frac : {0.1, 0.4, 0.8, 1.2}) {
        WishartParams params = rademacher_params(300, gamma, -std::sqrt(frac * gamma));
        DetectionReport rep =
            run_detection_experiment(params, spectral_detect, "spectral", 200, Seed{6});
        CHECK(rep.total_error() <= prev + 0.06);  // small slack for Monte Carlo noise
        prev = rep.total_error();
    }
}

TEST_CASE("positive-beta branch thresholds the top eigenvalue") {
    WishartParams params = rademacher_params(200, 0.5, 1.5);
    DetectionReport rep = run_detection_experiment(params, spectral_detect, "spectral", 100, Seed{7});
    CHECK(rep.total_error() <= 0.15);
}
