#pragma once

#include <functional>
#include <memory>

#include "hlab/detection.hpp"
#include "hlab/wishart.hpp"

namespace hlab {

struct PlantParams {
    double epsilon = 0.0;
    double gamma = 0.0;  // > 1
    double beta = 0.0;   // in (-1, 0)
};

// gamma = first dyadic grid point 1 + 2^{-k} with edge_gap(gamma) <= eps/8;
// beta = -1 + (eps/32)(1 - sqrt(gamma))^2 / 2. The result satisfies
// edge_gap(gamma) <= eps/8, (1+beta)/(1-sqrt(gamma))^2 <= eps/32, beta^2 < gamma.
PlantParams choose_parameters(double epsilon);

// GOE(n) conditioned on the top n-N eigenspace being orthogonal to
// V = span{y_1,...,y_N}: uniformly random orthonormal bases of V and V-perp get
// the ascending eigenvalues of an independent GOE draw (V takes the bottom N).
// Held in factored form so the quadratic form and projections cost O(n^2)
// instead of materializing W.
class QuietPlantFrame {
  public:
    QuietPlantFrame(const SampleSet& s, Seed seed);

    int dim() const { return n_; }
    int subspace_dim() const { return nsamples_; }
    const Vector& eigenvalues() const { return eigenvalues_; }
    double lambda_max() const { return eigenvalues_(n_ - 1); }

    double quadratic_form(const Vector& x) const;      // x^T W x = sum_i lambda_i <v_i, x>^2
    double projection_norm_sq(const Vector& x) const;  // ||P_V x||^2
    Matrix materialize() const;                        // explicit W

  private:
    int n_ = 0, nsamples_ = 0;
    Vector eigenvalues_;
    std::unique_ptr<QRFactor> sample_qr_;      // full Q: first N cols span V, rest V-perp
    std::unique_ptr<HaarOrthogonal> haar_v_;   // N x N rotation inside V
    std::unique_ptr<HaarOrthogonal> haar_p_;   // (n-N) x (n-N) rotation inside V-perp
};

// Explicit planted matrix W = sum_i lambda_i v_i v_i^T.
// Throws std::invalid_argument when N >= n or the samples are rank deficient.
Matrix plant_from_samples(const SampleSet& s, Seed seed);

// ||P_V x||^2 for V = span of the samples.
double projection_norm_sq(const Vector& x, const SampleSet& s);

// x^T W x
double planted_quadratic_value(const Matrix& w, const Vector& x);

using Certifier = std::function<double(const Matrix&)>;

// Builds W from the samples and reports Null iff certifier(W) <= 2 - eps/2.
Hypothesis detect_via_certifier(const SampleSet& s, const Certifier& certifier, double epsilon,
                                Seed seed);

}  // namespace hlab
