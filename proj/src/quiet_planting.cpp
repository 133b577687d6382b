#include "hlab/quiet_planting.hpp"

#include <cmath>
#include <stdexcept>

#include "hlab/ensembles.hpp"

namespace hlab {

PlantParams choose_parameters(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0))
        throw std::domain_error("choose_parameters: epsilon must be in (0, 2)");
    PlantParams p;
    p.epsilon = epsilon;
    for (int k = 0;; ++k) {
        if (k > 60) throw std::runtime_error("choose_parameters: gamma grid exhausted");
        double gamma = 1.0 + std::ldexp(1.0, -k);
        if (edge_gap(gamma) <= epsilon / 8.0) {
            p.gamma = gamma;
            break;
        }
    }
    double s = 1.0 - std::sqrt(p.gamma);
    p.beta = -1.0 + 0.5 * (epsilon / 32.0) * s * s;  // safety factor 1/2
    return p;
}

QuietPlantFrame::QuietPlantFrame(const SampleSet& s, Seed seed) {
    n_ = static_cast<int>(s.samples.rows());
    nsamples_ = static_cast<int>(s.samples.cols());
    if (nsamples_ >= n_) throw std::invalid_argument("quiet planting requires N < n");

    sample_qr_ = std::make_unique<QRFactor>(s.samples);
    if (sample_qr_->min_abs_r_diagonal() <= 1e-12 * std::sqrt(static_cast<double>(n_)))
        throw std::invalid_argument("quiet planting: sample set is rank deficient");

    // Haar rotations make the bases of V and V-perp uniformly random; composing
    // with the fixed QR basis equals orthonormalizing a Gaussian matrix projected
    // into each subspace.
    Rng base(seed);
    Rng rv = base.substream("haar-v");
    Rng rp = base.substream("haar-perp");
    Rng rg = base.substream("plant-goe");
    haar_v_ = std::make_unique<HaarOrthogonal>(nsamples_, rv);
    haar_p_ = std::make_unique<HaarOrthogonal>(n_ - nsamples_, rp);
    eigenvalues_ = symmetric_eigenvalues(sample_goe(n_, rg));
}

double QuietPlantFrame::quadratic_form(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("quadratic_form: dimension mismatch");
    Vector c = sample_qr_->apply_qt(x);
    Vector u1 = haar_v_->apply_qt(c.head(nsamples_));
    Vector u2 = haar_p_->apply_qt(c.tail(n_ - nsamples_));
    double acc = 0.0;
    for (int i = 0; i < nsamples_; ++i) acc += eigenvalues_(i) * u1(i) * u1(i);
    for (int i = nsamples_; i < n_; ++i) acc += eigenvalues_(i) * u2(i - nsamples_) * u2(i - nsamples_);
    return acc;
}

double QuietPlantFrame::projection_norm_sq(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("projection_norm_sq: dimension mismatch");
    Vector c = sample_qr_->apply_qt(x);
    return c.head(nsamples_).squaredNorm();
}

Matrix QuietPlantFrame::materialize() const {
    Matrix q = sample_qr_->q_columns(n_);
    Matrix frame(n_, n_);
    frame.leftCols(nsamples_) = q.leftCols(nsamples_) * haar_v_->materialize();
    frame.rightCols(n_ - nsamples_) = q.rightCols(n_ - nsamples_) * haar_p_->materialize();
    Matrix w = frame * eigenvalues_.asDiagonal() * frame.transpose();
    return 0.5 * (w + w.transpose());
}

Matrix plant_from_samples(const SampleSet& s, Seed seed) {
    return QuietPlantFrame(s, seed).materialize();
}

double projection_norm_sq(const Vector& x, const SampleSet& s) {
    QRFactor qr(s.samples);
    Vector c = qr.apply_qt(x);
    return c.head(s.samples.cols()).squaredNorm();
}

double planted_quadratic_value(const Matrix& w, const Vector& x) {
    if (w.rows() != x.size()) throw std::invalid_argument("planted_quadratic_value: dimension mismatch");
    return x.dot(w * x);
}

Hypothesis detect_via_certifier(const SampleSet& s, const Certifier& certifier, double epsilon,
                                Seed seed) {
    Matrix w = plant_from_samples(s, seed);
    return certifier(w) <= 2.0 - epsilon / 2.0 ? Hypothesis::Null : Hypothesis::Planted;
}

}  // namespace hlab
