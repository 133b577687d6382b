#include "hlab/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

Matrix sample_goe(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_goe: dimension must be >= 1");
    const double off = std::sqrt(1.0 / n);
    const double diag = std::sqrt(2.0 / n);
    Matrix w(n, n);
    for (int i = 0; i < n; ++i) {
        w(i, i) = diag * rng.gaussian();
        for (int j = i + 1; j < n; ++j) {
            double v = off * rng.gaussian();
            w(i, j) = v;
            w(j, i) = v;
        }
    }
    return w;
}

Matrix sample_goe(int n, Seed seed) {
    Rng rng(seed);
    return sample_goe(n, rng);
}

double semicircle_cdf(double lambda) {
    if (lambda <= -2.0) return 0.0;
    if (lambda >= 2.0) return 1.0;
    const double pi = 3.14159265358979323846;
    // antiderivative of sqrt(4 - t^2)/(2 pi): (t sqrt(4 - t^2)/2 + 2 asin(t/2)) / (2 pi)
    double f = (0.5 * lambda * std::sqrt(4.0 - lambda * lambda) + 2.0 * std::asin(0.5 * lambda) + pi) / (2.0 * pi);
    return std::min(1.0, std::max(0.0, f));
}

double edge_gap(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("edge_gap: gamma must be > 1");
    // solve F(2 - g) = 1/gamma; F(2 - g) decreases in g, so bisect on [1e-12, 4]
    const double target = 1.0 / gamma;
    double lo = 1e-12, hi = 4.0;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (semicircle_cdf(2.0 - mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hlab
