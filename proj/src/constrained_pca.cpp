#include "hlab/constrained_pca.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hlab/ensembles.hpp"

namespace hlab {

std::pair<double, Vector> sk_bruteforce(const Matrix& w) {
    require_symmetric_finite(w);
    const int n = static_cast<int>(w.rows());
    if (n > 20) throw std::invalid_argument("sk_bruteforce: limited to n <= 20");

    // work on +-1 signs; divide by n at the end. Coordinate 0 stays +1 (x and -x tie).
    Vector x = Vector::Ones(n);
    Vector h = w * x;                  // h = W x
    double v = x.dot(h);
    double best = v;
    Vector best_x = x;

    const std::uint64_t steps = n > 1 ? (1ULL << (n - 1)) : 1;
    for (std::uint64_t t = 1; t < steps; ++t) {
        const int j = 1 + std::countr_zero(t);  // Gray code: bit flipped between t-1 and t
        v += -4.0 * x(j) * h(j) + 4.0 * w(j, j);
        h -= 2.0 * x(j) * w.col(j);
        x(j) = -x(j);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    return {best / n, best_x * scale};
}

CertificationResult spectral_certificate(const Matrix& w) {
    auto t0 = std::chrono::steady_clock::now();
    Vector lam = symmetric_eigenvalues(w);
    auto t1 = std::chrono::steady_clock::now();
    CertificationResult res;
    res.bound = lam(lam.size() - 1);
    res.certifier_name = "spectral";
    res.seconds = std::chrono::duration<double>(t1 - t0).count();
    return res;
}

std::pair<Vector, double> spectral_rounding(const Matrix& w) {
    const int n = static_cast<int>(w.rows());
    auto [lam, v] = extremal_eigenpair(w, /*largest=*/true);
    (void)lam;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = v(i) >= 0.0 ? scale : -scale;  // sign(0) -> +1
    return {x, x.dot(w * x)};
}

SkSurvey sk_ground_state_survey(int n, int instances, Seed seed) {
    if (instances < 1) throw std::invalid_argument("sk_ground_state_survey: need instances >= 1");
    Rng base(seed);
    SkSurvey s;
    s.n = n;
    s.instances = instances;
    s.optima.reserve(instances);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < instances; ++i) {
        Rng rng = base.substream("sk-survey", static_cast<std::uint64_t>(i));
        Matrix w = sample_goe(n, rng);
        double opt = sk_bruteforce(w).first;
        s.optima.push_back(opt);
        sum += opt;
        sumsq += opt * opt;
        if (i == 0 || opt < s.min) s.min = opt;
        if (i == 0 || opt > s.max) s.max = opt;
    }
    s.mean = sum / instances;
    s.stddev = instances > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / instances) / (instances - 1))) : 0.0;
    return s;
}

}  // namespace hlab
