#include "hlab/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

double HermitePoly::evaluate(double x) const {
    double acc = 0.0;
    for (int j = degree; j >= 0; --j) acc = acc * x + coeffs[j].convert_to<double>();
    return acc;
}

Rational HermitePoly::evaluate_exact(const Rational& x) const {
    Rational acc = 0;
    for (int j = degree; j >= 0; --j) acc = acc * x + coeffs[j];
    return acc;
}

HermitePoly hermite_coeffs(int k, const Rational& v) {
    if (k < 0) throw std::invalid_argument("hermite_coeffs: degree must be >= 0");
    std::vector<Rational> prev{1};       // h_0
    if (k == 0) return {0, v, prev};
    std::vector<Rational> cur{0, 1};     // h_1 = x
    for (int d = 1; d < k; ++d) {
        std::vector<Rational> next(d + 2, Rational(0));
        for (int j = 0; j <= d; ++j) next[j + 1] += cur[j];          // x h_d
        for (int j = 0; j < d; ++j) next[j] -= v * d * prev[j];      // - v d h_{d-1}
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {k, v, cur};
}

std::vector<Rational> polynomial_derivative(const std::vector<Rational>& coeffs) {
    if (coeffs.size() <= 1) return {Rational(0)};
    std::vector<Rational> d(coeffs.size() - 1);
    for (std::size_t j = 1; j < coeffs.size(); ++j) d[j - 1] = coeffs[j] * static_cast<int>(j);
    return d;
}

HermitePoly hermite_coeffs_derivative_recursion(int k, const Rational& v) {
    if (k < 0) throw std::invalid_argument("degree must be >= 0");
    std::vector<Rational> cur{1};
    for (int d = 0; d < k; ++d) {
        std::vector<Rational> next(d + 2, Rational(0));
        for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += cur[j];
        std::vector<Rational> dcur = polynomial_derivative(cur);
        for (std::size_t j = 0; j < dcur.size(); ++j) next[j] -= v * dcur[j];
        cur = std::move(next);
    }
    return {k, v, cur};
}

int MultiIndex::order() const {
    int s = 0;
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("MultiIndex: negative entry");
        s += a;
    }
    return s;
}

BigInt MultiIndex::factorial() const {
    BigInt f = 1;
    for (int a : alpha)
        for (int j = 2; j <= a; ++j) f *= j;
    return f;
}

namespace {

// unit-variance coefficient table in doubles; evaluate_multi is called inside
// Monte Carlo loops, so the rational recursion runs once per degree
const std::vector<double>& unit_hermite_table(int k) {
    constexpr int cap = 64;
    static const std::vector<std::vector<double>> table = [] {
        std::vector<std::vector<double>> t(cap + 1);
        for (int d = 0; d <= cap; ++d) {
            HermitePoly h = hermite_coeffs(d, Rational(1));
            t[d].reserve(d + 1);
            for (const Rational& c : h.coeffs) t[d].push_back(c.convert_to<double>());
        }
        return t;
    }();
    if (k > cap) throw std::invalid_argument("evaluate_multi: degree exceeds table");
    return table[k];
}

}  // namespace

double evaluate_multi(const MultiIndex& alpha, const Vector& x, bool normalized) {
    if (static_cast<Eigen::Index>(alpha.alpha.size()) != x.size())
        throw std::invalid_argument("evaluate_multi: length mismatch");
    double acc = 1.0;
    for (std::size_t i = 0; i < alpha.alpha.size(); ++i) {
        const std::vector<double>& c = unit_hermite_table(alpha.alpha[i]);
        double p = 0.0;
        const double xi = x(static_cast<Eigen::Index>(i));
        for (std::size_t j = c.size(); j-- > 0;) p = p * xi + c[j];
        acc *= p;
    }
    if (normalized) acc /= std::sqrt(alpha.factorial().convert_to<double>());
    return acc;
}

BigInt double_factorial(int m) {
    if (m < -1) throw std::invalid_argument("double_factorial: m must be >= -1");
    BigInt f = 1;
    for (int j = m; j >= 2; j -= 2) f *= j;
    return f;
}

Rational mismatched_expectation_exact(int k, const Rational& v, const Rational& sigma2) {
    if (k < 0) throw std::invalid_argument("degree must be >= 0");
    if (k % 2 == 1) return 0;
    Rational diff = sigma2 - v;
    Rational pw = 1;
    for (int j = 0; j < k / 2; ++j) pw *= diff;
    return Rational(double_factorial(k - 1)) * pw;
}

double mismatched_expectation(int k, double v, double sigma2) {
    if (k < 0) throw std::invalid_argument("degree must be >= 0");
    if (k % 2 == 1) return 0.0;
    return double_factorial(k - 1).convert_to<double>() * std::pow(sigma2 - v, k / 2);
}

Rational gaussian_moment(int m) {
    if (m < 0) throw std::invalid_argument("moment order must be >= 0");
    if (m % 2 == 1) return 0;
    return Rational(double_factorial(m - 1));
}

namespace {

// p(x) exp(-x^2/(2v)) with rational p; closed under d/dx:
// (p exp)' = (p' - (x/v) p) exp
struct GaussianProduct {
    std::vector<Rational> poly;
    Rational v;

    void differentiate() {
        std::vector<Rational> next(poly.size() + 1, Rational(0));
        std::vector<Rational> dp = polynomial_derivative(poly);
        for (std::size_t j = 0; j < dp.size(); ++j) next[j] += dp[j];
        for (std::size_t j = 0; j < poly.size(); ++j) next[j + 1] -= poly[j] / v;
        poly = std::move(next);
    }

    double evaluate(double x) const {
        double p = 0.0;
        for (std::size_t j = poly.size(); j-- > 0;) p = p * x + poly[j].convert_to<double>();
        return p * std::exp(-x * x / (2.0 * v.convert_to<double>()));
    }
};

}  // namespace

double check_rodrigues(int k, const Rational& v, const std::vector<double>& grid) {
    if (v == 0) throw std::domain_error("check_rodrigues: v must be nonzero");
    if (k < 0) throw std::invalid_argument("degree must be >= 0");
    GaussianProduct g{{Rational(1)}, v};
    for (int j = 0; j < k; ++j) g.differentiate();
    HermitePoly h = hermite_coeffs(k, v);
    Rational neg_v_pow = 1;
    for (int j = 0; j < k; ++j) neg_v_pow *= -v;
    double worst = 0.0;
    const double vd = v.convert_to<double>();
    for (double x : grid) {
        double lhs = g.evaluate(x);
        double rhs = h.evaluate(x) / neg_v_pow.convert_to<double>() * std::exp(-x * x / (2.0 * vd));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double check_multidim_rodrigues(const MultiIndex& alpha, const Vector& x, const Rational& v,
                                const std::vector<Vector>& y_grid) {
    if (v == 0) throw std::domain_error("check_multidim_rodrigues: v must be nonzero");
    if (static_cast<Eigen::Index>(alpha.alpha.size()) != x.size())
        throw std::invalid_argument("length mismatch");
    const int k = alpha.order();

    // the exponent depends on y only through s = <x, y>, so
    // d/dy_i = x_i d/ds and d^alpha = x^alpha d^k/ds^k
    GaussianProduct g{{Rational(1)}, v};
    for (int j = 0; j < k; ++j) g.differentiate();

    double x_alpha = 1.0;
    for (std::size_t i = 0; i < alpha.alpha.size(); ++i)
        x_alpha *= std::pow(x(static_cast<Eigen::Index>(i)), alpha.alpha[i]);

    HermitePoly h = hermite_coeffs(k, v);
    Rational neg_v_pow = 1;
    for (int j = 0; j < k; ++j) neg_v_pow *= -v;
    const double vd = v.convert_to<double>();

    double worst = 0.0;
    for (const Vector& y : y_grid) {
        if (y.size() != x.size()) throw std::invalid_argument("grid point dimension mismatch");
        double s = x.dot(y);
        double lhs = x_alpha * g.evaluate(s);
        double rhs = x_alpha * h.evaluate(s) / neg_v_pow.convert_to<double>() *
                     std::exp(-s * s / (2.0 * vd));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

Rational check_integration_by_parts(int k, const std::vector<Rational>& f_coeffs) {
    if (f_coeffs.size() > 9) throw std::invalid_argument("test polynomial degree must be <= 8");
    HermitePoly h = hermite_coeffs(k, Rational(1));

    // left: E[h_k(g) f(g)] via exact moments of the product polynomial
    Rational lhs = 0;
    for (std::size_t a = 0; a < h.coeffs.size(); ++a)
        for (std::size_t b = 0; b < f_coeffs.size(); ++b)
            lhs += h.coeffs[a] * f_coeffs[b] * gaussian_moment(static_cast<int>(a + b));

    // right: E[f^{(k)}(g)]
    std::vector<Rational> fk = f_coeffs;
    for (int j = 0; j < k; ++j) fk = polynomial_derivative(fk);
    Rational rhs = 0;
    for (std::size_t b = 0; b < fk.size(); ++b) rhs += fk[b] * gaussian_moment(static_cast<int>(b));

    Rational diff = lhs - rhs;
    return diff < 0 ? Rational(-diff) : diff;
}

}  // namespace hlab
