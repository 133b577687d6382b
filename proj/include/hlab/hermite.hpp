#pragma once

#include <vector>

#include "hlab/linalg.hpp"
#include "hlab/spike_priors.hpp"  // BigInt, Rational

namespace hlab {

// Monic variance-v Hermite polynomial h_k(x; v), exact rational coefficients.
// Negative v gives the umbral family; the same recursions apply.
struct HermitePoly {
    int degree = 0;
    Rational variance = 0;
    std::vector<Rational> coeffs;  // coeffs[j] multiplies x^j; parity gaps are zero

    double evaluate(double x) const;
    Rational evaluate_exact(const Rational& x) const;
};

// h_{k+1} = x h_k - v k h_{k-1}
HermitePoly hermite_coeffs(int k, const Rational& v);

// h_{k+1} = x h_k - v d/dx[h_k]; same polynomials, kept as a second route
HermitePoly hermite_coeffs_derivative_recursion(int k, const Rational& v);

// d/dx h_k = k h_{k-1}, returned as coefficients of the derivative of p
std::vector<Rational> polynomial_derivative(const std::vector<Rational>& coeffs);

struct MultiIndex {
    std::vector<int> alpha;

    int order() const;        // |alpha|
    BigInt factorial() const; // alpha!
};

// product over coordinates of h_{alpha_i}(x_i; 1); normalized divides by sqrt(alpha!)
double evaluate_multi(const MultiIndex& alpha, const Vector& x, bool normalized);

BigInt double_factorial(int m);  // m!! with (-1)!! = 0!! = 1

// E_{g ~ N(0, sigma^2)}[h_k(g; v)] = 0 (k odd), (k-1)!! (sigma^2 - v)^{k/2} (k even);
// holds for sigma^2 < v as well.
double mismatched_expectation(int k, double v, double sigma2);
Rational mismatched_expectation_exact(int k, const Rational& v, const Rational& sigma2);

// E[g^m] for g ~ N(0,1): (m-1)!! for even m, 0 for odd.
Rational gaussian_moment(int m);

// Max residual over the grid between the symbolic k-th derivative of
// exp(-x^2/(2v)) and (-v)^{-k} h_k(x; v) exp(-x^2/(2v)). The derivative is
// carried exactly on (polynomial, Gaussian-exponent) pairs.
double check_rodrigues(int k, const Rational& v, const std::vector<double>& grid);

// Same for d^alpha/dy^alpha exp(-<x,y>^2/(2v)) against
// (-v)^{-|alpha|} x^alpha h_{|alpha|}(<x,y>; v) exp(-<x,y>^2/(2v)),
// evaluated at the given y points.
double check_multidim_rodrigues(const MultiIndex& alpha, const Vector& x, const Rational& v,
                                const std::vector<Vector>& y_grid);

// |E[h_k(g;1) f(g)] - E[f^{(k)}(g)]| with both sides evaluated in exact Gaussian
// moment arithmetic; f given by rational coefficients, degree <= 8.
Rational check_integration_by_parts(int k, const std::vector<Rational>& f_coeffs);

}  // namespace hlab
