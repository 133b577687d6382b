#pragma once

#include <Eigen/Dense>
#include <utility>

#include "hlab/rng.hpp"

namespace hlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Ascending eigenvalues with matching orthonormal eigenvector columns.
// Contract: ||Q^T Q - I||_max <= 1e-9 and ||Q diag(l) Q^T - W||_max <= 1e-8 * max(1, ||W||_max).
struct EigenDecomposition {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // column i pairs with eigenvalues[i]
};

// Throws std::invalid_argument on non-symmetric or non-finite input.
void require_symmetric_finite(const Matrix& w);

// Full symmetric eigendecomposition (LAPACK dsyevd). Eigenvector columns carry a
// deterministic sign convention (first component over 1e-12 in magnitude is positive);
// eigenvalues within 1e-12 of each other are ordered by eigenvector lexicographic order.
EigenDecomposition eigendecompose(const Matrix& w);

// Eigenvalues only, ascending.
Vector symmetric_eigenvalues(const Matrix& w);

// (eigenvalue, unit eigenvector) at the top or bottom of the spectrum.
std::pair<double, Vector> extremal_eigenpair(const Matrix& w, bool largest);

// Compact Householder QR (LAPACK dgeqrf). Products with Q / Q^T are applied
// from the stored reflectors without forming Q.
class QRFactor {
  public:
    explicit QRFactor(Matrix a);

    int rows() const { return static_cast<int>(a_.rows()); }
    int cols() const { return static_cast<int>(a_.cols()); }

    Vector apply_qt(const Vector& x) const;  // Q^T x, length rows()
    Vector apply_q(const Vector& x) const;   // Q x
    Matrix q_columns(int k) const;           // first k columns of Q, k <= rows()
    double r_diagonal(int i) const { return a_(i, i); }
    double min_abs_r_diagonal() const;

  private:
    Matrix a_;    // reflectors below diagonal, R on/above
    Vector tau_;
};

// Haar-distributed random orthogonal matrix in factored form: QR of an i.i.d.
// Gaussian matrix with the R-diagonal sign absorbed so the law is uniform.
class HaarOrthogonal {
  public:
    HaarOrthogonal(int m, Rng& rng);

    int dim() const { return qr_.rows(); }
    Vector apply_qt(const Vector& x) const;  // H^T x
    Matrix materialize() const;

  private:
    QRFactor qr_;
    Vector signs_;
};

}  // namespace hlab
