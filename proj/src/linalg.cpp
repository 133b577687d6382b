#include "hlab/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hlab {

void require_symmetric_finite(const Matrix& w) {
    if (w.rows() != w.cols() || w.rows() < 1)
        throw std::invalid_argument("matrix must be square and nonempty");
    if (!w.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = i + 1; j < w.cols(); ++j)
            if (w(i, j) != w(j, i)) throw std::invalid_argument("matrix is not symmetric");
}

namespace {

void fix_column_signs(Matrix& q) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
            if (std::abs(q(i, j)) > 1e-12) {
                if (q(i, j) < 0.0) q.col(j) = -q.col(j);
                break;
            }
        }
    }
}

bool lex_less(const Matrix& q, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        if (q(i, a) < q(i, b)) return true;
        if (q(i, a) > q(i, b)) return false;
    }
    return false;
}

}  // namespace

EigenDecomposition eigendecompose(const Matrix& w) {
    require_symmetric_finite(w);
    const lapack_int n = static_cast<lapack_int>(w.rows());
    Matrix q = w;
    Vector lam(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, q.data(), n, lam.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));

    fix_column_signs(q);

    // resolve ordering within near-degenerate eigenvalue clusters
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i + 1;
        while (j < n && lam(j) - lam(j - 1) <= 1e-12) ++j;
        if (j - i > 1) {
            std::vector<Eigen::Index> idx(j - i);
            for (Eigen::Index k = 0; k < j - i; ++k) idx[k] = i + k;
            std::sort(idx.begin(), idx.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return lex_less(q, a, b); });
            Matrix cols(n, j - i);
            Vector vals(j - i);
            for (Eigen::Index k = 0; k < j - i; ++k) {
                cols.col(k) = q.col(idx[k]);
                vals(k) = lam(idx[k]);
            }
            q.block(0, i, n, j - i) = cols;
            lam.segment(i, j - i) = vals;
        }
        i = j;
    }
    return {std::move(lam), std::move(q)};
}

Vector symmetric_eigenvalues(const Matrix& w) {
    require_symmetric_finite(w);
    const lapack_int n = static_cast<lapack_int>(w.rows());
    Matrix a = w;
    Vector lam(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, lam.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return lam;
}

std::pair<double, Vector> extremal_eigenpair(const Matrix& w, bool largest) {
    require_symmetric_finite(w);
    const lapack_int n = static_cast<lapack_int>(w.rows());
    Matrix a = w;
    Vector lam(n);
    Matrix z(n, 1);
    lapack_int m = 0;
    std::vector<lapack_int> isuppz(2);
    lapack_int il = largest ? n : 1;
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0,
                                     il, il, 0.0, &m, lam.data(), z.data(), n, isuppz.data());
    if (info != 0 || m != 1) throw std::runtime_error("dsyevr failed, info=" + std::to_string(info));
    Vector v = z.col(0);
    return {lam(0), std::move(v)};
}

QRFactor::QRFactor(Matrix a) : a_(std::move(a)), tau_(std::min(a_.rows(), a_.cols())) {
    const lapack_int m = static_cast<lapack_int>(a_.rows());
    const lapack_int n = static_cast<lapack_int>(a_.cols());
    lapack_int info = LAPACKE_dgeqrf(LAPACK_COL_MAJOR, m, n, a_.data(), m, tau_.data());
    if (info != 0) throw std::runtime_error("dgeqrf failed, info=" + std::to_string(info));
}

Vector QRFactor::apply_qt(const Vector& x) const {
    const lapack_int m = static_cast<lapack_int>(a_.rows());
    const lapack_int k = static_cast<lapack_int>(tau_.size());
    Vector y = x;
    lapack_int info = LAPACKE_dormqr(LAPACK_COL_MAJOR, 'L', 'T', m, 1, k, a_.data(), m,
                                     tau_.data(), y.data(), m);
    if (info != 0) throw std::runtime_error("dormqr failed, info=" + std::to_string(info));
    return y;
}

Vector QRFactor::apply_q(const Vector& x) const {
    const lapack_int m = static_cast<lapack_int>(a_.rows());
    const lapack_int k = static_cast<lapack_int>(tau_.size());
    Vector y = x;
    lapack_int info = LAPACKE_dormqr(LAPACK_COL_MAJOR, 'L', 'N', m, 1, k, a_.data(), m,
                                     tau_.data(), y.data(), m);
    if (info != 0) throw std::runtime_error("dormqr failed, info=" + std::to_string(info));
    return y;
}

Matrix QRFactor::q_columns(int k) const {
    const lapack_int m = static_cast<lapack_int>(a_.rows());
    const lapack_int nref = static_cast<lapack_int>(tau_.size());
    Matrix q = Matrix::Zero(m, m);
    q.block(0, 0, m, a_.cols()) = a_;
    lapack_int info = LAPACKE_dorgqr(LAPACK_COL_MAJOR, m, std::min<lapack_int>(m, k), nref,
                                     q.data(), m, tau_.data());
    if (info != 0) throw std::runtime_error("dorgqr failed, info=" + std::to_string(info));
    return q.leftCols(k);
}

double QRFactor::min_abs_r_diagonal() const {
    double m = std::abs(a_(0, 0));
    for (Eigen::Index i = 1; i < tau_.size(); ++i) m = std::min(m, std::abs(a_(i, i)));
    return m;
}

HaarOrthogonal::HaarOrthogonal(int m, Rng& rng)
    : qr_([&] {
          Matrix g(m, m);
          for (int j = 0; j < m; ++j)
              for (int i = 0; i < m; ++i) g(i, j) = rng.gaussian();
          return g;
      }()),
      signs_(m) {
    for (int i = 0; i < m; ++i) signs_(i) = qr_.r_diagonal(i) >= 0.0 ? 1.0 : -1.0;
}

Vector HaarOrthogonal::apply_qt(const Vector& x) const {
    Vector y = qr_.apply_qt(x);
    return signs_.asDiagonal() * y;
}

Matrix HaarOrthogonal::materialize() const {
    Matrix q = qr_.q_columns(dim());
    return q * signs_.asDiagonal();
}

}  // namespace hlab
