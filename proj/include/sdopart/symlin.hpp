#pragma once

// Dense symmetric linear algebra used throughout: the svec/smat isometry,
// the symmetric Kronecker product, and rank / null-space utilities.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "sdopart/errors.hpp"

namespace sdopart {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

/// Length of svec(M) for an n x n symmetric M.
constexpr Index tri(Index n) { return n * (n + 1) / 2; }

/// Inverse of tri(); returns -1 when t is not a triangular number.
inline Index tri_order(Index t) {
  if (t < 0) return -1;
  const auto n = static_cast<Index>(std::llround((std::sqrt(8.0 * double(t) + 1.0) - 1.0) / 2.0));
  return tri(n) == t ? n : -1;
}

/// Dense real symmetric matrix. Symmetry is exact after construction.
template <typename Scalar>
class SymMat {
 public:
  using MatrixType = MatrixX<Scalar>;

  SymMat() : m_(MatrixType::Zero(1, 1)) {}

  explicit SymMat(Index n) : m_(MatrixType::Zero(n, n)) {
    if (n < 1) throw DimensionError("SymMat: order must be positive");
  }

  /// Accepts m when |m - m^T| <= tol * max(1, max|m|) entrywise, then stores
  /// the exact average (m + m^T) / 2.
  template <typename Derived>
  explicit SymMat(const Eigen::MatrixBase<Derived>& m, Scalar tol = Scalar(0)) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw DimensionError("SymMat: expected a non-empty square matrix, got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    const MatrixType full = m;
    const Scalar scale = std::max(Scalar(1), full.cwiseAbs().maxCoeff());
    const Scalar asym = (full - full.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= tol * scale)) throw DataError("SymMat: input matrix is not symmetric");
    m_ = (full + full.transpose()) / Scalar(2);
  }

  static SymMat identity(Index n) { return SymMat(MatrixType::Identity(n, n)); }
  static SymMat zero(Index n) { return SymMat(n); }

  Index dim() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

  /// Writes entry (i, j) and its mirror.
  void set(Index i, Index j, Scalar v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  friend SymMat operator+(const SymMat& a, const SymMat& b) {
    check_same(a, b);
    SymMat r(a);
    r.m_ += b.m_;
    return r;
  }
  friend SymMat operator-(const SymMat& a, const SymMat& b) {
    check_same(a, b);
    SymMat r(a);
    r.m_ -= b.m_;
    return r;
  }
  friend SymMat operator*(Scalar s, const SymMat& a) {
    SymMat r(a);
    r.m_ *= s;
    return r;
  }
  friend bool operator==(const SymMat& a, const SymMat& b) { return a.m_ == b.m_; }

 private:
  static void check_same(const SymMat& a, const SymMat& b) {
    if (a.dim() != b.dim()) throw DimensionError("SymMat: order mismatch");
  }

  MatrixType m_;
};

using SymMatd = SymMat<double>;

/// svec of the upper triangle of a square matrix (assumed symmetric).
/// Row-major upper triangle with off-diagonal entries scaled by sqrt(2).
template <typename Derived>
VectorX<typename Derived::Scalar> svec_upper(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Index n = m.rows();
  if (m.cols() != n) throw DimensionError("svec: matrix is not square");
  const Scalar r2 = std::sqrt(Scalar(2));
  VectorX<Scalar> v(tri(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    v(k++) = m(i, i);
    for (Index j = i + 1; j < n; ++j) v(k++) = r2 * m(i, j);
  }
  return v;
}

template <typename Scalar>
VectorX<Scalar> svec(const SymMat<Scalar>& m) {
  return svec_upper(m.matrix());
}

/// Inverse of svec, as a plain matrix (exactly symmetric).
template <typename Derived>
MatrixX<typename Derived::Scalar> smat_matrix(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Index n = tri_order(v.size());
  if (n < 1)
    throw DimensionError("smat: length " + std::to_string(v.size()) +
                         " is not of the form n(n+1)/2");
  const Scalar r2 = std::sqrt(Scalar(2));
  MatrixX<Scalar> m(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    m(i, i) = v(k++);
    for (Index j = i + 1; j < n; ++j) {
      const Scalar x = v(k++) / r2;
      m(i, j) = x;
      m(j, i) = x;
    }
  }
  return m;
}

template <typename Derived>
SymMat<typename Derived::Scalar> smat(const Eigen::MatrixBase<Derived>& v) {
  return SymMat<typename Derived::Scalar>(smat_matrix(v));
}

/// (K1 (x)_s K2) svec(H) = 1/2 svec(K2 H K1^T + K1 H K2^T).
template <typename D1, typename D2, typename D3>
VectorX<typename D1::Scalar> skron_apply(const Eigen::MatrixBase<D1>& k1,
                                         const Eigen::MatrixBase<D2>& k2,
                                         const Eigen::MatrixBase<D3>& h) {
  using Scalar = typename D1::Scalar;
  const Index n = h.rows();
  if (h.cols() != n || k1.rows() != n || k1.cols() != n || k2.rows() != n || k2.cols() != n)
    throw DimensionError("skron_apply: K1, K2 and H must all be n x n");
  const MatrixX<Scalar> p = k2 * h * k1.transpose();
  return svec_upper(MatrixX<Scalar>((p + p.transpose()) / Scalar(2)));
}

template <typename D1, typename D2, typename Scalar>
VectorX<Scalar> skron_apply(const Eigen::MatrixBase<D1>& k1, const Eigen::MatrixBase<D2>& k2,
                            const SymMat<Scalar>& h) {
  return skron_apply(k1, k2, h.matrix());
}

/// The t(n) x t(n) matrix of v -> skron_apply(K1, K2, smat(v)).
template <typename D1, typename D2>
MatrixX<typename D1::Scalar> skron_matrix(const Eigen::MatrixBase<D1>& k1,
                                          const Eigen::MatrixBase<D2>& k2) {
  using Scalar = typename D1::Scalar;
  const Index n = k1.rows();
  if (k1.cols() != n || k2.rows() != n || k2.cols() != n)
    throw DimensionError("skron_matrix: K1 and K2 must be square of equal order");
  const Index t = tri(n);
  MatrixX<Scalar> out(t, t);
  VectorX<Scalar> e = VectorX<Scalar>::Zero(t);
  for (Index j = 0; j < t; ++j) {
    e(j) = Scalar(1);
    out.col(j) = skron_apply(k1, k2, smat_matrix(e));
    e(j) = Scalar(0);
  }
  return out;
}

template <typename Scalar>
struct EigSym {
  VectorX<Scalar> values;   // ascending
  MatrixX<Scalar> vectors;  // orthonormal columns
};

template <typename Scalar>
EigSym<Scalar> eig_sym(const SymMat<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Derived>
typename Derived::Scalar min_eig_upper(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace detail {
template <typename Scalar>
Scalar rank_cut(const VectorX<Scalar>& ascending, Scalar tau) {
  const Scalar norm = std::max(std::abs(ascending(0)), std::abs(ascending(ascending.size() - 1)));
  return tau * std::max(Scalar(1), norm);
}
}  // namespace detail

/// Number of eigenvalues with |lambda| > tau * max(1, ||M||_2).
template <typename Scalar>
Index numerical_rank(const SymMat<Scalar>& m, Scalar tau) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m.matrix(), Eigen::EigenvaluesOnly);
  const auto& lam = es.eigenvalues();
  const Scalar cut = detail::rank_cut<Scalar>(lam, tau);
  return (lam.array().abs() > cut).count();
}

/// Orthonormal basis of the range of a PSD matrix: eigenvectors with
/// lambda > tau * max(1, ||M||_2). Throws NotPsdError below -that cut.
template <typename Scalar>
MatrixX<Scalar> col_space_basis(const SymMat<Scalar>& m, Scalar tau) {
  const auto es = eig_sym(m);
  const Scalar cut = detail::rank_cut<Scalar>(es.values, tau);
  if (es.values(0) < -cut) throw NotPsdError("col_space_basis: matrix has a negative eigenvalue");
  const Index n = m.dim();
  Index first = 0;
  while (first < n && es.values(first) <= cut) ++first;
  return es.vectors.rightCols(n - first);
}

template <typename Derived>
typename Derived::Scalar min_singular_value(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Scalar(0);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a);
  const auto& s = svd.singularValues();
  // JacobiSVD returns min(rows, cols) values; a wide or tall matrix has
  // a zero singular value in the sense used here only if it is rank deficient.
  return s(s.size() - 1);
}

/// Solves A x = rhs; throws SingularMatrixError when
/// sigma_min(A) < 1e-14 * ||A||_2.
template <typename D1, typename D2>
VectorX<typename D1::Scalar> solve_dense(const Eigen::MatrixBase<D1>& a,
                                         const Eigen::MatrixBase<D2>& rhs) {
  using Scalar = typename D1::Scalar;
  if (a.rows() != a.cols() || a.rows() != rhs.size())
    throw DimensionError("solve_dense: dimension mismatch");
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return VectorX<Scalar>();
  if (!(s(s.size() - 1) >= Scalar(1e-14) * s(0)) || s(0) == Scalar(0))
    throw SingularMatrixError("solve_dense: matrix is numerically singular");
  return svd.solve(rhs);
}

/// Orthonormal basis of {u : ||A u|| <= tau ||A||_2}, from the right
/// singular vectors with sigma <= tau * sigma_max.
template <typename Derived>
MatrixX<typename Derived::Scalar> null_space_basis(const Eigen::MatrixBase<Derived>& a,
                                                   typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  const Index cols = a.cols();
  if (cols == 0) return MatrixX<Scalar>(0, 0);
  MatrixX<Scalar> padded = a;
  if (a.rows() < cols) {
    // Pad with zero rows so that every right singular vector is computed.
    padded = MatrixX<Scalar>::Zero(cols, cols);
    padded.topRows(a.rows()) = a;
  }
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(padded, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Scalar cut = tau * s(0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  if (s(0) == Scalar(0)) rank = 0;
  return svd.matrixV().rightCols(cols - rank);
}

}  // namespace sdopart
