#include "sdopart/model.hpp"

#include <cmath>
#include <limits>

namespace sdopart {

Matrix ParametricSDO::amat() const {
  Matrix out(m, tri(n));
  for (Index i = 0; i < m; ++i) out.row(i) = svec(A[static_cast<size_t>(i)]).transpose();
  return out;
}

double ParametricSDO::data_scale() const {
  double s = 1.0;
  for (const auto& a : A) s = std::max(s, a.matrix().cwiseAbs().maxCoeff());
  if (b.size() > 0) s = std::max(s, b.cwiseAbs().maxCoeff());
  s = std::max(s, C.matrix().cwiseAbs().maxCoeff());
  s = std::max(s, Cbar.matrix().cwiseAbs().maxCoeff());
  return s;
}

KKTPoint::KKTPoint(Vector x_, Vector y_, Vector s_)
    : x(std::move(x_)), y(std::move(y_)), s(std::move(s_)) {
  if (x.size() != s.size() || tri_order(x.size()) < 1)
    throw DimensionError("KKTPoint: x and s must be svec vectors of the same order");
}

Vector KKTPoint::stacked() const {
  Vector v(size());
  v << x, y, s;
  return v;
}

KKTPoint KKTPoint::unstack(const Vector& v, Index n, Index m) {
  const Index t = tri(n);
  if (v.size() != m + 2 * t) throw DimensionError("KKTPoint::unstack: length mismatch");
  return KKTPoint(v.head(t), v.segment(t, m), v.tail(t));
}

DifferentiableMap::PointInfo DifferentiableMap::info(const Vector&, double) const {
  const double inf = std::numeric_limits<double>::infinity();
  return {std::numeric_limits<double>::quiet_NaN(), inf, inf};
}

void validate(const ParametricSDO& prob) {
  if (prob.n < 1) throw DataError("problem: n must be positive");
  if (prob.m < 1) throw DataError("problem: m must be positive");
  if (static_cast<Index>(prob.A.size()) != prob.m || prob.b.size() != prob.m)
    throw DataError("problem: expected " + std::to_string(prob.m) + " constraint matrices and entries of b");
  for (size_t i = 0; i < prob.A.size(); ++i)
    if (prob.A[i].dim() != prob.n)
      throw DataError("problem: A[" + std::to_string(i) + "] has order " +
                      std::to_string(prob.A[i].dim()) + ", expected " + std::to_string(prob.n));
  if (prob.C.dim() != prob.n) throw DataError("problem: C has the wrong order");
  if (prob.Cbar.dim() != prob.n) throw DataError("problem: Cbar has the wrong order");
  if (!std::isfinite(prob.lo) || !std::isfinite(prob.hi) || !(prob.lo < prob.hi))
    throw DataError("problem: domain must be a finite interval with lo < hi");
  if (prob.m > tri(prob.n))
    throw LinearDependenceError("problem: more constraints than svec dimension");
  const Matrix a = prob.amat();
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0)))
    throw LinearDependenceError("problem: constraint matrices are linearly dependent");
}

namespace {

void check_point(const ParametricSDO& prob, const KKTPoint& v) {
  if (v.x.size() != tri(prob.n) || v.s.size() != tri(prob.n) || v.y.size() != prob.m)
    throw DimensionError("KKT point does not match problem dimensions");
}

Vector residual_impl(const Matrix& amat, const Vector& b, const Vector& cvec, const Vector& x,
                     const Vector& y, const Vector& s) {
  const Index m = amat.rows(), t = amat.cols();
  Vector r(m + 2 * t);
  r.head(m) = amat * x - b;
  r.segment(m, t) = amat.transpose() * y + s - cvec;
  const Matrix X = smat_matrix(x), S = smat_matrix(s);
  const Matrix xs = X * S;
  r.tail(t) = svec_upper(Matrix((xs + xs.transpose()) / 2.0));
  return r;
}

Matrix jacobian_impl(const Matrix& amat, const Vector& x, const Vector& s) {
  const Index m = amat.rows(), t = amat.cols();
  const Index n = tri_order(t);
  const Matrix I = Matrix::Identity(n, n);
  Matrix J = Matrix::Zero(m + 2 * t, m + 2 * t);
  J.block(0, 0, m, t) = amat;
  J.block(m, t, t, m) = amat.transpose();
  J.block(m, t + m, t, t).setIdentity();
  J.block(m + t, 0, t, t) = skron_matrix(smat_matrix(s), I);
  J.block(m + t, t + m, t, t) = skron_matrix(smat_matrix(x), I);
  return J;
}

}  // namespace

Vector kkt_residual(const ParametricSDO& prob, const KKTPoint& v, double eps) {
  check_point(prob, v);
  return residual_impl(prob.amat(), prob.b, svec(prob.cost(eps)), v.x, v.y, v.s);
}

Matrix kkt_jacobian(const ParametricSDO& prob, const KKTPoint& v, double) {
  check_point(prob, v);
  return jacobian_impl(prob.amat(), v.x, v.s);
}

Vector deps(const ParametricSDO& prob) {
  const Index t = tri(prob.n);
  Vector d = Vector::Zero(prob.m + 2 * t);
  d.segment(prob.m, t) = -svec(prob.Cbar);
  return d;
}

double objective_value(const ParametricSDO& prob, const KKTPoint& v, double eps) {
  if (v.x.size() != tri(prob.n)) throw DimensionError("objective_value: x has the wrong length");
  return svec(prob.cost(eps)).dot(v.x);
}

double dual_value(const ParametricSDO& prob, const KKTPoint& v) {
  if (v.y.size() != prob.m) throw DimensionError("dual_value: y has the wrong length");
  return prob.b.dot(v.y);
}

KktMap::KktMap(ParametricSDO prob) : prob_(std::move(prob)) {
  validate(prob_);
  amat_ = prob_.amat();
  deps_ = sdopart::deps(prob_);
  scale_ = prob_.data_scale();
}

Vector KktMap::residual(const Vector& v, double eps) const {
  const Index t = tri(prob_.n), m = prob_.m;
  if (v.size() != dim()) throw DimensionError("KktMap::residual: length mismatch");
  return residual_impl(amat_, prob_.b, svec(prob_.cost(eps)), v.head(t), v.segment(t, m),
                       v.tail(t));
}

Matrix KktMap::jacobian(const Vector& v, double) const {
  const Index t = tri(prob_.n);
  if (v.size() != dim()) throw DimensionError("KktMap::jacobian: length mismatch");
  return jacobian_impl(amat_, v.head(t), v.tail(t));
}

DifferentiableMap::PointInfo KktMap::info(const Vector& v, double eps) const {
  const Index t = tri(prob_.n);
  const Matrix X = smat_matrix(Vector(v.head(t)));
  const Matrix S = smat_matrix(Vector(v.tail(t)));
  return {svec(prob_.cost(eps)).dot(v.head(t)), min_eig_upper(X), min_eig_upper(S)};
}

}  // namespace sdopart
