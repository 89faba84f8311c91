#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdopart/symlin.hpp"

namespace sdopart {

/// min <C + eps*Cbar, X>  s.t.  <A_i, X> = b_i, X psd, for eps in [lo, hi].
struct ParametricSDO {
  std::string name;
  Index n = 0;
  Index m = 0;
  std::vector<SymMatd> A;
  Vector b;
  SymMatd C;
  SymMatd Cbar;
  double lo = 0.0;
  double hi = 0.0;

  /// m x t(n) matrix with rows svec(A_i)^T.
  Matrix amat() const;
  SymMatd cost(double eps) const { return C + eps * Cbar; }
  /// max(1, largest absolute entry over A, b, C, Cbar); used to scale tolerances.
  double data_scale() const;
};

/// V = (svec X; y; svec S).
struct KKTPoint {
  Vector x;
  Vector y;
  Vector s;

  KKTPoint() = default;
  KKTPoint(Vector x_, Vector y_, Vector s_);

  Index n() const { return tri_order(x.size()); }
  Index m() const { return y.size(); }
  Index size() const { return x.size() + y.size() + s.size(); }
  SymMatd X() const { return smat(x); }
  SymMatd S() const { return smat(s); }

  Vector stacked() const;
  static KKTPoint unstack(const Vector& v, Index n, Index m);
};

/// Square system F(v, eps) = 0 with Jacobian in v and partial derivative in eps.
class DifferentiableMap {
 public:
  virtual ~DifferentiableMap() = default;

  virtual Index dim() const = 0;
  virtual Vector residual(const Vector& v, double eps) const = 0;
  virtual Matrix jacobian(const Vector& v, double eps) const = 0;
  virtual Vector deps(const Vector& v, double eps) const = 0;

  /// Scale for residual tolerances.
  virtual double scale() const { return 1.0; }

  /// Cone-specific quantities; maps without a cone report +inf eigenvalues and NaN objective.
  struct PointInfo {
    double objective;
    double min_eig_x;
    double min_eig_s;
  };
  virtual PointInfo info(const Vector& v, double eps) const;
};

using MapPtr = std::shared_ptr<const DifferentiableMap>;

/// The algebraic KKT system of a ParametricSDO.
class KktMap final : public DifferentiableMap {
 public:
  explicit KktMap(ParametricSDO prob);

  const ParametricSDO& problem() const { return prob_; }

  Index dim() const override { return prob_.m + 2 * tri(prob_.n); }
  Vector residual(const Vector& v, double eps) const override;
  Matrix jacobian(const Vector& v, double eps) const override;
  Vector deps(const Vector&, double) const override { return deps_; }
  double scale() const override { return scale_; }
  PointInfo info(const Vector& v, double eps) const override;

 private:
  ParametricSDO prob_;
  Matrix amat_;
  Vector deps_;
  double scale_;
};

/// Throws LinearDependenceError / DataError / DomainError.
void validate(const ParametricSDO& prob);

Vector kkt_residual(const ParametricSDO& prob, const KKTPoint& v, double eps);
Matrix kkt_jacobian(const ParametricSDO& prob, const KKTPoint& v, double eps);
Vector deps(const ParametricSDO& prob);
double objective_value(const ParametricSDO& prob, const KKTPoint& v, double eps);
double dual_value(const ParametricSDO& prob, const KKTPoint& v);

/// elliptope | elliptope-cut | circle-line | ellipse-circle
ParametricSDO builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// local-dim-demo | circle-isolated
MapPtr toy_map(const std::string& name);

}  // namespace sdopart
