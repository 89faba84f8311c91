// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
// a Mehrotra predictor-corrector, for one PSD block, one nonnegative block and
// free variables. The Newton system is assembled densely and LU-factored once
// per iteration.

#include "sdopart/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace sdopart {

std::string to_string(IPMStatus s) {
  switch (s) {
    case IPMStatus::Optimal: return "optimal";
    case IPMStatus::MaxIters: return "max-iters";
    case IPMStatus::NumericalFailure: return "numerical-failure";
    case IPMStatus::InfeasibleOrUnbounded: return "infeasible-or-unbounded";
  }
  return "unknown";
}

void ConicProgram::check() const {
  if (cone.psd_dim < 0 || cone.nonneg_dim < 0 || cone.degree() < 1)
    throw DimensionError("ConicProgram: cone must have psd_dim + nonneg_dim >= 1");
  if (num_free < 0) throw DimensionError("ConicProgram: negative free-variable count");
  if (A.cols() != num_vars() || c.size() != num_vars() || A.rows() != b.size())
    throw DimensionError("ConicProgram: inconsistent data dimensions");
  if (A.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(A);
    const auto& s = svd.singularValues();
    if (A.rows() > A.cols() || !(s(s.size() - 1) > 1e-10 * s(0)))
      throw LinearDependenceError("ConicProgram: equality rows are linearly dependent");
  }
}

namespace {

struct Scaling {
  Matrix R;      // X = R L R^T, Z = R^{-T} L R^{-1}
  Matrix Rinv;
  Vector lam;    // NT eigenvalues (ascending irrelevant)
  Vector w;      // nonnegative block scaling
  Vector wlam;
};

bool compute_scaling(const ConeSpec& cone, const Vector& xk, const Vector& zk, Scaling& sc) {
  const Index p = cone.psd_dim, tp = cone.psd_len(), q = cone.nonneg_dim;
  if (p > 0) {
    const Matrix X = smat_matrix(Vector(xk.head(tp)));
    const Matrix Z = smat_matrix(Vector(zk.head(tp)));
    Eigen::LLT<Matrix> lx(X), lz(Z);
    if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    const Matrix Ls = lx.matrixL();
    const Matrix Lz = lz.matrixL();
    Eigen::JacobiSVD<Matrix> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sc.lam = svd.singularValues();
    if (!(sc.lam.minCoeff() > 0.0)) return false;
    const Vector isq = sc.lam.cwiseSqrt().cwiseInverse();
    sc.R = Ls * svd.matrixV() * isq.asDiagonal();
    // Lz^T Ls = U Lam V^T gives R^{-1} = Lam^{-1/2} U^T Lz^T.
    sc.Rinv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
  } else {
    sc.lam.resize(0);
  }
  if (q > 0) {
    const Vector xl = xk.segment(tp, q), zl = zk.segment(tp, q);
    if (!(xl.minCoeff() > 0.0) || !(zl.minCoeff() > 0.0)) return false;
    sc.w = (xl.array() / zl.array()).sqrt();
    sc.wlam = (xl.array() * zl.array()).sqrt();
  }
  return true;
}

// Largest alpha in [0, inf) keeping lam + alpha * d psd (scaled space), inf if unbounded.
double psd_step(const Vector& lam, const Matrix& d) {
  const Vector isq = lam.cwiseSqrt().cwiseInverse();
  const Matrix m = isq.asDiagonal() * d * isq.asDiagonal();
  const double g = min_eig_upper(Matrix((m + m.transpose()) / 2.0));
  return g < 0.0 ? -1.0 / g : std::numeric_limits<double>::infinity();
}

double ray_step(const Vector& v, const Vector& d) {
  double a = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < v.size(); ++i)
    if (d(i) < 0.0) a = std::min(a, -v(i) / d(i));
  return a;
}

double ray_step(double v, double d) {
  return d < 0.0 ? -v / d : std::numeric_limits<double>::infinity();
}

bool interior(const ConeSpec& cone, const Vector& xk, const Vector& zk) {
  const Index p = cone.psd_dim, tp = cone.psd_len(), q = cone.nonneg_dim;
  if (p > 0) {
    Eigen::LLT<Matrix> lx(smat_matrix(Vector(xk.head(tp)))), lz(smat_matrix(Vector(zk.head(tp))));
    if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  }
  if (q > 0 && (!(xk.segment(tp, q).minCoeff() > 0.0) || !(zk.segment(tp, q).minCoeff() > 0.0)))
    return false;
  return true;
}

struct Direction {
  Vector dx, dy, dz;
  double dtau = 0.0, dkap = 0.0;
};

}  // namespace

IPMSolution solve_conic(const ConicProgram& cp, const IPMSettings& st) {
  cp.check();
  if (!(st.tol_gap > 0.0) || !(st.tol_feas > 0.0) || st.max_iters < 1 || !(st.init_scale > 0.0))
    throw DomainError("IPMSettings: tolerances and iteration limit must be positive");

  const ConeSpec& cone = cp.cone;
  const Index p = cone.psd_dim, tp = cone.psd_len(), q = cone.nonneg_dim;
  const Index L = cone.cone_len(), N = cp.num_vars(), rows = cp.A.rows();
  const double nu = static_cast<double>(cone.degree());
  const Matrix& A = cp.A;
  const Vector& b = cp.b;
  const Vector& c = cp.c;

  Vector x = Vector::Zero(N), z = Vector::Zero(L), y = Vector::Zero(rows);
  if (p > 0) {
    x.head(tp) = st.init_scale * svec_upper(Matrix(Matrix::Identity(p, p)));
    z.head(tp) = x.head(tp);
  }
  x.segment(tp, q).setConstant(st.init_scale);
  z.segment(tp, q).setConstant(st.init_scale);
  double tau = 1.0, kap = 1.0;

  const double nb = 1.0 + b.norm(), nc = 1.0 + c.norm();
  const Index K = N + rows + L + 2;
  const Index o_dy = N, o_dz = N + rows, o_tau = N + rows + L, o_kap = o_tau + 1;

  IPMSolution sol;
  sol.status = IPMStatus::MaxIters;

  auto finish = [&](IPMStatus status, int iters) {
    sol.status = status;
    sol.iterations = iters;
    sol.x = x / tau;
    sol.y = y / tau;
    sol.z = z / tau;
    return sol;
  };

  Matrix Msys(K, K);
  for (int it = 0; it <= st.max_iters; ++it) {
    const Vector rp = A * x - b * tau;
    Vector rd = A.transpose() * y - c * tau;
    rd.head(L) += z;
    const double rg = c.dot(x) - b.dot(y) + kap;
    const double mu = (x.head(L).dot(z) + tau * kap) / (nu + 1.0);

    // Convergence test on the de-homogenized point.
    sol.primal_obj = c.dot(x) / tau;
    sol.dual_obj = b.dot(y) / tau;
    sol.primal_res = rp.norm() / tau / nb;
    sol.dual_res = rd.norm() / tau / nc;
    const double compl_ = x.head(L).dot(z) / (tau * tau);
    sol.rel_gap = std::max(std::abs(sol.primal_obj - sol.dual_obj), std::abs(compl_)) /
                  (1.0 + std::abs(sol.primal_obj));
    if (sol.primal_res <= st.tol_feas && sol.dual_res <= st.tol_feas && sol.rel_gap <= st.tol_gap)
      return finish(IPMStatus::Optimal, it);
    if (tau <= 1e-9 * std::max(1.0, kap) && mu <= 1e-9)
      return finish(IPMStatus::InfeasibleOrUnbounded, it);
    if (it == st.max_iters) break;

    Scaling sc;
    if (!compute_scaling(cone, x.head(L), z, sc)) return finish(IPMStatus::NumericalFailure, it);

    // Assemble the Newton matrix.
    Msys.setZero();
    Msys.block(0, 0, rows, N) = A;
    Msys.block(0, o_tau, rows, 1) = -b;
    Msys.block(rows, o_dy, N, rows) = A.transpose();
    Msys.block(rows, o_dz, L, L).setIdentity();
    Msys.block(rows, o_tau, N, 1) = -c;
    const Index r_g = rows + N;
    Msys.block(r_g, 0, 1, N) = c.transpose();
    Msys.block(r_g, o_dy, 1, rows) = -b.transpose();
    Msys(r_g, o_kap) = 1.0;
    const Index r_c = r_g + 1;
    Msys.block(r_c, 0, L, L).setIdentity();
    if (p > 0) {
      const Matrix W = sc.R * sc.R.transpose();
      Msys.block(r_c, o_dz, tp, tp) = skron_matrix(W, W);
    }
    for (Index i = 0; i < q; ++i) Msys(r_c + tp + i, o_dz + tp + i) = sc.w(i) * sc.w(i);
    const Index r_t = r_c + L;
    Msys(r_t, o_tau) = kap;
    Msys(r_t, o_kap) = tau;

    Eigen::PartialPivLU<Matrix> lu(Msys);
    // Exactly degenerate data can produce a zero pivot; fall back to a rank-revealing solve.
    std::optional<Eigen::CompleteOrthogonalDecomposition<Matrix>> cod;
    auto linsolve = [&](const Vector& rhs) -> Vector {
      if (!cod) {
        Vector sol_v = lu.solve(rhs);
        if (sol_v.allFinite() && (Msys * sol_v - rhs).norm() <= 1e-6 * (1.0 + rhs.norm()))
          return sol_v;
        cod.emplace(Msys);
      }
      return cod->solve(rhs);
    };

    // rc_psd is the scaled complementarity target (symmetric p x p), rc_nn and rc_t likewise.
    auto solve_dir = [&](double eta, const Matrix& rc_psd, const Vector& rc_nn, double rc_t,
                         Direction& d) {
      Vector rhs = Vector::Zero(K);
      rhs.segment(0, rows) = -eta * rp;
      rhs.segment(rows, N) = -eta * rd;
      rhs(r_g) = -eta * rg;
      if (p > 0) {
        Matrix xi(p, p);
        for (Index i = 0; i < p; ++i)
          for (Index j = 0; j < p; ++j) xi(i, j) = 2.0 * rc_psd(i, j) / (sc.lam(i) + sc.lam(j));
        rhs.segment(r_c, tp) = svec_upper(Matrix(sc.R * xi * sc.R.transpose()));
      }
      for (Index i = 0; i < q; ++i) rhs(r_c + tp + i) = sc.w(i) * rc_nn(i) / sc.wlam(i);
      rhs(r_t) = rc_t;
      const Vector sol_v = linsolve(rhs);
      if (!sol_v.allFinite()) return false;
      d.dx = sol_v.head(N);
      d.dy = sol_v.segment(o_dy, rows);
      d.dz = sol_v.segment(o_dz, L);
      d.dtau = sol_v(o_tau);
      d.dkap = sol_v(o_kap);
      return true;
    };

    // Scaled directions for the step-length test and the second-order term.
    auto scaled = [&](const Direction& d, Matrix& dxs, Matrix& dzs, Vector& dxn, Vector& dzn) {
      if (p > 0) {
        dxs = sc.Rinv * smat_matrix(Vector(d.dx.head(tp))) * sc.Rinv.transpose();
        dzs = sc.R.transpose() * smat_matrix(Vector(d.dz.head(tp))) * sc.R;
      }
      if (q > 0) {
        dxn = d.dx.segment(tp, q).cwiseQuotient(sc.w);
        dzn = d.dz.segment(tp, q).cwiseProduct(sc.w);
      }
    };

    auto max_step = [&](const Direction& d, const Matrix& dxs, const Matrix& dzs) {
      double a = std::numeric_limits<double>::infinity();
      if (p > 0) a = std::min({a, psd_step(sc.lam, dxs), psd_step(sc.lam, dzs)});
      if (q > 0) {
        a = std::min(a, ray_step(Vector(x.segment(tp, q)), Vector(d.dx.segment(tp, q))));
        a = std::min(a, ray_step(Vector(z.segment(tp, q)), Vector(d.dz.segment(tp, q))));
      }
      a = std::min({a, ray_step(tau, d.dtau), ray_step(kap, d.dkap)});
      return a;
    };

    // Predictor.
    Matrix rc_psd = p > 0 ? Matrix(-Matrix(sc.lam.cwiseAbs2().asDiagonal())) : Matrix();
    Vector rc_nn = q > 0 ? Vector(-sc.wlam.cwiseAbs2()) : Vector();
    Direction da;
    if (!solve_dir(1.0, rc_psd, rc_nn, -tau * kap, da)) return finish(IPMStatus::NumericalFailure, it);
    Matrix dxs, dzs;
    Vector dxn, dzn;
    scaled(da, dxs, dzs, dxn, dzn);
    const double alpha_a = std::min(1.0, max_step(da, dxs, dzs));
    const Vector xa = x.head(L) + alpha_a * da.dx.head(L);
    const Vector za = z + alpha_a * da.dz;
    const double mu_a =
        (xa.dot(za) + (tau + alpha_a * da.dtau) * (kap + alpha_a * da.dkap)) / (nu + 1.0);
    const double sigma = std::clamp(std::pow(std::max(mu_a, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term.
    if (p > 0) {
      const Matrix jordan = (dxs * dzs + dzs * dxs) / 2.0;
      rc_psd = sigma * mu * Matrix::Identity(p, p) - Matrix(sc.lam.cwiseAbs2().asDiagonal()) - jordan;
    }
    if (q > 0)
      rc_nn = (sigma * mu - sc.wlam.cwiseAbs2().array() - dxn.array() * dzn.array()).matrix();
    Direction d;
    if (!solve_dir(1.0 - sigma, rc_psd, rc_nn, sigma * mu - tau * kap - da.dtau * da.dkap, d))
      return finish(IPMStatus::NumericalFailure, it);
    scaled(d, dxs, dzs, dxn, dzn);
    double alpha = std::min(1.0, 0.99 * max_step(d, dxs, dzs));
    // The ratio test runs in scaled space; near the end the unscaled iterate can
    // still lose definiteness to roundoff, so back off until it is interior.
    Vector xn, zn;
    for (;;) {
      if (!(alpha > 1e-12)) return finish(IPMStatus::NumericalFailure, it);
      xn = x + alpha * d.dx;
      zn = z + alpha * d.dz;
      if (interior(cone, xn.head(L), zn) && tau + alpha * d.dtau > 0.0 && kap + alpha * d.dkap > 0.0)
        break;
      alpha *= 0.5;
    }
    x = xn;
    z = zn;
    y += alpha * d.dy;
    tau += alpha * d.dtau;
    kap += alpha * d.dkap;
    // Keep the homogeneous scale bounded.
    const double s = std::max(1.0, tau);
    if (s > 1e6) {
      x /= s;
      y /= s;
      z /= s;
      tau /= s;
      kap /= s;
    }
  }
  return finish(IPMStatus::MaxIters, st.max_iters);
}

KKTPoint solve_fixed(const ParametricSDO& prob, double eps, const IPMSettings& settings,
                     IPMSolution* info) {
  if (!(eps >= prob.lo && eps <= prob.hi))
    throw DomainError("solve: eps = " + std::to_string(eps) + " is outside the domain [" +
                      std::to_string(prob.lo) + ", " + std::to_string(prob.hi) + "]");
  ConicProgram cp;
  cp.cone = {prob.n, 0};
  cp.A = prob.amat();
  cp.b = prob.b;
  cp.c = svec(prob.cost(eps));
  const IPMSolution sol = solve_conic(cp, settings);
  if (info) *info = sol;
  if (sol.status != IPMStatus::Optimal)
    throw SolverError("solve at eps = " + std::to_string(eps) + ": " + to_string(sol.status) +
                      " after " + std::to_string(sol.iterations) + " iterations");
  return polish(prob, KKTPoint(sol.x, sol.y, sol.z), eps);
}

KKTPoint polish(const ParametricSDO& prob, const KKTPoint& v0, double eps, int max_iters) {
  // The interior-point iterate leaves an O(sqrt(mu)) complementarity residual in
  // the off-diagonal blocks; Newton steps on F remove it where J is regular.
  const Index n = prob.n, m = prob.m;
  const double scale = prob.data_scale();
  const double psd_floor = -1e-10 * scale;
  Vector v = v0.stacked();
  double res = kkt_residual(prob, v0, eps).norm();
  for (int k = 0; k < max_iters && res > 1e-15 * scale; ++k) {
    const KKTPoint cur = KKTPoint::unstack(v, n, m);
    const Matrix J = kkt_jacobian(prob, cur, eps);
    Eigen::PartialPivLU<Matrix> lu(J);
    const Vector dv = lu.solve(-kkt_residual(prob, cur, eps));
    if (!dv.allFinite() || dv.norm() > 1e-2 * (1.0 + v.norm())) break;
    const KKTPoint next = KKTPoint::unstack(v + dv, n, m);
    const double r = kkt_residual(prob, next, eps).norm();
    if (!(r < res)) break;
    if (min_eig_upper(next.X().matrix()) < psd_floor || min_eig_upper(next.S().matrix()) < psd_floor)
      break;
    v += dv;
    res = r;
  }
  return KKTPoint::unstack(v, n, m);
}

double solve_aux(const ParametricSDO& prob, const Matrix& q_n, AuxSense sense,
                 const IPMSettings& settings) {
  const Index n = prob.n, m = prob.m, t = tri(n);
  if (q_n.rows() != n) throw DimensionError("solve_aux: Q_N must have n rows");
  const Index r = q_n.cols();
  const Index tr = tri(r);

  // Columns: svec U | s_lo, s_hi | y | eps.
  const Index ncol = tr + 2 + m + 1;
  const Index c_y = tr + 2, c_eps = tr + 2 + m;
  Matrix M = Matrix::Zero(t + 2, ncol);
  Vector rhs(t + 2);
  if (r > 0) {
    Vector e = Vector::Zero(tr);
    for (Index j = 0; j < tr; ++j) {
      e(j) = 1.0;
      M.block(0, j, t, 1) = svec_upper(Matrix(q_n * smat_matrix(e) * q_n.transpose()));
      e(j) = 0.0;
    }
  }
  M.block(0, c_y, t, m) = prob.amat().transpose();
  M.block(0, c_eps, t, 1) = -svec(prob.Cbar);
  rhs.head(t) = svec(prob.C);
  // eps - s_lo = lo, eps + s_hi = hi
  M(t, tr) = -1.0;
  M(t, c_eps) = 1.0;
  rhs(t) = prob.lo;
  M(t + 1, tr + 1) = 1.0;
  M(t + 1, c_eps) = 1.0;
  rhs(t + 1) = prob.hi;

  // The svec rows outnumber the unknowns; keep an orthonormal basis of the row range.
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Index k = 0;
  while (k < s.size() && s(k) > 1e-9 * s(0)) ++k;
  const Matrix Uk = svd.matrixU().leftCols(k);
  const Vector proj = Uk.transpose() * rhs;
  const double incons = (rhs - Uk * proj).norm();
  if (incons > 1e-6 * (1.0 + rhs.norm()))
    throw SolverError("auxiliary problem: constraint system is inconsistent (residual " +
                      std::to_string(incons) + ")");

  ConicProgram cp;
  cp.cone = {r, 2};
  cp.num_free = m + 1;
  cp.A = Uk.transpose() * M;
  cp.b = proj;
  cp.c = Vector::Zero(ncol);
  cp.c(c_eps) = sense == AuxSense::Inf ? 1.0 : -1.0;
  const IPMSolution sol = solve_conic(cp, settings);
  if (sol.status != IPMStatus::Optimal)
    throw SolverError(std::string("auxiliary problem (") + (sense == AuxSense::Inf ? "inf" : "sup") +
                      "): " + to_string(sol.status));
  return std::clamp(sol.x(c_eps), prob.lo, prob.hi);
}

}  // namespace sdopart
