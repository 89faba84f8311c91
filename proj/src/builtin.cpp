// Built-in problems and polynomial toy maps.
//
// Each LMI with entries affine in (x1, x2, ...) is cast to primal form: every
// fixed entry becomes <E_ij, X> = value with E_ij the symmetrized unit matrix
// (so that <E_ij, X> = X_ij), and every variable repeated across blocks is
// tied to its first occurrence by one coupling row.

#include <cmath>
#include <utility>

#include "sdopart/model.hpp"

namespace sdopart {

namespace {

struct Builder {
  Index n;
  std::vector<SymMatd> A;
  std::vector<double> b;

  explicit Builder(Index order) : n(order) {}

  // sum_k coef_k * X(i_k, j_k) = rhs
  void row(std::initializer_list<std::tuple<Index, Index, double>> terms, double rhs) {
    Matrix a = Matrix::Zero(n, n);
    for (const auto& [i, j, c] : terms) {
      if (i == j) {
        a(i, i) += c;
      } else {
        a(i, j) += c / 2.0;
        a(j, i) += c / 2.0;
      }
    }
    A.emplace_back(a);
    b.push_back(rhs);
  }
  void fix(Index i, Index j, double v) { row({{i, j, 1.0}}, v); }

  ParametricSDO finish(std::string name, const Matrix& c, const Matrix& cbar, double lo,
                       double hi) const {
    ParametricSDO p;
    p.name = std::move(name);
    p.n = n;
    p.m = static_cast<Index>(A.size());
    p.A = A;
    p.b = Eigen::Map<const Vector>(b.data(), static_cast<Index>(b.size()));
    p.C = SymMatd(c);
    p.Cbar = SymMatd(cbar);
    p.lo = lo;
    p.hi = hi;
    validate(p);
    return p;
  }
};

Matrix sym_entries(Index n, std::initializer_list<std::tuple<Index, Index, double>> entries) {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& [i, j, v] : entries) {
    m(i, j) = v;
    m(j, i) = v;
  }
  return m;
}

ParametricSDO make_elliptope() {
  Builder bld(3);
  for (Index i = 0; i < 3; ++i) bld.fix(i, i, 1.0);
  const Matrix c = sym_entries(3, {{0, 1, -1.0}, {0, 2, 1.0}, {1, 2, -1.0}});
  const Matrix cbar = sym_entries(3, {{0, 1, 2.0}, {0, 2, -2.0}});
  return bld.finish("elliptope", c, cbar, -1.0, 2.0);
}

// Elliptope plus x + y + z <= 1, the slack stored in X(3,3).
ParametricSDO make_elliptope_cut() {
  Builder bld(4);
  for (Index i = 0; i < 3; ++i) bld.fix(i, i, 1.0);
  for (Index i = 0; i < 3; ++i) bld.fix(i, 3, 0.0);
  bld.row({{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {3, 3, 1.0}}, 1.0);
  const Matrix c = sym_entries(4, {{0, 1, -1.0}, {0, 2, 1.0}, {1, 2, -1.0}});
  const Matrix cbar = sym_entries(4, {{0, 1, 2.0}, {0, 2, -2.0}});
  return bld.finish("elliptope-cut", c, cbar, -1.0, 2.0);
}

// x1 = X(0,1), x2 = X(0,2); second block [[x2, x1-1], [x1-1, x2]] in rows 3..4.
ParametricSDO make_circle_line() {
  Builder bld(5);
  for (Index i = 0; i < 3; ++i) bld.fix(i, i, 1.0);
  bld.fix(1, 2, 0.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 3; j < 5; ++j) bld.fix(i, j, 0.0);
  bld.row({{3, 3, 1.0}, {0, 2, -1.0}}, 0.0);
  bld.row({{4, 4, 1.0}, {0, 2, -1.0}}, 0.0);
  bld.row({{3, 4, 1.0}, {0, 1, -1.0}}, -1.0);
  // -2 eps x1 - 2 (1 - eps) x2
  const Matrix c = sym_entries(5, {{0, 2, -1.0}});
  const Matrix cbar = sym_entries(5, {{0, 1, -1.0}, {0, 2, 1.0}});
  return bld.finish("circle-line", c, cbar, -0.25, 1.25);
}

// x1 = X(0,1), x2 = X(0,2); second block [[1, x1/2, x2], [x1/2, 1, 0], [x2, 0, 1]].
ParametricSDO make_ellipse_circle() {
  Builder bld(6);
  for (Index i = 0; i < 3; ++i) bld.fix(i, i, 1.0);
  bld.fix(1, 2, 0.0);
  for (Index i = 3; i < 6; ++i) bld.fix(i, i, 1.0);
  bld.fix(4, 5, 0.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 3; j < 6; ++j) bld.fix(i, j, 0.0);
  bld.row({{3, 4, 1.0}, {0, 1, -0.5}}, 0.0);
  bld.row({{3, 5, 1.0}, {0, 2, -1.0}}, 0.0);
  // eps x1 + (1 - eps) x2
  const Matrix c = sym_entries(6, {{0, 2, 0.5}});
  const Matrix cbar = sym_entries(6, {{0, 1, 0.5}, {0, 2, -0.5}});
  return bld.finish("ellipse-circle", c, cbar, -1.0, 1.5);
}

// (x1^2 + x2^2 - eps, (x1^2 + x2^2 - 1) x1)
class LocalDimDemo final : public DifferentiableMap {
 public:
  Index dim() const override { return 2; }
  Vector residual(const Vector& v, double eps) const override {
    const double q = v(0) * v(0) + v(1) * v(1);
    return Vector{{q - eps, (q - 1.0) * v(0)}};
  }
  Matrix jacobian(const Vector& v, double) const override {
    const double x1 = v(0), x2 = v(1);
    const double q = x1 * x1 + x2 * x2;
    Matrix j(2, 2);
    j << 2 * x1, 2 * x2, q - 1.0 + 2 * x1 * x1, 2 * x1 * x2;
    return j;
  }
  Vector deps(const Vector&, double) const override { return Vector{{-1.0, 0.0}}; }
};

// ((x1^2 + x2^2 - 1)(x1 - x2), (x1^2 + x2^2 - 1)(x1 - eps))
class CircleIsolated final : public DifferentiableMap {
 public:
  Index dim() const override { return 2; }
  Vector residual(const Vector& v, double eps) const override {
    const double r = v(0) * v(0) + v(1) * v(1) - 1.0;
    return Vector{{r * (v(0) - v(1)), r * (v(0) - eps)}};
  }
  Matrix jacobian(const Vector& v, double eps) const override {
    const double x1 = v(0), x2 = v(1);
    const double r = x1 * x1 + x2 * x2 - 1.0;
    Matrix j(2, 2);
    j << 2 * x1 * (x1 - x2) + r, 2 * x2 * (x1 - x2) - r, 2 * x1 * (x1 - eps) + r,
        2 * x2 * (x1 - eps);
    return j;
  }
  Vector deps(const Vector& v, double) const override {
    const double r = v(0) * v(0) + v(1) * v(1) - 1.0;
    return Vector{{0.0, -r}};
  }
};

}  // namespace

std::vector<std::string> builtin_names() {
  return {"elliptope", "elliptope-cut", "circle-line", "ellipse-circle"};
}

ParametricSDO builtin(const std::string& name) {
  if (name == "elliptope") return make_elliptope();
  if (name == "elliptope-cut") return make_elliptope_cut();
  if (name == "circle-line") return make_circle_line();
  if (name == "ellipse-circle") return make_ellipse_circle();
  throw UnknownNameError("unknown builtin problem '" + name + "'");
}

MapPtr toy_map(const std::string& name) {
  if (name == "local-dim-demo") return std::make_shared<LocalDimDemo>();
  if (name == "circle-isolated") return std::make_shared<CircleIsolated>();
  throw UnknownNameError("unknown toy map '" + name + "'");
}

}  // namespace sdopart
