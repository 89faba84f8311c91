#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "sdopart/symlin.hpp"

using namespace sdopart;
using sdopart::testing::Gen;

namespace {

SymMatd canonical(Index n, Index i, Index j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  return SymMatd(e);
}

}  // namespace

TEST_CASE("SymMat rejects asymmetric input and keeps exact symmetry") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(SymMatd{a}, DataError);
  Matrix b(2, 2);
  b << 1, 2, 2 + 1e-15, 4;
  const SymMatd s(b, 1e-12);
  CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));
}

TEST_CASE("svec of small matrices") {
  const Vector v = svec(SymMatd::identity(2));
  CHECK(v.size() == 3);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == 0.0);
  CHECK(v(2) == 1.0);

  Matrix m(2, 2);
  m << 1, 2, 2, 3;
  const Vector w = svec(SymMatd(m));
  CHECK(w(0) == 1.0);
  CHECK(w(1) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(w(2) == 3.0);
}

TEST_CASE("svec is an isometry for the trace inner product") {
  Gen g(11);
  for (int k = 0; k < 100; ++k) {
    const SymMatd a = g.sym(4), b = g.sym(4);
    double tr = 0.0;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) tr += a.matrix()(i, j) * b.matrix()(j, i);
    const double ip = svec(a).dot(svec(b));
    CHECK(std::abs(ip - tr) <= 1e-12 * std::max(1.0, std::abs(tr)));
    CHECK(std::abs(svec(a).norm() - a.matrix().norm()) <= 1e-14 * std::max(1.0, a.matrix().norm()));
  }
}

TEST_CASE("smat inverts svec") {
  Vector v(3);
  v << 1, 0, 1;
  CHECK(smat(v).matrix() == Matrix::Identity(2, 2));
  Vector w(3);
  w << 1, 2 * std::sqrt(2.0), 3;
  CHECK((smat(w).matrix() - (Matrix(2, 2) << 1, 2, 2, 3).finished()).cwiseAbs().maxCoeff() < 1e-15);

  Gen g(12);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const SymMatd a = g.sym(5);
    worst = std::max(worst, (smat(svec(a)).matrix() - a.matrix()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-14);
  CHECK_THROWS_AS(smat(Vector::Zero(4)), DimensionError);
}

TEST_CASE("skron_apply") {
  Gen g(13);
  const Matrix id = Matrix::Identity(3, 3);
  const SymMatd h = g.sym(3);
  CHECK(skron_apply(id, id, h) == svec(h));

  const Vector d = Vector{{2.0, -1.0, 0.5}};
  const Matrix dm = d.asDiagonal();
  const Vector expect = svec(SymMatd(Matrix(dm * dm)));
  CHECK((skron_apply(dm, dm, SymMatd::identity(3)) - expect).norm() < 1e-15);

  for (int k = 0; k < 20; ++k) {
    const Matrix k1 = g.matrix(3, 3), k2 = g.matrix(3, 3);
    const SymMatd hh = g.sym(3);
    const Matrix brute = 0.5 * (k2 * hh.matrix() * k1.transpose() + k1 * hh.matrix() * k2.transpose());
    CHECK((skron_apply(k1, k2, hh) - svec_upper(brute)).norm() < 1e-14);
  }
  CHECK_THROWS_AS(skron_apply(Matrix::Identity(2, 2), id, h), DimensionError);
}

TEST_CASE("skron_matrix materializes skron_apply") {
  CHECK(skron_matrix(Matrix::Identity(4, 4), Matrix::Identity(4, 4)).isIdentity(0.0));

  Gen g(14);
  const Index n = 4;
  const Matrix k1 = g.matrix(n, n), k2 = g.matrix(n, n);
  const Matrix k = skron_matrix(k1, k2);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const SymMatd e = canonical(n, i, j);
      CHECK((k * svec(e) - skron_apply(k1, k2, e)).norm() < 1e-12);
    }
  const Matrix s = g.sym(n).matrix();
  const Matrix ks = skron_matrix(s, s);
  CHECK((ks - ks.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(skron_matrix(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("eig_sym") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const auto e = eig_sym(SymMatd(d));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(2.0));
  CHECK(e.values(2) == doctest::Approx(3.0));

  const Vector q = Vector{{1.0, 2.0, 2.0}} / 3.0;
  const auto r1 = eig_sym(SymMatd(Matrix(q * q.transpose())));
  CHECK(std::abs(r1.values(0)) < 1e-15);
  CHECK(std::abs(r1.values(1)) < 1e-15);
  CHECK(r1.values(2) == doctest::Approx(1.0));

  Gen g(15);
  for (int k = 0; k < 50; ++k) {
    const SymMatd m = g.sym(6);
    const auto es = eig_sym(m);
    const double scale = std::max(1.0, m.matrix().norm());
    for (Index i = 1; i < 6; ++i) CHECK(es.values(i - 1) <= es.values(i));
    CHECK((es.vectors * es.values.asDiagonal() * es.vectors.transpose() - m.matrix()).norm() < 1e-12 * scale);
    CHECK((es.vectors.transpose() * es.vectors - Matrix::Identity(6, 6)).norm() < 1e-12);
  }
}

TEST_CASE("numerical_rank") {
  CHECK(numerical_rank(SymMatd::identity(5), 1e-7) == 5);
  CHECK(numerical_rank(SymMatd::zero(4), 1e-7) == 0);
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1, 1e-12;
  CHECK(numerical_rank(SymMatd(d), 1e-7) == 1);

  Gen g(16);
  for (int k = 0; k < 30; ++k) {
    const SymMatd m = g.psd(5, g.integer(0, 5));
    Index prev = 6;
    for (double tau : {1e-14, 1e-10, 1e-7, 1e-4, 1e-2, 1.0}) {
      const Index r = numerical_rank(m, tau);
      CHECK(r <= prev);
      prev = r;
    }
  }
}

TEST_CASE("col_space_basis") {
  CHECK(col_space_basis(SymMatd::identity(3), 1e-7).cols() == 3);
  const Vector q = Vector{{0.6, 0.0, 0.8}};
  const Matrix b = col_space_basis(SymMatd(Matrix(q * q.transpose())), 1e-7);
  REQUIRE(b.cols() == 1);
  CHECK(std::abs(std::abs(b.col(0).dot(q)) - 1.0) < 1e-12);

  Gen g(17);
  for (int k = 0; k < 30; ++k) {
    const Index r = g.integer(1, 5);
    const SymMatd m = g.psd(5, r);
    const Matrix basis = col_space_basis(m, 1e-9);
    CHECK(basis.cols() == r);
    CHECK((basis.transpose() * basis - Matrix::Identity(r, r)).norm() < 1e-12);
    CHECK((basis * basis.transpose() * m.matrix() - m.matrix()).norm() < 1e-10 * std::max(1.0, m.matrix().norm()));
  }
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(col_space_basis(SymMatd(neg), 1e-7), NotPsdError);
}

TEST_CASE("solve_dense, min_singular_value, null_space_basis") {
  const Vector rhs = Vector{{1.0, -2.0, 3.0}};
  CHECK(solve_dense(Matrix::Identity(3, 3), rhs) == rhs);

  Gen g(18);
  for (int k = 0; k < 20; ++k) {
    const Matrix a = g.matrix(6, 6) + 3.0 * Matrix::Identity(6, 6);
    const Vector b = g.vector(6);
    CHECK((a * solve_dense(a, b) - b).norm() <= 1e-10 * b.norm());
  }
  CHECK_THROWS_AS(solve_dense(Matrix::Zero(2, 2), Vector::Ones(2)), SingularMatrixError);
  CHECK_THROWS_AS(solve_dense(Matrix::Identity(2, 2), Vector::Ones(3)), DimensionError);

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2.0, 1e-6;
  CHECK(min_singular_value(d) == doctest::Approx(1e-6).epsilon(1e-12));

  Matrix j(2, 2);
  j << 0, 0, -1, 0;
  const Matrix nb = null_space_basis(j, 1e-6);
  REQUIRE(nb.cols() == 1);
  CHECK(std::abs(nb(0, 0)) < 1e-15);
  CHECK(std::abs(std::abs(nb(1, 0)) - 1.0) < 1e-15);

  for (int k = 0; k < 20; ++k) {
    const Matrix a = g.matrix(5, 3) * g.matrix(3, 5);
    const Matrix basis = null_space_basis(a, 1e-10);
    CHECK(basis.cols() == 2);
    const double na = a.norm();
    for (Index c = 0; c < basis.cols(); ++c) CHECK((a * basis.col(c)).norm() <= 1e-10 * na);
  }
}
