#include <cmath>

#include "causal/jordan_core.hpp"
#include "doctest.h"

using namespace causal;

namespace {

std::vector<Algebra> small_algebras() {
  std::vector<Algebra> out;
  for (int r = 1; r <= 4; ++r) {
    out.push_back(make_algebra(Family::SymR, r));
    out.push_back(make_algebra(Family::HermC, r));
    out.push_back(make_algebra(Family::HermH, r));
  }
  for (int d = 2; d <= 6; ++d) out.push_back(make_algebra(Family::SpinFactor, d));
  out.push_back(make_direct_sum(make_algebra(Family::HermC, 2)));
  return out;
}

// Central finite-difference Jacobian of w -> ((x + w)^{-1} - y)^{-1} at 0.
Mat fd_bergman_oracle(const AlgebraDescriptor& a, const Vec& x, const Vec& y) {
  const double h = 1e-5;
  auto f = [&](const Vec& w) {
    Vec u = *jordan_inverse(a, x + w) - y;
    return *jordan_inverse(a, u);
  };
  Mat jac(a.dim, a.dim);
  for (int k = 0; k < a.dim; ++k) {
    Vec dw = Vec::Unit(a.dim, k) * h;
    jac.col(k) = (f(dw) - f(-dw)) / (2 * h);
  }
  return jac.inverse();
}

}  // namespace

TEST_CASE("make_algebra dimensions and ranks") {
  auto s2 = make_algebra(Family::SymR, 2);
  CHECK(s2->dim == 3);
  CHECK(s2->rank == 2);
  auto m4 = make_algebra(Family::SpinFactor, 4);
  CHECK(m4->dim == 4);
  CHECK(m4->rank == 2);
  auto h2 = make_algebra(Family::HermH, 2);
  // Independent count: r real diagonal entries plus 4 reals per upper entry.
  CHECK(h2->dim == 2 + 4 * (2 * 1 / 2));
  CHECK(h2->rank == 2);
  for (int r = 1; r <= 4; ++r) {
    CHECK(make_algebra(Family::HermC, r)->dim == r * r);
    CHECK(make_algebra(Family::HermH, r)->dim == r * (2 * r - 1));
    auto ds = make_direct_sum(make_algebra(Family::SymR, r));
    CHECK(ds->dim == r * (r + 1));
    CHECK(ds->rank == 2 * r);
  }
  CHECK_FALSE(make_algebra(Family::SpinFactor, 2)->simple);
  CHECK(make_algebra(Family::SpinFactor, 3)->simple);
}

TEST_CASE("make_algebra errors") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NumericalFailure;
  };
  CHECK(code_of([] { make_algebra(Family::HermO, 3); }) ==
        ErrorCode::UnsupportedFamily);
  CHECK(code_of([] { make_algebra(Family::SymR, 0); }) == ErrorCode::InvalidSize);
}

TEST_CASE("trace form is symmetric positive definite") {
  for (const auto& a : small_algebras()) {
    CHECK((a->trace_form - a->trace_form.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> es(a->trace_form);
    CHECK(es.eigenvalues().minCoeff() > 0);
  }
}

TEST_CASE("jordan_product examples") {
  Rng rng(1);
  for (const auto& a : small_algebras()) {
    Vec x = a->random_element(rng);
    CHECK((a->product(a->unit(), x) - x).norm() < 1e-12);
  }
  auto m4 = make_algebra(Family::SpinFactor, 4);
  Vec x(4), y(4), expect(4);
  x << 1, 1, 0, 0;
  y << 0, 0, 1, 0;
  expect << 0, 0, 1, 0;
  CHECK((m4->product(x, y) - expect).norm() < 1e-15);

  auto s2 = make_algebra(Family::SymR, 2);
  Vec e11(3), offd(3);
  e11 << 1, 0, 0;
  offd << 0, 0, 1;  // E12 + E21
  CHECK((s2->product(e11, offd) - 0.5 * offd).norm() < 1e-15);
}

TEST_CASE("jordan_product rejects mismatched algebras") {
  auto a = make_algebra(Family::SymR, 2);
  auto b = make_algebra(Family::HermC, 2);
  CHECK_THROWS_AS(jordan_product(make_element(a, a->unit()),
                                 make_element(b, b->unit())),
                  Error);
}

TEST_CASE("Jordan identity and trace-form associativity") {
  Rng rng(2);
  for (const auto& a : small_algebras()) {
    for (int t = 0; t < 20; ++t) {
      Vec x = a->random_element(rng), y = a->random_element(rng),
          z = a->random_element(rng);
      Vec x2 = a->square(x);
      Vec lhs = a->product(x, a->product(x2, y));
      Vec rhs = a->product(x2, a->product(x, y));
      CHECK((lhs - rhs).norm() < 1e-9);
      double t1 = a->trace(a->product(a->product(x, y), z));
      double t2 = a->trace(a->product(x, a->product(y, z)));
      CHECK(std::abs(t1 - t2) < 1e-9);
    }
  }
}

TEST_CASE("multiplication operators") {
  Rng rng(3);
  for (const auto& a : small_algebras()) {
    auto ops = multiplication_operators(*a, a->unit());
    CHECK((ops.L - Mat::Identity(a->dim, a->dim)).norm() < 1e-12);
    CHECK((ops.P - Mat::Identity(a->dim, a->dim)).norm() < 1e-12);
    Vec x = a->random_element(rng);
    Mat l = left_multiplication(*a, x);
    // Self-adjoint with respect to the trace form.
    CHECK((a->trace_form * l - l.transpose() * a->trace_form).norm() < 1e-9);
  }
  auto r1 = make_algebra(Family::SymR, 1);
  Vec x(1);
  x << 1.7;
  auto ops = multiplication_operators(*r1, x);
  CHECK(std::abs(ops.L(0, 0) - 1.7) < 1e-15);
  CHECK(std::abs(ops.P(0, 0) - 1.7 * 1.7) < 1e-12);
}

TEST_CASE("spectral decomposition examples") {
  for (const auto& a : small_algebras()) {
    auto s = spectral_decompose(*a, a->unit());
    for (int i = 0; i < a->rank; ++i) CHECK(std::abs(s.eigenvalues(i) - 1) < 1e-12);
    Vec sum = Vec::Zero(a->dim);
    for (const auto& c : s.frame) sum += c;
    CHECK((sum - a->unit()).norm() < 1e-9);
  }
  auto m4 = make_algebra(Family::SpinFactor, 4);
  Vec x(4);
  x << 0, 2, 0, 0;
  auto s = spectral_decompose(*m4, x);
  CHECK(std::abs(s.eigenvalues(0) - 2) < 1e-15);
  CHECK(std::abs(s.eigenvalues(1) + 2) < 1e-15);
  Vec c1(4), c2(4);
  c1 << 0.5, 0.5, 0, 0;
  c2 << 0.5, -0.5, 0, 0;
  CHECK((s.frame[0] - c1).norm() < 1e-15);
  CHECK((s.frame[1] - c2).norm() < 1e-15);
  // Degenerate spin element splits along e1.
  Vec y(4);
  y << 3, 0, 0, 0;
  auto sd = spectral_decompose(*m4, y);
  CHECK((sd.frame[0] - c1).norm() < 1e-15);

  auto s2 = make_algebra(Family::SymR, 2);
  Vec d(3);
  d << 3, -1, 0;
  auto sdiag = spectral_decompose(*s2, d);
  CHECK(std::abs(sdiag.eigenvalues(0) - 3) < 1e-12);
  CHECK(std::abs(sdiag.eigenvalues(1) + 1) < 1e-12);
  Vec e11(3), e22(3);
  e11 << 1, 0, 0;
  e22 << 0, 1, 0;
  CHECK((sdiag.frame[0] - e11).norm() < 1e-12);
  CHECK((sdiag.frame[1] - e22).norm() < 1e-12);
}

TEST_CASE("spectral integrity on random elements") {
  Rng rng(4);
  for (const auto& a : small_algebras()) {
    for (int t = 0; t < 20; ++t) {
      Vec x = a->random_element(rng);
      auto s = spectral_decompose(*a, x);
      REQUIRE(static_cast<int>(s.frame.size()) == a->rank);
      for (int i = 1; i < a->rank; ++i) {
        CHECK(s.eigenvalues(i) <= s.eigenvalues(i - 1));
      }
      Vec rec = Vec::Zero(a->dim), sum = Vec::Zero(a->dim);
      for (int i = 0; i < a->rank; ++i) {
        rec += s.eigenvalues(i) * s.frame[i];
        sum += s.frame[i];
        CHECK((a->square(s.frame[i]) - s.frame[i]).norm() < 1e-9);
        for (int j = i + 1; j < a->rank; ++j) {
          CHECK(a->product(s.frame[i], s.frame[j]).norm() < 1e-9);
        }
      }
      CHECK((rec - x).norm() < 1e-9);
      CHECK((sum - a->unit()).norm() < 1e-9);
    }
  }
}

TEST_CASE("quaternionic spectra with repeated eigenvalues") {
  auto h3 = make_algebra(Family::HermH, 3);
  Vec x = 2.0 * h3->unit();
  Rng rng(5);
  // A rank-deficient perturbation keeps a doubly repeated eigenvalue.
  auto frame = spectral_decompose(*h3, h3->random_element(rng)).frame;
  x += frame[0];
  auto s = spectral_decompose(*h3, x);
  CHECK(std::abs(s.eigenvalues(0) - 3) < 1e-9);
  CHECK(std::abs(s.eigenvalues(1) - 2) < 1e-9);
  CHECK(std::abs(s.eigenvalues(2) - 2) < 1e-9);
  for (int i = 0; i < 3; ++i) {
    CHECK((h3->square(s.frame[i]) - s.frame[i]).norm() < 1e-9);
  }
}

TEST_CASE("invert_and_signature examples") {
  for (const auto& a : small_algebras()) {
    auto inv = invert_and_signature(*a, a->unit());
    CHECK(std::abs(inv.det - 1) < 1e-12);
    REQUIRE(inv.inverse.has_value());
    CHECK((*inv.inverse - a->unit()).norm() < 1e-9);
    CHECK(inv.signature == Signature{a->rank, 0});
  }
  auto m3 = make_algebra(Family::SpinFactor, 3);
  Vec x(3), xinv(3);
  x << 2, 1, 0;
  xinv << 2.0 / 3, -1.0 / 3, 0;
  auto inv = invert_and_signature(*m3, x);
  CHECK(std::abs(inv.det - 3) < 1e-12);
  CHECK((*inv.inverse - xinv).norm() < 1e-12);

  auto s2 = make_algebra(Family::SymR, 2);
  auto sig = invert_and_signature(*s2, s2->signed_frame_sum(1)).signature;
  CHECK(sig == Signature{1, 1});
  // Non-invertible element: inverse absent, p + q < r.
  auto c1 = s2->standard_frame()[0];
  auto nd = invert_and_signature(*s2, c1);
  CHECK_FALSE(nd.inverse.has_value());
  CHECK(nd.signature.p + nd.signature.q < s2->rank);
}

TEST_CASE("inverse property on random elements") {
  Rng rng(6);
  for (const auto& a : small_algebras()) {
    Vec x = a->random_element(rng);
    auto inv = jordan_inverse(*a, x);
    REQUIRE(inv.has_value());
    CHECK((a->product(x, *inv) - a->unit()).norm() < 1e-7);
  }
}

TEST_CASE("cone_and_norm examples") {
  for (const auto& a : small_algebras()) {
    auto c = cone_and_norm(*a, a->unit());
    CHECK(c.in_cone_open);
    CHECK(std::abs(c.spectral_norm - 1) < 1e-12);
    CHECK_FALSE(c.in_unit_ball);
    auto h = cone_and_norm(*a, 0.5 * a->unit());
    CHECK(h.in_cone_open);
    CHECK(std::abs(h.spectral_norm - 0.5) < 1e-12);
    CHECK(h.in_unit_ball);
  }
  auto m4 = make_algebra(Family::SpinFactor, 4);
  Vec x(4);
  x << 0, 1, 0, 0;
  auto c = cone_and_norm(*m4, x);
  CHECK_FALSE(c.in_cone_closed);
  CHECK(std::abs(c.spectral_norm - 1) < 1e-15);
}

TEST_CASE("unit ball equals (e - V+) intersect (-e + V+)") {
  Rng rng(7);
  for (const auto& a : small_algebras()) {
    for (int t = 0; t < 20; ++t) {
      Vec x = a->random_element(rng, 0.6);
      bool ball = cone_and_norm(*a, x).in_unit_ball;
      bool cones = in_open_cone(*a, a->unit() - x) && in_open_cone(*a, a->unit() + x);
      CHECK(ball == cones);
    }
  }
}

TEST_CASE("double cone examples") {
  auto m4 = make_algebra(Family::SpinFactor, 4);
  Vec e = m4->unit();
  CHECK(double_cone_membership(*m4, e, -e, Vec::Zero(4)));
  CHECK(double_cone_membership(*m4, e, -e, 0.5 * e));
  CHECK_FALSE(double_cone_membership(*m4, e, -e, e));
  Vec x(4);
  x << 0, 0.9, 0, 0;
  // e0 -+ 0.9 e1 have eigenvalues 1.9 and 0.1.
  CHECK(double_cone_membership(*m4, e, -e, x));
}

TEST_CASE("bergman operator examples") {
  Rng rng(8);
  for (const auto& a : small_algebras()) {
    auto b = bergman_operator(*a, Vec::Zero(a->dim), a->random_element(rng));
    CHECK((b.matrix - Mat::Identity(a->dim, a->dim)).norm() < 1e-12);
    CHECK(b.invertible);
  }
  auto r1 = make_algebra(Family::SymR, 1);
  Vec one(1), half(1);
  one << 1;
  half << 0.5;
  auto b11 = bergman_operator(*r1, one, one);
  CHECK(std::abs(b11.matrix(0, 0)) < 1e-15);
  CHECK_FALSE(b11.invertible);
  auto bhh = bergman_operator(*r1, half, half);
  CHECK(std::abs(bhh.matrix(0, 0) - 9.0 / 16) < 1e-15);
  CHECK(bhh.invertible);
}

TEST_CASE("bergman operator matches the finite-difference oracle") {
  Rng rng(9);
  for (const auto& a : small_algebras()) {
    for (int t = 0; t < 5; ++t) {
      Vec x = random_element_with_signature(*a, a->rank, rng, 0.3, 0.8);
      Vec y = random_unit_ball_element(*a, rng, 0.5);
      Mat oracle = fd_bergman_oracle(*a, x, y);
      Mat b = bergman_operator(*a, x, y).matrix;
      CHECK((b - oracle).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("unit-ball pairs have invertible bergman operator") {
  Rng rng(10);
  for (const auto& a : small_algebras()) {
    for (int t = 0; t < 20; ++t) {
      Vec x = random_unit_ball_element(*a, rng);
      Vec y = random_unit_ball_element(*a, rng);
      CHECK(bergman_operator(*a, x, y).invertible);
    }
  }
}

TEST_CASE("cone projection onto extreme eigenspaces stays in the cone") {
  // A = L(e1) on the spin factor has eigenvalues {1, 0, -1}; the extreme
  // eigenprojections of cone elements lie in the closed cone.
  auto m5 = make_algebra(Family::SpinFactor, 5);
  Vec e1 = Vec::Unit(5, 1);
  Mat a = left_multiplication(*m5, e1);
  Eigen::EigenSolver<Mat> es(a);
  Rng rng(11);
  Mat vecs = es.eigenvectors().real();
  Vec vals = es.eigenvalues().real();
  Mat vinv = vecs.inverse();
  for (int t = 0; t < 50; ++t) {
    Vec x = random_cone_element(*m5, rng);
    Vec coeff = vinv * x;
    Vec pmax = Vec::Zero(5), pmin = Vec::Zero(5);
    for (int k = 0; k < 5; ++k) {
      if (vals(k) > 0.5) pmax += coeff(k) * vecs.col(k);
      if (vals(k) < -0.5) pmin += coeff(k) * vecs.col(k);
    }
    CHECK(cone_and_norm(*m5, pmax).in_cone_closed);
    CHECK(cone_and_norm(*m5, pmin).in_cone_closed);
  }
}
