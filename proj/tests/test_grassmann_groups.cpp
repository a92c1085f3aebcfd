#include <cmath>

#include "causal/grassmann_groups.hpp"
#include "causal/makarevic_spaces.hpp"
#include "doctest.h"

using namespace causal;

namespace {

std::vector<FormSpace> form_spaces() {
  std::vector<FormSpace> out;
  for (int s = 1; s <= 2; ++s) out.push_back(make_form_space(BaseField::Real, 2 * s));
  for (int r = 1; r <= 3; ++r)
    for (int p = 0; p <= r; ++p) out.push_back(make_form_space(BaseField::Complex, r, p));
  for (int r = 1; r <= 3; ++r) out.push_back(make_form_space(BaseField::Quaternion, r));
  return out;
}

bool definite(const FormSpace& s) {
  return s.field == BaseField::Quaternion ||
         (s.field == BaseField::Complex && (s.p == 0 || s.p == s.r));
}

std::string label(const FormSpace& s) {
  return base_field_name(s.field) + "(" + std::to_string(s.r) + "," +
         std::to_string(s.p) + ")";
}

}  // namespace

TEST_CASE("form spaces") {
  for (const auto& s : form_spaces()) {
    CAPTURE(label(s));
    const int n = s.n();
    CHECK((s.J.adjoint() + s.J).norm() < 1e-15);
    CHECK((s.J.adjoint() * s.J - CMat::Identity(n, n)).norm() < 1e-15);
    CHECK(std::abs(s.form.determinant()) > 0.5);
    CHECK(unitary_and_cone_check(CMat::Identity(n, n), s, CheckMode::Group));
    CHECK(unitary_and_cone_check(s.J, s, CheckMode::Group));
    // The doubled form is the pullback of Omega.
    CMat t = doubled_to_omega(s);
    CMat omega = CMat::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = CMat::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -CMat::Identity(n, n);
    CHECK((t.adjoint() * omega * t - doubled_form(s)).norm() < 1e-14);
  }
  CHECK_THROWS_AS(make_form_space(BaseField::Real, 3), Error);
  CHECK_THROWS_AS(make_form_space(BaseField::Complex, 2, 3), Error);
}

TEST_CASE("group and cone checks") {
  const cplx i(0, 1);
  // C, J = i I_{p,q}: A = -i I_{p,q} gives (2J) A = 2.
  auto c = make_form_space(BaseField::Complex, 3, 2);
  CMat ipq = CMat::Identity(3, 3);
  ipq(2, 2) = -1;
  CHECK(unitary_and_cone_check(-i * ipq, c, CheckMode::ConeElement));
  CHECK_FALSE(unitary_and_cone_check(i * ipq, c, CheckMode::ConeElement));
  // R, J = Omega_2: A = Omega^{-1} S with S > 0.
  auto rr = make_form_space(BaseField::Real, 2);
  CMat spos(2, 2);
  spos << 2, 0.5, 0.5, 1;
  CHECK(unitary_and_cone_check(rr.J.inverse() * spos, rr, CheckMode::ConeElement));
  CHECK_FALSE(unitary_and_cone_check(-rr.J.inverse() * spos, rr, CheckMode::ConeElement));
  // Complex matrices are not R-linear.
  CHECK_FALSE(unitary_and_cone_check(i * CMat::Identity(2, 2), rr, CheckMode::Group));
  CHECK_FALSE(unitary_and_cone_check(2.0 * CMat::Identity(2, 2), rr, CheckMode::Group));
  try {
    unitary_and_cone_check(CMat::Identity(3, 3), rr, CheckMode::Group);
    FAIL("expected SizeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeMismatch);
  }
}

TEST_CASE("graph embedding") {
  Rng rng(1);
  for (const auto& s : form_spaces()) {
    CAPTURE(label(s));
    const int n = s.n();
    CompletionPoint id = graph_embedding(CMat::Identity(n, n), s);
    CHECK(point_invariants_hold(id));
    std::vector<CompletionPoint> pts;
    std::vector<CMat> gs;
    for (int k = 0; k < 100 / 5; ++k) {
      CMat g = random_unitary(s, rng);
      REQUIRE(unitary_and_cone_check(g, s, CheckMode::Group));
      CompletionPoint p = graph_embedding(g, s);
      CHECK(point_invariants_hold(p));
      auto back = graph_pullback(p, s);
      REQUIRE(back.has_value());
      CHECK((*back - g).norm() < 1e-8 * std::max(1.0, g.norm()));
      pts.push_back(p);
      gs.push_back(g);
    }
    for (size_t a = 0; a < pts.size(); ++a)
      for (size_t b = a + 1; b < pts.size(); ++b)
        CHECK(point_distance(pts[a], pts[b]) > 1e-6);
    try {
      graph_embedding(2.0 * CMat::Identity(n, n), s);
      FAIL("expected NotUnitary");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotUnitary);
    }
  }
  // r = 1, C, J = i: every phase e^{i t} is unitary and its graph isotropic.
  auto c1 = make_form_space(BaseField::Complex, 1);
  for (double t : {0.0, 0.4, 2.0, M_PI}) {
    CMat g = CMat::Constant(1, 1, std::polar(1.0, t));
    CHECK(point_invariants_hold(graph_embedding(g, c1)));
  }
}

TEST_CASE("graphs of +-1 are the Euler eigenspaces") {
  for (const auto& s : form_spaces()) {
    CAPTURE(label(s));
    const int n = s.n();
    Model m = matrix_model(s.algebra());
    CMat h = euler_elements(*m).h;
    CMat plus = graph_embedding(CMat::Identity(n, n), s).rep;
    CMat minus = graph_embedding(-CMat::Identity(n, n), s).rep;
    // Gamma(1) = E_- and Gamma(-1) = E_+.
    CHECK((h * plus + 0.5 * plus).norm() < 1e-14);
    CHECK((h * minus - 0.5 * minus).norm() < 1e-14);
    CMat both(2 * n, 2 * n);
    both << plus, minus;
    CHECK(Eigen::FullPivLU<CMat>(both).rank() == 2 * n);
    CHECK((plus.adjoint() * m->form * plus).norm() < 1e-14);
    CHECK((minus.adjoint() * m->form * minus).norm() < 1e-14);
    // Gamma(1) is the base point of the completion.
    CHECK(same_point(graph_embedding(CMat::Identity(n, n), s),
                     embed_point(s.algebra(), Vec::Zero(s.algebra()->dim))));
  }
}

TEST_CASE("fractional action") {
  Rng rng(2);
  for (const auto& s : form_spaces()) {
    CAPTURE(label(s));
    const int n = s.n();
    CMat id2 = CMat::Identity(2 * n, 2 * n);
    CMat g = random_unitary(s, rng);
    CHECK((fractional_action(id2, g, s) - g).norm() < 1e-12);
    // Block-diagonal (g1, g2) acts by g2 g g1^{-1}.
    CMat g1 = random_unitary(s, rng), g2 = random_unitary(s, rng);
    CMat diag = CMat::Zero(2 * n, 2 * n);
    diag.topLeftCorner(n, n) = g1;
    diag.bottomRightCorner(n, n) = g2;
    CHECK((fractional_action(diag, g, s) - g2 * g * g1.inverse()).norm() < 1e-9);
    const CMat t = doubled_to_omega(s);
    int done = 0;
    for (int k = 0; k < 100 / 5; ++k) {
      CMat big = random_doubled_unitary(s, rng);
      CMat gg = random_unitary(s, rng);
      CMat out;
      try {
        out = fractional_action(big, gg, s);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ChartSingular);
        continue;
      }
      ++done;
      CHECK(unitary_and_cone_check(out, s, CheckMode::Group));
      // Equivariance of the graph embedding for the linear action on K^{2r}.
      CompletionPoint moved = apply_matrix(t * big * t.inverse(), graph_embedding(gg, s));
      CHECK(same_point(moved, graph_embedding(out, s)));
    }
    CHECK(done > 0);
  }
  // R^2 with J = Omega_2: U(F) = SL_2(R). Choose g mapping x to y where
  // (x, y) = G^{-1}(0, e_1); then G.Gamma(g) contains (0, e_1) and is not a
  // graph.
  auto r2 = make_form_space(BaseField::Real, 2);
  CMat big = random_doubled_unitary(r2, rng);
  Vec w = Vec::Zero(4);
  w(2) = 1;
  Vec xy = big.real().inverse() * w;
  Vec x = xy.head(2), y = xy.tail(2);
  Mat mx(2, 2), my(2, 2);
  mx << x, Vec(Eigen::Vector2d(-x(1), x(0)) / x.squaredNorm());
  my << y, Vec(Eigen::Vector2d(-y(1), y(0)) / y.squaredNorm());
  CMat g = (my * mx.inverse()).cast<cplx>();
  REQUIRE(unitary_and_cone_check(g, r2, CheckMode::Group));
  try {
    fractional_action(big, g, r2);
    FAIL("expected ChartSingular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ChartSingular);
  }
  try {
    fractional_action(2.0 * CMat::Identity(4, 4), g, r2);
    FAIL("expected NotUnitary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUnitary);
  }
}

TEST_CASE("group Cayley transform") {
  const cplx i(0, 1);
  auto c1 = make_form_space(BaseField::Complex, 1);
  auto z0 = group_cayley(CMat::Zero(1, 1), c1);
  REQUIRE(z0.has_value());
  CHECK(std::abs((*z0)(0, 0) + 1.0) < 1e-15);
  auto z1 = group_cayley(CMat::Ones(1, 1), c1);
  REQUIRE(z1.has_value());
  CHECK(std::abs((*z1)(0, 0) - i) < 1e-15);

  Rng rng(3);
  for (const auto& s : form_spaces()) {
    CAPTURE(label(s));
    const int n = s.n();
    auto alg = s.algebra();
    int defined = 0;
    for (int k = 0; k < 200; ++k) {
      Vec zc = alg->random_element(rng, 2.0);
      CMat z = alg->to_matrix(zc);
      auto c = group_cayley(z, s);
      if (definite(s)) REQUIRE(c.has_value());
      if (!c) continue;
      ++defined;
      CHECK(unitary_and_cone_check(*c, s, CheckMode::Group));
      // Gamma(-J C(z) J^{-1}) is the chart point z of the completion.
      if (k < 20) {
        CMat g = -s.J * *c * s.J.inverse();
        CHECK(same_point(graph_embedding(g, s), embed_point(alg, zc)));
      }
    }
    CHECK(defined > 190);
    (void)n;
  }
  // z - J is singular for indefinite J at suitable hermitian z.
  CMat swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK_FALSE(group_cayley(swap, make_form_space(BaseField::Complex, 2, 1)).has_value());
  CHECK_FALSE(group_cayley(swap, make_form_space(BaseField::Real, 2)).has_value());
}

TEST_CASE("invariant cone is conjugation invariant") {
  Rng rng(4);
  for (const auto& s : form_spaces()) {
    CAPTURE(label(s));
    for (int k = 0; k < 100 / 5; ++k) {
      CMat g = random_unitary(s, rng);
      CMat a = random_cone_element(s, rng);
      REQUIRE(unitary_and_cone_check(a, s, CheckMode::ConeElement));
      CHECK(unitary_and_cone_check(g * a * g.inverse(), s, CheckMode::ConeElement));
    }
  }
}

TEST_CASE("unitary algebras match the group-type fixed algebras") {
  for (int s = 1; s <= 2; ++s) {
    auto f = make_form_space(BaseField::Real, 2 * s);
    int u = unitary_algebra_dim(f);
    CHECK(u == s * (2 * s + 1));
    auto rep = fixed_algebra(make_involution(f.algebra(), InvolutionKind::NonSplitNS1), +1);
    CHECK(rep.dim == 2 * u);
    CHECK(rep.h_part_dim == u);
  }
  for (int r = 1; r <= 3; ++r) {
    auto f = make_form_space(BaseField::Quaternion, r);
    int u = unitary_algebra_dim(f);
    CHECK(u == r * (2 * r - 1));
    auto rep = fixed_algebra(make_involution(f.algebra(), InvolutionKind::SplitS2), +1);
    CHECK(rep.dim == 2 * u);
    CHECK(rep.h_part_dim == u);
  }
  // u_{p,q}(C) has a one-dimensional center; the fixed algebras are computed
  // inside su_{r,r}.
  for (int r = 2; r <= 3; ++r) {
    for (int p = 1; p <= r; ++p) {
      auto f = make_form_space(BaseField::Complex, r, p);
      int u = unitary_algebra_dim(f);
      CHECK(u == r * r);
      auto spec = p == r ? make_involution(f.algebra(), InvolutionKind::Identity)
                         : make_involution(f.algebra(), InvolutionKind::Pierce, r - p);
      auto rep = fixed_algebra(spec, +1);
      CHECK(rep.dim == 2 * u - 1);
      CHECK(rep.h_part_dim == u - 1);
    }
  }
}
