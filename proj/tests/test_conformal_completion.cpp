#include <cmath>

#include "causal/conformal_completion.hpp"
#include "doctest.h"

using namespace causal;

namespace {

std::vector<Algebra> completion_algebras() {
  std::vector<Algebra> out;
  for (int r = 1; r <= 3; ++r) {
    out.push_back(make_algebra(Family::SymR, r));
    out.push_back(make_algebra(Family::HermC, r));
    out.push_back(make_algebra(Family::HermH, r));
  }
  for (int d = 2; d <= 5; ++d) out.push_back(make_algebra(Family::SpinFactor, d));
  return out;
}

CMat random_group_element(const LieModel& m, Rng& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Vec c(m.dim());
  for (int i = 0; i < c.size(); ++i) c(i) = nd(rng);
  return matrix_exp(m.from_coords(c));
}

}  // namespace

TEST_CASE("embed and pull back") {
  auto mink = make_algebra(Family::SpinFactor, 3);
  CompletionPoint o = embed_point(mink, Vec::Zero(3));
  CMat expected(5, 1);
  expected << 1, 0, 0, 0, -1;
  CHECK(same_point(o, make_point(mink, expected)));

  // A null ray with x_1 != x_{d+2} is a chart point: [0 : v : 1] = eta(-v).
  CMat far(5, 1);
  far << 0, 1, 0, 0, 1;
  auto pb = chart_pullback(make_point(mink, far));
  REQUIRE(pb.has_value());
  CHECK((*pb - Vec::Unit(3, 0) * -1.0).norm() < 1e-12);
  // The point at infinity [1 : 0 : 1] has no chart preimage.
  CMat inf(5, 1);
  inf << 1, 0, 0, 0, 1;
  CHECK_FALSE(chart_pullback(make_point(mink, inf)).has_value());

  auto r1 = make_algebra(Family::SymR, 1);
  CompletionPoint g3 = embed_point(r1, Vec::Constant(1, 3.0));
  CHECK(std::abs(g3.rep(0, 0).real() - 3.0) < 1e-15);
  CHECK(std::abs(g3.rep(1, 0).real() - 1.0) < 1e-15);
  CHECK(std::abs((*chart_pullback(g3))(0) - 3.0) < 1e-12);

  Rng rng(1);
  for (const auto& a : completion_algebras()) {
    for (int i = 0; i < 20; ++i) {
      Vec v = a->random_element(rng, 2.0);
      CompletionPoint p = embed_point(a, v);
      CHECK(point_invariants_hold(p));
      auto back = chart_pullback(p);
      REQUIRE(back.has_value());
      CHECK((*back - v).norm() < 1e-9);
      CHECK(same_point(p, normalized(p)));
    }
  }
}

TEST_CASE("invalid points") {
  auto mink = make_algebra(Family::SpinFactor, 3);
  CMat bad(5, 1);
  bad << 1, 0, 0, 0, 0;
  CHECK_THROWS_AS(make_point(mink, bad), Error);
  CHECK_THROWS_AS(make_point(mink, CMat::Zero(4, 1)), Error);
  auto s2 = make_algebra(Family::SymR, 2);
  CMat notiso = CMat::Zero(4, 2);
  notiso(0, 0) = notiso(2, 0) = 1.0;
  notiso(2, 1) = 1.0;
  CHECK_THROWS_AS(make_point(s2, notiso), Error);
  auto ds = make_direct_sum(s2);
  CHECK_THROWS_AS(embed_point(ds, Vec::Zero(ds->dim)), Error);
}

TEST_CASE("conformal generators on chart points") {
  Rng rng(2);
  for (const auto& a : completion_algebras()) {
    Vec e = a->unit();
    CompletionPoint pe = embed_point(a, e);
    CHECK(same_point(apply_generator(ConformalGenerator::inversion(), pe),
                     embed_point(a, -e)));
    for (int i = 0; i < 10; ++i) {
      Vec v = a->random_element(rng);
      Vec w = a->random_element(rng);
      CompletionPoint p = embed_point(a, v);
      CHECK(same_point(apply_generator(ConformalGenerator::dilate(std::log(2.0)), p),
                       embed_point(a, 2.0 * v)));
      CHECK(same_point(apply_generator(ConformalGenerator::translate(w), p),
                       embed_point(a, v + w)));
      auto inv = jordan_inverse(*a, v);
      REQUIRE(inv.has_value());
      CompletionPoint want = embed_point(a, -*inv);
      CHECK(same_point(apply_generator(ConformalGenerator::inversion(), p), want, 1e-6));
      CHECK(same_point(apply_generator(ConformalGenerator::moebius_rho(M_PI), p), want,
                       1e-6));
      CompletionPoint q = apply_generator(ConformalGenerator::moebius_rho(0.7), p);
      CHECK(point_invariants_hold(q));
    }
  }
}

TEST_CASE("inversion at a non-invertible chart point") {
  auto a = make_algebra(Family::HermC, 2);
  CompletionPoint p = embed_point(a, a->standard_frame()[0]);
  CompletionPoint q = apply_generator(ConformalGenerator::inversion(), p);
  CHECK(point_invariants_hold(q));
  CHECK_FALSE(chart_pullback(q).has_value());
}

TEST_CASE("matrix generators form a group action") {
  Rng rng(3);
  for (const auto& a : completion_algebras()) {
    auto m = matrix_model(a);
    for (int i = 0; i < 15; ++i) {
      CMat g1 = random_group_element(*m, rng, 0.4);
      CMat g2 = random_group_element(*m, rng, 0.4);
      CompletionPoint p = embed_point(a, a->random_element(rng));
      CompletionPoint lhs = apply_generator(ConformalGenerator::group_matrix(g1 * g2), p);
      CompletionPoint rhs = apply_generator(
          ConformalGenerator::group_matrix(g1),
          apply_generator(ConformalGenerator::group_matrix(g2), p));
      CHECK(point_distance(lhs, rhs) < 1e-6);
      CHECK(point_invariants_hold(lhs));
    }
    CMat bad = m->group_identity() * 2.0;
    CompletionPoint p = embed_point(a, Vec::Zero(a->dim));
    CHECK_THROWS_AS(apply_generator(ConformalGenerator::group_matrix(bad), p), Error);
    CHECK_THROWS_AS(
        apply_generator(ConformalGenerator::translate(Vec::Zero(a->dim + 1)), p), Error);
  }
}

TEST_CASE("real Cayley transform") {
  auto r1 = make_algebra(Family::SymR, 1);
  CHECK(std::abs((*cayley_real(*r1, Vec::Constant(1, 1.0 / 3)))(0) - 2.0) < 1e-12);
  CHECK_FALSE(cayley_real(*r1, Vec::Constant(1, 1.0)).has_value());
  Rng rng(4);
  for (const auto& a : completion_algebras()) {
    CHECK((*cayley_real(*a, Vec::Zero(a->dim)) - a->unit()).norm() < 1e-12);
    int checked = 0;
    while (checked < 100 / 4) {
      Vec x = a->random_element(rng, 1.5);
      Vec ev = spectral_decompose(*a, x).eigenvalues;
      bool ok = true;
      for (int i = 0; i < ev.size(); ++i) {
        ok = ok && std::abs(std::abs(ev(i)) - 1) > 0.05 && std::abs(ev(i)) > 0.05;
      }
      if (!ok) continue;
      ++checked;
      auto c1 = cayley_real(*a, x);
      REQUIRE(c1.has_value());
      auto c2 = cayley_real(*a, *c1);
      REQUIRE(c2.has_value());
      Vec want = -*jordan_inverse(*a, x);
      CHECK((*c2 - want).norm() < 1e-7 * std::max(1.0, want.norm()));
    }
    for (int i = 0; i < 50; ++i) {
      Vec v = random_cone_element(*a, rng, 0.01, 10.0);
      auto z = cayley_real_inverse(*a, v);
      REQUIRE(z.has_value());
      CHECK(cone_and_norm(*a, *z).in_unit_ball);
      CHECK((*cayley_real(*a, *z) - v).norm() < 1e-8 * std::max(1.0, v.norm()));
    }
  }
}

TEST_CASE("transversality") {
  Rng rng(5);
  for (const auto& a : completion_algebras()) {
    CompletionPoint o = embed_point(a, Vec::Zero(a->dim));
    CHECK(transversal(o, embed_point(a, a->unit())));
    CHECK_FALSE(transversal(o, o));
    if (a->rank > 1) {
      CHECK_FALSE(transversal(o, embed_point(a, a->standard_frame()[0])));
    }
    for (int i = 0; i < 20; ++i) {
      Vec x = a->random_element(rng), y = a->random_element(rng);
      CompletionPoint p = embed_point(a, x), q = embed_point(a, y);
      CHECK(transversal(p, q) == jordan_inverse(*a, x - y).has_value());
      CHECK_FALSE(transversal(p, p));
    }
  }
  CHECK_THROWS_AS(transversal(embed_point(make_algebra(Family::SymR, 2), Vec::Zero(3)),
                              embed_point(make_algebra(Family::HermC, 2), Vec::Zero(4))),
                  Error);
}
