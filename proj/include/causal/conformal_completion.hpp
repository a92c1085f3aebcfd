#pragma once

#include <optional>

#include "causal/lie_structure.hpp"

namespace causal {

enum class PointModel { QuadricRay, IsotropicSubspace };

// A point of the conformal completion M of V.
//   QuadricRay:        null ray of the form of signature (2, d) on R^{d+2},
//                      stored as a (d+2) x 1 column.
//   IsotropicSubspace: N x N/2 column basis of a maximal isotropic subspace of
//                      (K^{2r}, Omega), in the complex image used by the model.
struct CompletionPoint {
  Algebra algebra;
  PointModel model = PointModel::QuadricRay;
  CMat rep;
};

PointModel point_model_for(const AlgebraDescriptor& a);
std::string point_model_name(PointModel m);

// Validates and wraps a representative; throws NotOnHypersurface when it is
// not null/isotropic or degenerate, InvalidSize on a shape mismatch.
CompletionPoint make_point(const Algebra& algebra, const CMat& rep);
bool point_invariants_hold(const CompletionPoint& p, double tol = 1e-9);

CompletionPoint embed_point(const Algebra& algebra, const Vec& v);
CompletionPoint embed_point(const JordanElement& v);
std::optional<Vec> chart_pullback(const CompletionPoint& p);

// Unit-norm ray with positive first non-negligible coordinate, resp. an
// orthonormal column basis.
CompletionPoint normalized(const CompletionPoint& p);
// Projector distance between the spanned subspaces.
double point_distance(const CompletionPoint& p, const CompletionPoint& q);
bool same_point(const CompletionPoint& p, const CompletionPoint& q,
                double tol = 1e-7);

// The ambient form of signature (2, d) on the quadric model.
double quadric_pairing(const LieModel& model, const Vec& x, const Vec& y);

enum class GeneratorKind { Translate, Dilate, Inversion, MoebiusRho, Matrix };

struct ConformalGenerator {
  GeneratorKind kind = GeneratorKind::Dilate;
  Vec v;        // Translate
  double t = 0; // Dilate, MoebiusRho
  CMat matrix;  // Matrix

  static ConformalGenerator translate(const Vec& v);
  static ConformalGenerator dilate(double t);
  static ConformalGenerator inversion();
  static ConformalGenerator moebius_rho(double t);
  static ConformalGenerator group_matrix(const CMat& g);
};

// Group element of the model realizing the generator.
CMat generator_matrix(const LieModel& model, const ConformalGenerator& g);
CompletionPoint apply_generator(const ConformalGenerator& g,
                                const CompletionPoint& p);
CompletionPoint apply_matrix(const CMat& g, const CompletionPoint& p);

// Real Cayley transform (e + z)(e - z)^{-1} and its inverse
// (v - e)(v + e)^{-1}, by spectral calculus.
std::optional<Vec> cayley_real(const AlgebraDescriptor& a, const Vec& z);
std::optional<Vec> cayley_real_inverse(const AlgebraDescriptor& a, const Vec& v);

bool transversal(const CompletionPoint& p, const CompletionPoint& q);

}  // namespace causal
