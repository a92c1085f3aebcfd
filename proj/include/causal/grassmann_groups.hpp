#pragma once

#include <optional>

#include "causal/conformal_completion.hpp"

namespace causal {

// F = K^r with the skew-hermitian form beta_F(v, w) = v^* (2J) w, where
//   R: J = Omega_{2s} (r = 2s),  C: J = i I_{p,q},  H: J = i 1_r.
// Matrices over H use the 2x2 complex image of jordan_core, so every matrix
// here is complex of size n = r (R, C) or 2r (H).
struct FormSpace {
  BaseField field = BaseField::Complex;
  int r = 1;
  int p = 1;  // C only: signature (p, r - p) of -iJ
  CMat J;
  CMat form;  // 2J

  int n() const { return static_cast<int>(J.rows()); }
  Algebra algebra() const;  // Herm_r(K)
};

FormSpace make_form_space(BaseField field, int r, int p = -1);
std::string base_field_name(BaseField f);

// The form diag(2J, -2J) on F + F, isometric to (K^{2r}, Omega).
CMat doubled_form(const FormSpace& space);
// Isometry F + F -> K^{2r}, (v, w) -> (-J(v - w), v + w). It maps the graph
// {(v, v)} onto E_- = span(0; 1), the base point of the completion.
CMat doubled_to_omega(const FormSpace& space);

enum class CheckMode { Group, ConeElement };

// Group: g^* (2J) g = 2J (and g is K-linear).
// ConeElement: A in u(F, beta_F) and the hermitian matrix (2J) A is positive
// semidefinite.
bool unitary_and_cone_check(const CMat& m, const FormSpace& space,
                            CheckMode mode);

// Gamma(g) = {(v, g v)} in F + F, returned as an isotropic subspace of
// (K^{2r}, Omega) through `doubled_to_omega`.
CompletionPoint graph_embedding(const CMat& g, const FormSpace& space);
// Inverse of graph_embedding on its image; none if the point is not a graph.
std::optional<CMat> graph_pullback(const CompletionPoint& p,
                                   const FormSpace& space);

// Action of G = [[a, b], [c, d]] in U(F + F, diag(2J, -2J)) on graphs:
// G.Gamma(g) = Gamma((c + d g)(a + b g)^{-1}). Block-diagonal (g1, g2) acts by
// g -> g2 g g1^{-1}.
CMat fractional_action(const CMat& big, const CMat& g, const FormSpace& space);

// C(z) = (z + J)(z - J)^{-1}; none when z - J is singular.
std::optional<CMat> group_cayley(const CMat& z, const FormSpace& space);

// dim_R u(F, beta_F).
int unitary_algebra_dim(const FormSpace& space);

// Random K-linear matrices: arbitrary, hermitian, elements of u(F, beta_F),
// group elements exp(u) and cone elements (2J)^{-1} S with S >= 0.
CMat random_field_matrix(const FormSpace& space, int rows, int cols, Rng& rng);
CMat random_hermitian(const FormSpace& space, Rng& rng);
CMat random_unitary(const FormSpace& space, Rng& rng, double scale = 0.7);
CMat random_cone_element(const FormSpace& space, Rng& rng);
CMat random_doubled_unitary(const FormSpace& space, Rng& rng,
                            double scale = 0.5);

}  // namespace causal
