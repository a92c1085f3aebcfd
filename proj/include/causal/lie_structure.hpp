#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "causal/jordan_core.hpp"

namespace causal {

enum class ModelKind { UOmega, SO2d, Product };
enum class BaseField { Real, Complex, Quaternion };

std::string model_kind_name(ModelKind kind);

struct LieModel;
using Model = std::shared_ptr<const LieModel>;

// Matrix model of the conformal Lie algebra of a euclidean Jordan algebra.
//
//   UOmega:  u(Omega, K^{2r}) = {x : x^* Omega + Omega x = 0}, Omega =
//            [[0, 1], [-1, 0]], stored as complex N x N matrices (N = 2r for
//            R and C, N = 4r for H through the 2x2 complex image of H).
//   SO2d:    so(G) with G = diag(1, 1, -1, ..., -1) on R^{d+2}, coordinates
//            (t, v_0, ..., v_{d-1}, s).
//   Product: block diagonal g + g for direct sums.
// The basis is orthonormal for <X, Y> = Re tr(X Y^*).
struct LieModel {
  Algebra algebra;
  ModelKind kind = ModelKind::UOmega;
  BaseField field = BaseField::Real;
  int matrix_size = 0;
  CMat form;
  std::vector<CMat> basis;
  std::vector<CMat> derived_basis;  // the commutator algebra [g, g]
  CMat tau_h_matrix;                // Ad(tau_h_matrix) = tau_h
  Model inner;                      // Product only
  Mat basis_rows;                   // dim x 2N^2, realified basis
  Mat derived_rows;

  int dim() const { return static_cast<int>(basis.size()); }
  int derived_dim() const { return static_cast<int>(derived_basis.size()); }

  CMat embed(const Vec& v) const;    // V -> g_1(h)
  Vec extract(const CMat& x) const;  // g_1(h) -> V
  Vec coords(const CMat& x, bool derived = false) const;
  CMat from_coords(const Vec& c, bool derived = false) const;
  CMat theta(const CMat& x) const { return -x.adjoint(); }
  CMat tau_h(const CMat& x) const {
    return tau_h_matrix * x * tau_h_matrix.inverse();
  }
  // Matrix of a linear map of g (or of [g, g]) in basis coordinates.
  Mat matrix_of(const std::function<CMat(const CMat&)>& f,
                bool derived = false) const;
  Mat ad(const CMat& x, bool derived = false) const;
  bool in_algebra(const CMat& x, double tol) const;
  bool respects_field(const CMat& x, double tol) const;
  bool in_group(const CMat& g, double tol) const;
  // Linear action of a group element on its representation space.
  CMat group_identity() const {
    return CMat::Identity(matrix_size, matrix_size);
  }
};

Model matrix_model(const Algebra& algebra);

CMat bracket(const CMat& x, const CMat& y);
CMat matrix_exp(const CMat& x);
CMat adjoint_action(const CMat& g, const CMat& x);

struct EulerElements {
  CMat h, e, f, zk, k;
  // sl_2 data attached to the standard Jordan frame c_1, ..., c_r.
  std::vector<CMat> frame_e, frame_h, frame_zk, frame_k;

  int rank() const { return static_cast<int>(frame_e.size()); }
  CMat hj(int j) const;
  CMat zkj(int j) const;
  CMat kj(int j) const;  // Ad(exp(-(pi/2) z_k^j)) h
};

EulerElements euler_elements(const LieModel& model);

struct GradedParts {
  CMat minus, zero, plus;
};

// Components of x in g_{-1}, g_0, g_1 of an Euler element h.
GradedParts grade_project(const LieModel& model, const CMat& x, const CMat& h);
bool is_euler_element(const LieModel& model, const CMat& h, double tol = 1e-7);

struct PierceDecomposition {
  Mat p_plus, p_zero, p_minus;  // projections of V onto V_1, V_0, V_{-1}
  int dim_plus = 0, dim_zero = 0, dim_minus = 0;
};

// Eigenspace decomposition of V = g_1(h) under ad h^j.
PierceDecomposition pierce_decomposition(const LieModel& model, int j);
bool wedge_membership_hj(const LieModel& model, const Vec& x, int j);
// Cross-check: [h^j, x] in the open positive cone.
bool wedge_membership_bracket(const LieModel& model, const Vec& x, int j);

enum class SpectrumClass { Elliptic, Hyperbolic, Mixed, NilpotentContaminated };
std::string spectrum_class_name(SpectrumClass c);

SpectrumClass classify_operator(const Mat& a);
SpectrumClass ad_spectrum_class(const LieModel& model, const CMat& x);

int orientation_sign(const LieModel& model, const CMat& g);

// Invertibility test: h lies in [x, g_{-1}(h)] for x = embed(v).
bool bracket_invertibility_criterion(const LieModel& model, const Vec& v);

// Jordan product recovered from the Lie bracket: [[x, f], y].
Vec bracket_jordan_product(const LieModel& model, const EulerElements& eu,
                           const Vec& x, const Vec& y);

}  // namespace causal
