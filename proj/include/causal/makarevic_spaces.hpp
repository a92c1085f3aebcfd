#pragma once

#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "causal/conformal_completion.hpp"

namespace causal {

enum class InvolutionKind {
  Identity,
  Pierce,               // alpha_j(x) = I_{r-j,j} x I_{r-j,j}
  SplitS1,              // entrywise conjugation on Herm_r(C)
  SplitS2,              // conjugation by the quaternion unit i on Herm_r(H)
  NonSplitNS1,          // Omega x Omega^{-1} on Sym_{2s}(R)
  NonSplitNS2,          // Omega conj(x) Omega^{-1} on Herm_{2s}(C)
  MinkowskiReflection,  // r_j = I_{d-j,j} on R^{1,d-1}
  Flip                  // (v, w) -> (w, v) on V + V
};

std::string involution_kind_name(InvolutionKind kind);
// Accepts "Identity", "SplitS1", "Flip", "Pierce(2)", "MinkowskiReflection(1)"
// and the short tags S1, S2, NS1, NS2, C, P(j), R(j).
std::pair<InvolutionKind, int> parse_involution(const std::string& name);

// An involutive Jordan automorphism together with the automorphism sigma_alpha
// of the matrix model it induces:
//   sigma_alpha(X) = A X A^*  or  A conj(X) A^*  (lie_conjugate), A unitary.
struct InvolutionSpec {
  Algebra algebra;
  InvolutionKind kind = InvolutionKind::Identity;
  int j = 0;
  Mat v_matrix;
  CMat lie_matrix;
  bool lie_conjugate = false;

  std::string name() const;  // e.g. "Pierce(1)"
  // Row label of the classification: C, P, S1, S2, S4, NS1, NS2, NS3 or Id.
  std::string type_tag() const;
  Vec apply(const Vec& v) const { return v_matrix * v; }
  CMat sigma(const CMat& x) const;
  // theta_alpha = theta o sigma_alpha (sign +1), theta_{-alpha} = tau_h o
  // theta_alpha (sign -1).
  CMat theta_alpha(const LieModel& model, const CMat& x, int sign) const;
};

InvolutionSpec make_involution(const Algebra& algebra, InvolutionKind kind,
                               int j = 0);
// Every cataloged involution of a simple algebra, with the flip on V + V.
std::vector<InvolutionSpec> involution_catalog(const Algebra& algebra);

struct FixedAlgebraReport {
  int sign = 1;
  int dim = 0;
  std::vector<CMat> basis;
  int h_part_dim = 0;  // tau_h-fixed part
  int q_part_dim = 0;  // tau_h-anti-fixed part
};

// ker(theta_{+-alpha} - 1) inside the commutator algebra [g, g].
FixedAlgebraReport fixed_algebra(const InvolutionSpec& spec, int sign);

struct ConeVerdict {
  SpectrumClass verdict = SpectrumClass::Elliptic;
  int samples = 0;
  std::optional<Vec> witness;  // first sample whose class disagrees
  SpectrumClass witness_class = SpectrumClass::Elliptic;
};

// Classifies x + sign * theta_alpha(x) for e and n_samples - 1 random x in
// the open cone.
ConeVerdict cone_classification(const InvolutionSpec& spec, int sign,
                                int n_samples, Rng& rng);

struct MembershipResult {
  bool bergman_invertible = false;
  std::optional<bool> in_base_component;  // none: inconclusive probe
};

MembershipResult makarevic_membership(const InvolutionSpec& spec, int sign,
                                      const Vec& v);

struct ModularityReport {
  bool modular = false;
  std::optional<CMat> witness;
  std::string method = "lattice-enumeration";
  int cartan_dim = 0;  // dimension of the maximal abelian subspace searched
};

ModularityReport modularity_check(const InvolutionSpec& spec);

// (x, y) lies in V_+ x (-V_+).
bool flip_wedge_membership(const AlgebraDescriptor& a, const Vec& x,
                           const Vec& y);
// d_j = exp((pi/2) z_k^j).
CMat partial_cayley_matrix(const LieModel& model, int j);
CompletionPoint partial_cayley_dj(int j, const CompletionPoint& p);

}  // namespace causal
