#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "causal/errors.hpp"

namespace causal {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;
using Rng = std::mt19937_64;

enum class Family { SpinFactor, SymR, HermC, HermH, HermO, DirectSum };

std::string family_name(Family family);
Family parse_family(const std::string& name);

struct AlgebraDescriptor;
using Algebra = std::shared_ptr<const AlgebraDescriptor>;

// A euclidean Jordan algebra with a fixed real basis.
//
// Coordinates:
//   SpinFactor(d): (x0, x1, ..., x_{d-1}) in R^{1,d-1}.
//   SymR/HermC/HermH(r): the r diagonal entries, then for each i < j (row
//     major) the components of x_ij: 1 (real), 2 (re, im) or 4 (1, i, j, k).
//   DirectSum(inner): coordinates of both summands, concatenated.
// Native representation (`to_matrix`): a d x 1 column for the spin factor,
// the r x r hermitian matrix for R and C, and the 2r x 2r complex image under
// q = a + bi + (c + di)j  ->  [[a+bi, c+di], [-c+di, a-bi]] for H.
struct AlgebraDescriptor {
  Family family = Family::SymR;
  int size = 1;
  Algebra inner;  // DirectSum only
  int rank = 1;
  int dim = 1;
  bool simple = true;
  std::vector<CMat> basis;
  Mat trace_form;

  bool is_matrix_family() const {
    return family == Family::SymR || family == Family::HermC ||
           family == Family::HermH;
  }
  // Size of the native complex matrix (r, r, 2r); d for the spin factor.
  int matrix_size() const;
  std::string describe() const;

  Vec unit() const;
  Vec product(const Vec& x, const Vec& y) const;
  Vec square(const Vec& x) const { return product(x, x); }
  double trace(const Vec& x) const;
  double inner_product(const Vec& x, const Vec& y) const {
    return trace(product(x, y));
  }
  CMat to_matrix(const Vec& x) const;
  Vec from_matrix(const CMat& m) const;
  Vec random_element(Rng& rng, double scale = 1.0) const;
  // Standard Jordan frame: diagonal idempotents E_ii, resp. (e0 +- e1)/2.
  std::vector<Vec> standard_frame() const;
  // c^j = c_1 + ... + c_{r-j} - c_{r-j+1} - ... - c_r.
  Vec signed_frame_sum(int j) const;

  bool same_as(const AlgebraDescriptor& other) const {
    return family == other.family && size == other.size &&
           (family != Family::DirectSum || inner->same_as(*other.inner));
  }
};

Algebra make_algebra(Family family, int size);
Algebra make_direct_sum(const Algebra& inner);

struct JordanElement {
  Algebra algebra;
  Vec coords;
};

JordanElement make_element(const Algebra& algebra, const Vec& coords);

struct SpectralData {
  Vec eigenvalues;        // nonincreasing
  std::vector<Vec> frame; // orthogonal primitive idempotents
};

struct Signature {
  int p = 0;
  int q = 0;
  bool operator==(const Signature&) const = default;
};

struct MultiplicationOperators {
  Mat L;
  Mat P;
};

struct InverseData {
  double det = 0;
  double trace = 0;
  std::optional<Vec> inverse;
  Signature signature;
};

struct ConeNorm {
  bool in_cone_open = false;
  bool in_cone_closed = false;
  double spectral_norm = 0;
  bool in_unit_ball = false;
};

struct BergmanResult {
  Mat matrix;
  bool invertible = false;
};

// Coordinate-level operations.
Vec jordan_product(const AlgebraDescriptor& a, const Vec& x, const Vec& y);
Mat left_multiplication(const AlgebraDescriptor& a, const Vec& x);
MultiplicationOperators multiplication_operators(const AlgebraDescriptor& a,
                                                 const Vec& x);
SpectralData spectral_decompose(const AlgebraDescriptor& a, const Vec& x);
Vec spectral_apply(const AlgebraDescriptor& a, const Vec& x,
                   const std::function<double(double)>& f);
Vec spectral_apply(const AlgebraDescriptor& a, const SpectralData& s,
                   const std::function<double(double)>& f);
Signature signature_of(const Vec& eigenvalues, double tol);
InverseData invert_and_signature(const AlgebraDescriptor& a, const Vec& x);
std::optional<Vec> jordan_inverse(const AlgebraDescriptor& a, const Vec& x);
ConeNorm cone_and_norm(const AlgebraDescriptor& a, const Vec& x);
bool in_open_cone(const AlgebraDescriptor& a, const Vec& x);
bool double_cone_membership(const AlgebraDescriptor& a, const Vec& upper,
                            const Vec& lower, const Vec& x);
BergmanResult bergman_operator(const AlgebraDescriptor& a, const Vec& x,
                               const Vec& y);
// Random element of the open cone: random frame, eigenvalues in [lo, hi].
Vec random_cone_element(const AlgebraDescriptor& a, Rng& rng, double lo = 0.1,
                        double hi = 2.0);
// Random element of the open unit ball with spectral norm at most `radius`.
Vec random_unit_ball_element(const AlgebraDescriptor& a, Rng& rng,
                             double radius = 0.95);
// Random invertible element with prescribed signature (p, q), |eigenvalues|
// in [lo, hi].
Vec random_element_with_signature(const AlgebraDescriptor& a, int p, Rng& rng,
                                  double lo = 0.2, double hi = 2.0);

// Element-level API with algebra checks.
JordanElement jordan_product(const JordanElement& a, const JordanElement& b);
MultiplicationOperators multiplication_operators(const JordanElement& a);
SpectralData spectral_decompose(const JordanElement& x);
InverseData invert_and_signature(const JordanElement& x);
ConeNorm cone_and_norm(const JordanElement& x);
bool double_cone_membership(const JordanElement& a, const JordanElement& b,
                            const JordanElement& x);
BergmanResult bergman_operator(const JordanElement& x, const JordanElement& y);

}  // namespace causal
