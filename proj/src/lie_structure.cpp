#include "causal/lie_structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <unsupported/Eigen/MatrixFunctions>

namespace causal {

namespace {

Vec realify(const CMat& x) {
  const Eigen::Index n = x.size();
  Vec out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = x.data()[i].real();
    out(n + i) = x.data()[i].imag();
  }
  return out;
}

CMat unrealify(const Vec& v, int n) {
  CMat x(n, n);
  const Eigen::Index m = static_cast<Eigen::Index>(n) * n;
  for (Eigen::Index i = 0; i < m; ++i) x.data()[i] = cplx(v(i), v(m + i));
  return x;
}

Mat rows_of(const std::vector<CMat>& basis, int n) {
  Mat rows(basis.size(), 2 * n * n);
  for (size_t i = 0; i < basis.size(); ++i) rows.row(i) = realify(basis[i]);
  return rows;
}

// Orthonormal basis of the kernel of a real matrix, via its Gram matrix.
Mat kernel_basis(const Mat& c) {
  Mat gram = c.transpose() * c;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const Vec& ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<int> idx;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < 1e-10 * scale) idx.push_back(i);
  }
  Mat k(c.cols(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i) k.col(i) = es.eigenvectors().col(idx[i]);
  return k;
}

CMat quaternionic_structure_big(int n) {
  CMat s = CMat::Zero(n, n);
  for (int i = 0; i < n / 2; ++i) {
    s(2 * i, 2 * i + 1) = 1.0;
    s(2 * i + 1, 2 * i) = -1.0;
  }
  return s;
}

std::vector<CMat> ambient_basis(BaseField field, int n) {
  std::vector<CMat> out;
  if (field == BaseField::Quaternion) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0, 1);
    Eigen::Matrix2cd units[4];
    units[0] << 1, 0, 0, 1;
    units[1] << i, 0, 0, -i;
    units[2] << 0, 1, -1, 0;
    units[3] << 0, i, i, 0;
    for (int a = 0; a < n / 2; ++a) {
      for (int b = 0; b < n / 2; ++b) {
        for (auto& u : units) {
          CMat m = CMat::Zero(n, n);
          m.block<2, 2>(2 * a, 2 * b) = s * u;
          out.push_back(m);
        }
      }
    }
    return out;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      CMat m = CMat::Zero(n, n);
      m(a, b) = 1.0;
      out.push_back(m);
      if (field == BaseField::Complex) {
        m(a, b) = cplx(0, 1);
        out.push_back(m);
      }
    }
  }
  return out;
}

// Solves x^* F + F x = 0 over the ambient basis.
std::vector<CMat> solve_invariance(const std::vector<CMat>& amb, const CMat& f) {
  const int n = static_cast<int>(f.rows());
  Mat c(2 * n * n, amb.size());
  for (size_t i = 0; i < amb.size(); ++i) {
    c.col(i) = realify(amb[i].adjoint() * f + f * amb[i]);
  }
  Mat k = kernel_basis(c);
  std::vector<CMat> basis;
  for (int j = 0; j < k.cols(); ++j) {
    CMat x = CMat::Zero(n, n);
    for (size_t i = 0; i < amb.size(); ++i) x += k(i, j) * amb[i];
    basis.push_back(x);
  }
  return basis;
}

void finish_model(LieModel& m) {
  const int n = m.matrix_size;
  m.basis_rows = rows_of(m.basis, n);
  if (m.kind == ModelKind::Product) return;
  // Center: joint kernel of ad(B_k); the commutator algebra is its
  // orthogonal complement.
  const int d = m.dim();
  Mat gram = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Mat a = m.ad(m.basis[k]);
    gram += a.transpose() * a;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) >= 1e-10 * scale) {
      m.derived_basis.push_back(m.from_coords(es.eigenvectors().col(i)));
    }
  }
  m.derived_rows = rows_of(m.derived_basis, n);
}

Model build_model(const Algebra& a) {
  auto m = std::make_shared<LieModel>();
  m->algebra = a;
  switch (a->family) {
    case Family::SymR:
    case Family::HermC:
    case Family::HermH: {
      m->kind = ModelKind::UOmega;
      m->field = a->family == Family::SymR    ? BaseField::Real
                 : a->family == Family::HermC ? BaseField::Complex
                                              : BaseField::Quaternion;
      const int half = a->matrix_size();
      const int n = 2 * half;
      m->matrix_size = n;
      m->form = CMat::Zero(n, n);
      m->form.topRightCorner(half, half) = CMat::Identity(half, half);
      m->form.bottomLeftCorner(half, half) = -CMat::Identity(half, half);
      m->tau_h_matrix = CMat::Identity(n, n);
      m->tau_h_matrix.bottomRightCorner(half, half) *= -1.0;
      m->basis = solve_invariance(ambient_basis(m->field, n), m->form);
      break;
    }
    case Family::SpinFactor: {
      m->kind = ModelKind::SO2d;
      m->field = BaseField::Real;
      const int n = a->dim + 2;
      m->matrix_size = n;
      m->form = CMat::Identity(n, n);
      for (int i = 2; i < n; ++i) m->form(i, i) = -1.0;
      m->tau_h_matrix = CMat::Identity(n, n);
      m->tau_h_matrix(0, 0) = -1.0;
      m->tau_h_matrix(n - 1, n - 1) = -1.0;
      m->basis = solve_invariance(ambient_basis(BaseField::Real, n), m->form);
      break;
    }
    case Family::DirectSum: {
      Model in = matrix_model(a->inner);
      m->kind = ModelKind::Product;
      m->field = in->field;
      m->inner = in;
      const int ni = in->matrix_size;
      const int n = 2 * ni;
      m->matrix_size = n;
      auto diag = [&](const CMat& x, const CMat& y) {
        CMat out = CMat::Zero(n, n);
        out.topLeftCorner(ni, ni) = x;
        out.bottomRightCorner(ni, ni) = y;
        return out;
      };
      CMat zero = CMat::Zero(ni, ni);
      m->form = diag(in->form, in->form);
      m->tau_h_matrix = diag(in->tau_h_matrix, in->tau_h_matrix);
      for (const auto& b : in->basis) m->basis.push_back(diag(b, zero));
      for (const auto& b : in->basis) m->basis.push_back(diag(zero, b));
      for (const auto& b : in->derived_basis) m->derived_basis.push_back(diag(b, zero));
      for (const auto& b : in->derived_basis) m->derived_basis.push_back(diag(zero, b));
      m->derived_rows = rows_of(m->derived_basis, n);
      break;
    }
    default:
      throw Error(ErrorCode::UnsupportedFamily,
                  "no matrix model for " + a->describe());
  }
  finish_model(*m);
  return m;
}

}  // namespace

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::UOmega: return "UOmega";
    case ModelKind::SO2d: return "SO2d";
    case ModelKind::Product: return "Product";
  }
  return "Unknown";
}

CMat bracket(const CMat& x, const CMat& y) { return x * y - y * x; }

CMat matrix_exp(const CMat& x) { return x.exp(); }

CMat adjoint_action(const CMat& g, const CMat& x) {
  return g * x * g.inverse();
}

Model matrix_model(const Algebra& algebra) {
  static std::mutex mu;
  static std::map<std::string, Model> cache;
  const std::string key = algebra->describe();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Model m = build_model(algebra);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, m);
  return m;
}

CMat LieModel::embed(const Vec& v) const {
  const int n = matrix_size;
  CMat x = CMat::Zero(n, n);
  switch (kind) {
    case ModelKind::UOmega: {
      const int half = n / 2;
      x.topRightCorner(half, half) = algebra->to_matrix(v);
      break;
    }
    case ModelKind::SO2d: {
      const Eigen::Index d = n - 2;
      for (Eigen::Index a = 0; a < d; ++a) {
        double flat = a == 0 ? v(a) : -v(a);
        x(1 + a, 0) = v(a);
        x(1 + a, n - 1) = -v(a);
        x(0, 1 + a) = -flat;
        x(n - 1, 1 + a) = -flat;
      }
      break;
    }
    case ModelKind::Product: {
      const int ni = inner->matrix_size;
      const int di = inner->algebra->dim;
      x.topLeftCorner(ni, ni) = inner->embed(v.head(di));
      x.bottomRightCorner(ni, ni) = inner->embed(v.tail(di));
      break;
    }
  }
  return x;
}

Vec LieModel::extract(const CMat& x) const {
  const int n = matrix_size;
  switch (kind) {
    case ModelKind::UOmega: {
      const int half = n / 2;
      return algebra->from_matrix(x.topRightCorner(half, half));
    }
    case ModelKind::SO2d: {
      const int d = n - 2;
      Vec v(d);
      for (int a = 0; a < d; ++a) v(a) = x(1 + a, 0).real();
      return v;
    }
    case ModelKind::Product: {
      const int ni = inner->matrix_size;
      const int di = inner->algebra->dim;
      Vec v(2 * di);
      v << inner->extract(x.topLeftCorner(ni, ni)),
          inner->extract(x.bottomRightCorner(ni, ni));
      return v;
    }
  }
  return Vec();
}

Vec LieModel::coords(const CMat& x, bool derived) const {
  return (derived ? derived_rows : basis_rows) * realify(x);
}

CMat LieModel::from_coords(const Vec& c, bool derived) const {
  const Mat& rows = derived ? derived_rows : basis_rows;
  return unrealify(rows.transpose() * c, matrix_size);
}

Mat LieModel::matrix_of(const std::function<CMat(const CMat&)>& f,
                        bool derived) const {
  const auto& b = derived ? derived_basis : basis;
  Mat out(b.size(), b.size());
  for (size_t k = 0; k < b.size(); ++k) out.col(k) = coords(f(b[k]), derived);
  return out;
}

Mat LieModel::ad(const CMat& x, bool derived) const {
  return matrix_of([&](const CMat& y) { return bracket(x, y); }, derived);
}

bool LieModel::respects_field(const CMat& x, double tol) const {
  const double scale = std::max(1.0, x.norm());
  switch (field) {
    case BaseField::Real: return x.imag().norm() <= tol * scale;
    case BaseField::Complex: return true;
    case BaseField::Quaternion: {
      CMat s = quaternionic_structure_big(matrix_size);
      return (x.conjugate() - s * x * s.inverse()).norm() <= tol * scale;
    }
  }
  return false;
}

bool LieModel::in_algebra(const CMat& x, double tol) const {
  if (x.rows() != matrix_size || x.cols() != matrix_size) return false;
  const double scale = std::max(1.0, x.norm());
  return (x - from_coords(coords(x))).norm() <= tol * scale;
}

bool LieModel::in_group(const CMat& g, double tol) const {
  if (g.rows() != matrix_size || g.cols() != matrix_size) return false;
  const double scale = std::max(1.0, g.squaredNorm());
  if ((g.adjoint() * form * g - form).norm() > tol * scale) return false;
  if (!respects_field(g, tol)) return false;
  if (kind == ModelKind::Product) {
    const int ni = inner->matrix_size;
    if (g.topRightCorner(ni, ni).norm() > tol * scale ||
        g.bottomLeftCorner(ni, ni).norm() > tol * scale) {
      return false;
    }
  }
  return true;
}

CMat EulerElements::hj(int j) const {
  if (j < 0 || j > rank()) throw Error(ErrorCode::IndexOutOfRange, "j out of range");
  CMat out = CMat::Zero(h.rows(), h.cols());
  for (int i = 0; i < rank(); ++i) out += (i < rank() - j ? 1.0 : -1.0) * frame_h[i];
  return out;
}

CMat EulerElements::zkj(int j) const {
  if (j < 0 || j > rank()) throw Error(ErrorCode::IndexOutOfRange, "j out of range");
  CMat out = CMat::Zero(h.rows(), h.cols());
  for (int i = 0; i < rank(); ++i) out += (i < rank() - j ? 1.0 : -1.0) * frame_zk[i];
  return out;
}

CMat EulerElements::kj(int j) const {
  return adjoint_action(matrix_exp(-M_PI / 2 * zkj(j)), h);
}

EulerElements euler_elements(const LieModel& model) {
  EulerElements eu;
  const int n = model.matrix_size;
  switch (model.kind) {
    case ModelKind::UOmega: {
      eu.h = CMat::Identity(n, n) * 0.5;
      eu.h.bottomRightCorner(n / 2, n / 2) *= -1.0;
      break;
    }
    case ModelKind::SO2d: {
      eu.h = CMat::Zero(n, n);
      eu.h(0, n - 1) = eu.h(n - 1, 0) = 1.0;
      break;
    }
    case ModelKind::Product: {
      EulerElements in = euler_elements(*model.inner);
      const int ni = model.inner->matrix_size;
      eu.h = CMat::Zero(n, n);
      eu.h.topLeftCorner(ni, ni) = in.h;
      eu.h.bottomRightCorner(ni, ni) = in.h;
      break;
    }
  }
  const auto& a = *model.algebra;
  eu.e = model.embed(a.unit());
  eu.f = -0.5 * model.theta(eu.e);
  eu.zk = 0.5 * (eu.e + model.theta(eu.e));
  eu.k = adjoint_action(matrix_exp(-M_PI / 2 * eu.zk), eu.h);
  for (const Vec& c : a.standard_frame()) {
    CMat ei = model.embed(c);
    CMat fi = -0.5 * model.theta(ei);
    CMat hi = bracket(ei, fi);
    CMat zi = 0.5 * (ei + model.theta(ei));
    eu.frame_e.push_back(ei);
    eu.frame_h.push_back(hi);
    eu.frame_zk.push_back(zi);
    eu.frame_k.push_back(adjoint_action(matrix_exp(-M_PI / 2 * zi), hi));
  }
  return eu;
}

bool is_euler_element(const LieModel& model, const CMat& h, double tol) {
  if (!model.in_algebra(h, tol)) return false;
  Mat a = model.ad(h);
  if (a.norm() <= tol) return false;
  return (a * a * a - a).norm() <= tol * std::max(1.0, a.norm());
}

GradedParts grade_project(const LieModel& model, const CMat& x, const CMat& h) {
  if (!is_euler_element(model, h)) {
    throw Error(ErrorCode::NotEulerElement, "ad h is not a 3-grading");
  }
  Mat a = model.ad(h);
  const int d = model.dim();
  Mat id = Mat::Identity(d, d);
  Vec c = model.coords(x);
  GradedParts g;
  g.plus = model.from_coords(0.5 * (a * (a + id)) * c);
  g.minus = model.from_coords(0.5 * (a * (a - id)) * c);
  g.zero = model.from_coords((id - a * a) * c);
  return g;
}

PierceDecomposition pierce_decomposition(const LieModel& model, int j) {
  const auto& alg = *model.algebra;
  if (j < 0 || j > alg.rank) throw Error(ErrorCode::IndexOutOfRange, "j out of range");
  CMat hj = euler_elements(model).hj(j);
  const int n = alg.dim;
  Mat m(n, n);
  for (int k = 0; k < n; ++k) {
    m.col(k) = model.extract(bracket(hj, model.embed(Vec::Unit(n, k))));
  }
  Mat id = Mat::Identity(n, n);
  PierceDecomposition p;
  p.p_plus = 0.5 * m * (m + id);
  p.p_minus = 0.5 * m * (m - id);
  p.p_zero = id - m * m;
  p.dim_plus = static_cast<int>(std::lround(p.p_plus.trace()));
  p.dim_minus = static_cast<int>(std::lround(p.p_minus.trace()));
  p.dim_zero = static_cast<int>(std::lround(p.p_zero.trace()));
  return p;
}

namespace {

int count_positive(const AlgebraDescriptor& a, const Vec& x, double tol) {
  Vec ev = spectral_decompose(a, x).eigenvalues;
  int count = 0;
  for (int i = 0; i < ev.size(); ++i) count += ev(i) > tol;
  return count;
}

}  // namespace

bool wedge_membership_hj(const LieModel& model, const Vec& x, int j) {
  const auto& alg = *model.algebra;
  PierceDecomposition p = pierce_decomposition(model, j);
  const double tol = tolerances().algebra * std::max(1.0, x.norm());
  Vec xp = p.p_plus * x;
  Vec xm = p.p_minus * x;
  return count_positive(alg, xp, tol) == alg.rank - j &&
         count_positive(alg, -xm, tol) == j;
}

bool wedge_membership_bracket(const LieModel& model, const Vec& x, int j) {
  CMat hj = euler_elements(model).hj(j);
  Vec y = model.extract(bracket(hj, model.embed(x)));
  return in_open_cone(*model.algebra, y);
}

std::string spectrum_class_name(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::Elliptic: return "Elliptic";
    case SpectrumClass::Hyperbolic: return "Hyperbolic";
    case SpectrumClass::Mixed: return "Mixed";
    case SpectrumClass::NilpotentContaminated: return "NilpotentContaminated";
  }
  return "Unknown";
}

namespace {

// Snaps tiny eigenvalues to zero; returns the spectral scale.
double snap_spectrum(CVec& ev) {
  double scale = 1.0;
  for (int i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < 1e-5 * scale) ev(i) = 0.0;
  }
  return scale;
}

// Per cluster of the spectrum (single linkage, radius 1e-6 * scale) the
// geometric multiplicity must equal the cluster size.
bool is_semisimple(const CMat& a, const CVec& ev, double scale) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(ev(i) - ev(j)) < 1e-6 * scale) parent[find(i)] = find(j);
    }
  }
  std::map<int, std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) clusters[find(i)].push_back(i);
  for (const auto& [root, members] : clusters) {
    const int mult = static_cast<int>(members.size());
    if (mult < 2) continue;
    cplx mu = 0;
    for (int i : members) mu += ev(i);
    mu /= static_cast<double>(mult);
    Eigen::JacobiSVD<CMat> svd(a - mu * CMat::Identity(n, n));
    const Vec& sv = svd.singularValues();
    int nullity = 0;
    for (int i = 0; i < sv.size(); ++i) nullity += sv(i) < 1e-6 * scale;
    if (nullity < mult) return false;
  }
  return true;
}

SpectrumClass class_of_spectrum(const CVec& ev, double scale) {
  const double tol = 1e-6 * scale;
  bool imaginary = true, real = true;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).real()) > tol) imaginary = false;
    if (std::abs(ev(i).imag()) > tol) real = false;
  }
  if (imaginary) return SpectrumClass::Elliptic;
  if (real) return SpectrumClass::Hyperbolic;
  return SpectrumClass::Mixed;
}

// Fixed pseudo-random orthogonal matrix.
Mat scrambler(int n) {
  Rng rng(0x5eed);
  std::normal_distribution<double> g(0, 1);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return Eigen::HouseholderQR<Mat>(m).householderQ();
}

// Hessenberg QR occasionally stalls on exactly structured (e.g. purely
// imaginary) spectra; fall back to the complex solver and then to an
// orthogonal similarity, which leaves the spectrum unchanged.
CVec complex_eigenvalues(const CMat& a) {
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  if (es.info() == Eigen::Success) return es.eigenvalues();
  const int n = static_cast<int>(a.rows());
  const CMat q = scrambler(n).cast<cplx>();
  es.compute(q.adjoint() * a * q, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eigensolver failed");
  }
  return es.eigenvalues();
}

CVec real_eigenvalues(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a, false);
  if (es.info() == Eigen::Success) return es.eigenvalues();
  const Mat q = scrambler(static_cast<int>(a.rows()));
  es.compute(q.transpose() * a * q, false);
  if (es.info() == Eigen::Success) return es.eigenvalues();
  return complex_eigenvalues(a.cast<cplx>());
}

}  // namespace

SpectrumClass classify_operator(const Mat& a) {
  CVec ev = real_eigenvalues(a);
  const double scale = snap_spectrum(ev);
  if (!is_semisimple(a.cast<cplx>(), ev, scale)) {
    return SpectrumClass::NilpotentContaminated;
  }
  return class_of_spectrum(ev, scale);
}

// ad x is semisimple iff x is: the nilpotent Jordan part of x would have to be
// central, and the centers of the models contain no nonzero nilpotents. The
// defectiveness test therefore runs on the small matrix x, the spectral class
// on ad x itself.
SpectrumClass ad_spectrum_class(const LieModel& model, const CMat& x) {
  CVec ev = real_eigenvalues(model.ad(x));
  const double scale = snap_spectrum(ev);
  CVec xev = complex_eigenvalues(x);
  const double xscale = snap_spectrum(xev);
  if (!is_semisimple(x, xev, xscale)) return SpectrumClass::NilpotentContaminated;
  return class_of_spectrum(ev, scale);
}

int orientation_sign(const LieModel& model, const CMat& g) {
  if (!model.in_group(g, 1e-7)) {
    throw Error(ErrorCode::NonGroupMatrix, "matrix is not in the model group");
  }
  const int n = model.algebra->dim;
  Mat m(n, n);
  for (int k = 0; k < n; ++k) {
    CMat y = adjoint_action(g, model.embed(Vec::Unit(n, k)));
    Vec v = model.extract(y);
    if ((model.embed(v) - y).norm() > 1e-7 * std::max(1.0, y.norm())) {
      throw Error(ErrorCode::NotNormalizing, "Ad(g) does not preserve g_1(h)");
    }
    m.col(k) = v;
  }
  double det = m.determinant();
  if (std::abs(det) < 1e-12) {
    throw Error(ErrorCode::NumericalFailure, "singular action on g_1(h)");
  }
  return det > 0 ? 1 : -1;
}

bool bracket_invertibility_criterion(const LieModel& model, const Vec& v) {
  const int n = model.algebra->dim;
  EulerElements eu = euler_elements(model);
  CMat x = model.embed(v);
  Mat cols(2 * model.matrix_size * model.matrix_size, n);
  for (int k = 0; k < n; ++k) {
    cols.col(k) = realify(bracket(x, model.theta(model.embed(Vec::Unit(n, k)))));
  }
  Vec target = realify(eu.h);
  Vec sol = cols.completeOrthogonalDecomposition().solve(target);
  return (cols * sol - target).norm() <= 1e-8 * target.norm();
}

Vec bracket_jordan_product(const LieModel& model, const EulerElements& eu,
                           const Vec& x, const Vec& y) {
  return model.extract(bracket(bracket(model.embed(x), eu.f), model.embed(y)));
}

}  // namespace causal
