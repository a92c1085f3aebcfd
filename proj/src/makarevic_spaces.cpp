#include "causal/makarevic_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace causal {

namespace {

// Orthonormal basis of the null space of a, relative threshold tol.
Mat null_space(const Mat& a, double tol = 1e-9) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > tol * scale;
  return svd.matrixV().rightCols(n - rank);
}

// Orthonormal basis of the column span of a.
Mat column_span(const Mat& a, double tol = 1e-9) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > tol * scale;
  return svd.matrixU().leftCols(rank);
}

CMat signature_matrix(int p, int q, int block) {
  CMat m = CMat::Identity((p + q) * block, (p + q) * block);
  for (int i = p * block; i < (p + q) * block; ++i) m(i, i) = -1.0;
  return m;
}

CMat block_diag2(const CMat& a) {
  const Eigen::Index n = a.rows();
  CMat out = CMat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.bottomRightCorner(n, n) = a;
  return out;
}

CMat swap_matrix(int n) {
  CMat out = CMat::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = CMat::Identity(n, n);
  out.bottomLeftCorner(n, n) = CMat::Identity(n, n);
  return out;
}

// Omega_{2s} = [[0, -1], [1, 0]] in s x s blocks.
CMat omega_2s(int s) {
  CMat o = CMat::Zero(2 * s, 2 * s);
  o.topRightCorner(s, s) = -CMat::Identity(s, s);
  o.bottomLeftCorner(s, s) = CMat::Identity(s, s);
  return o;
}

Mat v_matrix_from(const AlgebraDescriptor& a,
                  const std::function<CMat(const CMat&)>& op) {
  Mat m(a.dim, a.dim);
  for (int k = 0; k < a.dim; ++k) {
    m.col(k) = a.from_matrix(op(a.to_matrix(Vec::Unit(a.dim, k))));
  }
  return m;
}

void incompatible(const InvolutionSpec& s) {
  throw Error(ErrorCode::IncompatibleKind,
              involution_kind_name(s.kind) + " is not defined on " +
                  s.algebra->describe());
}

}  // namespace

std::string involution_kind_name(InvolutionKind kind) {
  switch (kind) {
    case InvolutionKind::Identity: return "Identity";
    case InvolutionKind::Pierce: return "Pierce";
    case InvolutionKind::SplitS1: return "SplitS1";
    case InvolutionKind::SplitS2: return "SplitS2";
    case InvolutionKind::NonSplitNS1: return "NonSplitNS1";
    case InvolutionKind::NonSplitNS2: return "NonSplitNS2";
    case InvolutionKind::MinkowskiReflection: return "MinkowskiReflection";
    case InvolutionKind::Flip: return "Flip";
  }
  return "Unknown";
}

std::pair<InvolutionKind, int> parse_involution(const std::string& name) {
  static const std::regex with_index(R"(^\s*([A-Za-z0-9]+)\s*\(\s*(\d+)\s*\)\s*$)");
  std::smatch match;
  std::string head = name;
  int j = 0;
  bool indexed = false;
  if (std::regex_match(name, match, with_index)) {
    head = match[1];
    j = std::stoi(match[2]);
    indexed = true;
  }
  auto plain = [&](InvolutionKind k) -> std::pair<InvolutionKind, int> {
    if (indexed) throw Error(ErrorCode::IncompatibleKind, "unexpected index in " + name);
    return {k, 0};
  };
  if (head == "Identity" || head == "Id") return plain(InvolutionKind::Identity);
  if (head == "SplitS1" || head == "S1") return plain(InvolutionKind::SplitS1);
  if (head == "SplitS2" || head == "S2") return plain(InvolutionKind::SplitS2);
  if (head == "NonSplitNS1" || head == "NS1") return plain(InvolutionKind::NonSplitNS1);
  if (head == "NonSplitNS2" || head == "NS2") return plain(InvolutionKind::NonSplitNS2);
  if (head == "Flip" || head == "C") return plain(InvolutionKind::Flip);
  if ((head == "Pierce" || head == "P") && indexed) return {InvolutionKind::Pierce, j};
  if ((head == "MinkowskiReflection" || head == "R") && indexed) {
    return {InvolutionKind::MinkowskiReflection, j};
  }
  throw Error(ErrorCode::IncompatibleKind, "unknown involution '" + name + "'");
}

std::string InvolutionSpec::name() const {
  std::string n = involution_kind_name(kind);
  if (kind == InvolutionKind::Pierce || kind == InvolutionKind::MinkowskiReflection) {
    n += "(" + std::to_string(j) + ")";
  }
  return n;
}

std::string InvolutionSpec::type_tag() const {
  switch (kind) {
    case InvolutionKind::Identity: return "Id";
    case InvolutionKind::Pierce: return (j == 0 || j == algebra->rank) ? "Id" : "P";
    case InvolutionKind::SplitS1: return "S1";
    case InvolutionKind::SplitS2: return "S2";
    case InvolutionKind::NonSplitNS1: return "NS1";
    case InvolutionKind::NonSplitNS2: return "NS2";
    case InvolutionKind::MinkowskiReflection: {
      const int d = algebra->dim;
      if (j == 0) return "Id";
      if (j == d - 1) return "NS3";
      if (j == d - 2) return "P";
      return "S4";
    }
    case InvolutionKind::Flip: return "C";
  }
  return "?";
}

CMat InvolutionSpec::sigma(const CMat& x) const {
  return lie_conjugate ? CMat(lie_matrix * x.conjugate() * lie_matrix.adjoint())
                       : CMat(lie_matrix * x * lie_matrix.adjoint());
}

CMat InvolutionSpec::theta_alpha(const LieModel& model, const CMat& x,
                                 int sign) const {
  CMat y = model.theta(sigma(x));
  return sign > 0 ? y : model.tau_h(y);
}

InvolutionSpec make_involution(const Algebra& algebra, InvolutionKind kind, int j) {
  const auto& a = *algebra;
  InvolutionSpec s;
  s.algebra = algebra;
  s.kind = kind;
  s.j = j;
  if (a.family == Family::DirectSum) {
    if (kind != InvolutionKind::Flip) incompatible(s);
    const int n = a.inner->dim;
    s.v_matrix = Mat::Zero(2 * n, 2 * n);
    s.v_matrix.topRightCorner(n, n) = Mat::Identity(n, n);
    s.v_matrix.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    s.lie_matrix = swap_matrix(matrix_model(a.inner)->matrix_size);
    return s;
  }
  if (kind == InvolutionKind::Flip) incompatible(s);
  Model m = matrix_model(algebra);
  const int nm = m->matrix_size;

  if (a.family == Family::SpinFactor) {
    const int d = a.dim;
    int reflect = 0;  // number of -1 entries of r_j
    switch (kind) {
      case InvolutionKind::Identity: break;
      case InvolutionKind::Pierce:
        if (j < 0 || j > 2) throw Error(ErrorCode::IndexOutOfRange, "j out of range");
        reflect = j == 1 ? d - 2 : 0;
        break;
      case InvolutionKind::MinkowskiReflection:
        if (j < 0 || j > d - 1) throw Error(ErrorCode::IndexOutOfRange, "j out of range");
        reflect = j;
        break;
      default: incompatible(s);
    }
    s.v_matrix = Mat::Identity(d, d);
    for (int i = d - reflect; i < d; ++i) s.v_matrix(i, i) = -1.0;
    s.lie_matrix = CMat::Identity(nm, nm);
    s.lie_matrix.block(1, 1, d, d) = s.v_matrix.cast<cplx>();
    return s;
  }

  const int r = a.rank;
  const int block = a.family == Family::HermH ? 2 : 1;
  std::function<CMat(const CMat&)> op;
  switch (kind) {
    case InvolutionKind::Identity:
      s.lie_matrix = CMat::Identity(nm, nm);
      op = [](const CMat& x) { return x; };
      break;
    case InvolutionKind::Pierce: {
      if (j < 0 || j > r) throw Error(ErrorCode::IndexOutOfRange, "j out of range");
      CMat ipq = signature_matrix(r - j, j, block);
      s.lie_matrix = block_diag2(ipq);
      op = [ipq](const CMat& x) { return CMat(ipq * x * ipq); };
      break;
    }
    case InvolutionKind::SplitS1:
      if (a.family != Family::HermC) incompatible(s);
      s.lie_matrix = CMat::Identity(nm, nm);
      s.lie_conjugate = true;
      op = [](const CMat& x) { return CMat(x.conjugate()); };
      break;
    case InvolutionKind::SplitS2: {
      if (a.family != Family::HermH) incompatible(s);
      CMat u = CMat::Zero(2 * r, 2 * r);
      for (int i = 0; i < r; ++i) {
        u(2 * i, 2 * i) = cplx(0, 1);
        u(2 * i + 1, 2 * i + 1) = cplx(0, -1);
      }
      s.lie_matrix = block_diag2(u);
      op = [u](const CMat& x) { return CMat(u * x * u.adjoint()); };
      break;
    }
    case InvolutionKind::NonSplitNS1: {
      if (a.family != Family::SymR || r % 2 != 0) incompatible(s);
      CMat o = omega_2s(r / 2);
      s.lie_matrix = block_diag2(o);
      op = [o](const CMat& x) { return CMat(o * x * o.adjoint()); };
      break;
    }
    case InvolutionKind::NonSplitNS2: {
      if (a.family != Family::HermC || r % 2 != 0) incompatible(s);
      CMat o = omega_2s(r / 2);
      s.lie_matrix = block_diag2(o);
      s.lie_conjugate = true;
      op = [o](const CMat& x) { return CMat(o * x.conjugate() * o.adjoint()); };
      break;
    }
    default: incompatible(s);
  }
  s.v_matrix = v_matrix_from(a, op);
  return s;
}

std::vector<InvolutionSpec> involution_catalog(const Algebra& algebra) {
  const auto& a = *algebra;
  std::vector<InvolutionSpec> out;
  out.push_back(make_involution(algebra, InvolutionKind::Identity));
  if (a.family == Family::SpinFactor) {
    for (int j = 1; j < a.dim; ++j) {
      out.push_back(make_involution(algebra, InvolutionKind::MinkowskiReflection, j));
    }
  } else {
    for (int j = 1; j < a.rank; ++j) {
      out.push_back(make_involution(algebra, InvolutionKind::Pierce, j));
    }
    if (a.family == Family::HermC) {
      out.push_back(make_involution(algebra, InvolutionKind::SplitS1));
      if (a.rank % 2 == 0) out.push_back(make_involution(algebra, InvolutionKind::NonSplitNS2));
    }
    if (a.family == Family::HermH) out.push_back(make_involution(algebra, InvolutionKind::SplitS2));
    if (a.family == Family::SymR && a.rank % 2 == 0) {
      out.push_back(make_involution(algebra, InvolutionKind::NonSplitNS1));
    }
  }
  out.push_back(make_involution(make_direct_sum(algebra), InvolutionKind::Flip));
  return out;
}

FixedAlgebraReport fixed_algebra(const InvolutionSpec& spec, int sign) {
  Model m = matrix_model(spec.algebra);
  Mat t = m->matrix_of([&](const CMat& x) { return spec.theta_alpha(*m, x, sign); }, true);
  const int n = m->derived_dim();
  Mat k = null_space(t - Mat::Identity(n, n));
  FixedAlgebraReport rep;
  rep.sign = sign;
  rep.dim = static_cast<int>(k.cols());
  for (int i = 0; i < k.cols(); ++i) rep.basis.push_back(m->from_coords(k.col(i), true));
  Mat th = m->matrix_of([&](const CMat& x) { return m->tau_h(x); }, true);
  Mat restricted = k.transpose() * th * k;
  rep.h_part_dim = static_cast<int>(
      std::lround(0.5 * (restricted.trace() + static_cast<double>(rep.dim))));
  rep.q_part_dim = rep.dim - rep.h_part_dim;
  return rep;
}

ConeVerdict cone_classification(const InvolutionSpec& spec, int sign,
                                 int n_samples, Rng& rng) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidSize, "n_samples must be positive");
  Model m = matrix_model(spec.algebra);
  const auto& a = *spec.algebra;
  const SpectrumClass expected = sign > 0 ? SpectrumClass::Elliptic : SpectrumClass::Hyperbolic;
  ConeVerdict out;
  std::optional<SpectrumClass> common;
  bool uniform = true;
  for (int i = 0; i < n_samples; ++i) {
    Vec x = i == 0 ? a.unit() : random_cone_element(a, rng);
    CMat xm = m->embed(x);
    CMat y = xm + static_cast<double>(sign) * spec.theta_alpha(*m, xm, 1);
    SpectrumClass c = ad_spectrum_class(*m, y);
    if (!common) common = c;
    if (c != *common) uniform = false;
    if (c != expected && !out.witness) {
      out.witness = x;
      out.witness_class = c;
    }
    ++out.samples;
  }
  out.verdict = uniform ? *common : SpectrumClass::Mixed;
  return out;
}

MembershipResult makarevic_membership(const InvolutionSpec& spec, int sign,
                                      const Vec& v) {
  const auto& a = *spec.algebra;
  if (v.size() != a.dim) throw Error(ErrorCode::InvalidSize, "vector size mismatch");
  const double s = sign > 0 ? 1.0 : -1.0;
  MembershipResult out;
  out.bergman_invertible = bergman_operator(a, v, s * spec.apply(v)).invertible;
  if (!out.bergman_invertible) {
    out.in_base_component = false;
    return out;
  }
  // Straight path 0 -> v: inconclusive if B comes close to singular or its
  // determinant changes sign between samples.
  const int steps = 64;
  double prev_det = 1.0;
  for (int k = 1; k <= steps; ++k) {
    Vec w = v * (static_cast<double>(k) / steps);
    Mat b = bergman_operator(a, w, s * spec.apply(w)).matrix;
    Eigen::JacobiSVD<Mat> svd(b);
    const Vec& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-6 * std::max(1.0, sv(0))) return out;
    double det = b.determinant();
    if (det * prev_det < 0) return out;
    prev_det = det;
  }
  out.in_base_component = true;
  return out;
}

ModularityReport modularity_check(const InvolutionSpec& spec) {
  Model m = matrix_model(spec.algebra);
  const LieModel& model = *m;
  ModularityReport rep;
  FixedAlgebraReport g = fixed_algebra(spec, 1);
  const int nd = model.derived_dim();

  // Commutator algebra of g^(alpha), in derived coordinates.
  Mat brackets(nd, g.dim * (g.dim - 1) / 2);
  int col = 0;
  for (int i = 0; i < g.dim; ++i) {
    for (int k = i + 1; k < g.dim; ++k) {
      brackets.col(col++) = model.coords(bracket(g.basis[i], g.basis[k]), true);
    }
  }
  Mat comm = column_span(brackets, 1e-8);

  // q = [g^a, g^a] cap h^a cap p: tau_h-fixed hermitian elements.
  Mat th = model.matrix_of([&](const CMat& x) { return model.tau_h(x); }, true);
  Mat theta = model.matrix_of([&](const CMat& x) { return model.theta(x); }, true);
  Mat id = Mat::Identity(nd, nd);
  Mat constraints(2 * nd, comm.cols());
  constraints << (th - id) * comm, (theta + id) * comm;
  Mat q = comm * null_space(constraints, 1e-8);
  if (q.cols() == 0) return rep;

  // Maximal abelian subspace: centralizer in q of a generic element.
  Rng rng(12345);
  std::normal_distribution<double> nd01;
  Vec c(q.cols());
  for (int i = 0; i < c.size(); ++i) c(i) = nd01(rng);
  CMat x0 = model.from_coords(q * c, true);
  Mat comm_x(model.dim(), q.cols());
  for (int i = 0; i < q.cols(); ++i) {
    comm_x.col(i) = model.coords(bracket(x0, model.from_coords(q.col(i), true)));
  }
  Mat abel = q * null_space(comm_x, 1e-8);
  const int m_dim = static_cast<int>(abel.cols());
  rep.cartan_dim = m_dim;
  if (m_dim == 0) return rep;
  std::vector<CMat> a_basis;
  std::vector<Mat> ads;
  for (int i = 0; i < m_dim; ++i) {
    a_basis.push_back(model.from_coords(abel.col(i), true));
    Mat ad = model.ad(a_basis.back());
    ads.push_back(0.5 * (ad + ad.transpose()));
  }

  // Joint eigenvectors of the commuting symmetric operators ad(a_i) on g.
  Mat mix = Mat::Zero(model.dim(), model.dim());
  for (int i = 0; i < m_dim; ++i) mix += nd01(rng) * ads[i];
  Eigen::SelfAdjointEigenSolver<Mat> es(mix);
  std::vector<Vec> weights;
  for (int k = 0; k < model.dim(); ++k) {
    Vec v = es.eigenvectors().col(k);
    Vec w(m_dim);
    for (int i = 0; i < m_dim; ++i) w(i) = v.dot(ads[i] * v);
    if (w.norm() > 1e-7) weights.push_back(w);
  }
  if (weights.empty()) return rep;

  // Independent weights, chosen greedily.
  std::vector<Vec> basis_w;
  Mat span(m_dim, 0);
  for (const Vec& w : weights) {
    Mat trial(m_dim, span.cols() + 1);
    trial << span, w;
    if (column_span(trial, 1e-6).cols() == trial.cols()) {
      span = trial;
      basis_w.push_back(w);
    }
    if (static_cast<int>(basis_w.size()) == m_dim) break;
  }
  const int k = static_cast<int>(basis_w.size());
  Mat wt = span.transpose();  // k x m
  auto solver = wt.completeOrthogonalDecomposition();

  // Exhaustive search over {-1, 0, 1}^k \ {0}.
  std::vector<int> digits(k, -1);
  long total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    long rest = code;
    bool nonzero = false;
    Vec target(k);
    for (int i = 0; i < k; ++i) {
      target(i) = static_cast<double>(rest % 3) - 1.0;
      nonzero = nonzero || target(i) != 0.0;
      rest /= 3;
    }
    if (!nonzero) continue;
    Vec t = solver.solve(target);
    bool ok = true;
    for (const Vec& w : weights) {
      double val = w.dot(t);
      double nearest = std::round(val);
      if (std::abs(val - nearest) > 1e-6 || std::abs(nearest) > 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    CMat h = CMat::Zero(model.matrix_size, model.matrix_size);
    for (int i = 0; i < m_dim; ++i) h += t(i) * a_basis[i];
    const double scale = std::max(1.0, h.norm());
    if (!is_euler_element(model, h)) continue;
    if ((spec.theta_alpha(model, h, 1) - h).norm() > 1e-7 * scale) continue;
    if ((model.tau_h(h) - h).norm() > 1e-7 * scale) continue;
    rep.modular = true;
    rep.witness = h;
    return rep;
  }
  return rep;
}

bool flip_wedge_membership(const AlgebraDescriptor& a, const Vec& x, const Vec& y) {
  if (x.size() != a.dim || y.size() != a.dim) {
    throw Error(ErrorCode::InvalidSize, "vector size mismatch");
  }
  return in_open_cone(a, x) && in_open_cone(a, -y);
}

CMat partial_cayley_matrix(const LieModel& model, int j) {
  return matrix_exp(0.5 * M_PI * euler_elements(model).zkj(j));
}

CompletionPoint partial_cayley_dj(int j, const CompletionPoint& p) {
  point_model_for(*p.algebra);
  Model m = matrix_model(p.algebra);
  return apply_matrix(partial_cayley_matrix(*m, j), p);
}

}  // namespace causal
