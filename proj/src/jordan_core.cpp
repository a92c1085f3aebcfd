#include "causal/jordan_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace causal {

namespace {

int components(Family f) {
  switch (f) {
    case Family::SymR: return 1;
    case Family::HermC: return 2;
    case Family::HermH: return 4;
    default: return 0;
  }
}

// 2x2 complex image of the quaternion a + bi + cj + dk.
Eigen::Matrix2cd quaternion_block(double a, double b, double c, double d) {
  Eigen::Matrix2cd q;
  q << cplx(a, b), cplx(c, d), cplx(-c, d), cplx(a, -b);
  return q;
}

// Quaternionic structure: the image M of a quaternionic matrix satisfies
// conj(M) = S M S^{-1}; u -> S conj(u) commutes with M.
CMat quaternionic_structure(int r) {
  CMat s = CMat::Zero(2 * r, 2 * r);
  for (int i = 0; i < r; ++i) {
    s(2 * i, 2 * i + 1) = 1.0;
    s(2 * i + 1, 2 * i) = -1.0;
  }
  return s;
}

void check_same(const Algebra& a, const Algebra& b) {
  if (!a || !b || !a->same_as(*b)) {
    throw Error(ErrorCode::AlgebraMismatch, "elements from different algebras");
  }
}

SpectralData spin_spectral(const Vec& x) {
  const int d = static_cast<int>(x.size());
  Vec spatial = x.tail(d - 1);
  double n = spatial.norm();
  Vec u = Vec::Zero(d - 1);
  if (n > 0) {
    u = spatial / n;
  } else {
    u(0) = 1.0;  // degenerate case: split along e1
  }
  SpectralData s;
  s.eigenvalues = Vec(2);
  s.eigenvalues << x(0) + n, x(0) - n;
  Vec c1(d), c2(d);
  c1 << 0.5, 0.5 * u;
  c2 << 0.5, -0.5 * u;
  s.frame = {c1, c2};
  return s;
}

SpectralData matrix_spectral(const AlgebraDescriptor& a, const Vec& x) {
  CMat m = a.to_matrix(x);
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "hermitian eigensolver failed");
  }
  const Vec& ev = es.eigenvalues();
  const CMat& vecs = es.eigenvectors();
  const int n = static_cast<int>(ev.size());
  SpectralData s;
  if (a.family != Family::HermH) {
    s.eigenvalues = Vec(n);
    for (int k = 0; k < n; ++k) {
      int src = n - 1 - k;
      s.eigenvalues(k) = ev(src);
      CVec u = vecs.col(src);
      s.frame.push_back(a.from_matrix(u * u.adjoint()));
    }
    return s;
  }
  // Quaternionic case: eigenvalues come in pairs; split each cluster of the
  // complex image into quaternionic lines {w, S conj(w)}.
  const int r = a.size;
  CMat sq = quaternionic_structure(r);
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  double cluster_tol = 1e-10 * scale;
  std::vector<std::pair<double, Vec>> lines;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && ev(end) - ev(end - 1) < cluster_tol) ++end;
    int mult = end - start;
    if (mult % 2 != 0) {
      throw Error(ErrorCode::NumericalFailure,
                  "odd multiplicity in quaternionic spectrum");
    }
    CMat rest = vecs.middleCols(start, mult);
    for (int t = 0; t < mult / 2; ++t) {
      int best = 0;
      rest.colwise().norm().maxCoeff(&best);
      CVec w = rest.col(best);
      w.normalize();
      CVec p = sq * w.conjugate();
      p -= w * (w.adjoint() * p)(0);
      p.normalize();
      CMat q = w * w.adjoint() + p * p.adjoint();
      rest -= q * rest;
      double lambda = (w.adjoint() * m * w)(0).real();
      lines.emplace_back(lambda, a.from_matrix(q));
    }
    start = end;
  }
  std::sort(lines.begin(), lines.end(),
            [](const auto& l, const auto& rr) { return l.first > rr.first; });
  s.eigenvalues = Vec(r);
  for (int k = 0; k < r; ++k) {
    s.eigenvalues(k) = lines[k].first;
    s.frame.push_back(lines[k].second);
  }
  return s;
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::SpinFactor: return "SpinFactor";
    case Family::SymR: return "SymR";
    case Family::HermC: return "HermC";
    case Family::HermH: return "HermH";
    case Family::HermO: return "HermO";
    case Family::DirectSum: return "DirectSum";
  }
  return "Unknown";
}

Family parse_family(const std::string& name) {
  if (name == "SpinFactor" || name == "Spin" || name == "Minkowski") {
    return Family::SpinFactor;
  }
  if (name == "SymR") return Family::SymR;
  if (name == "HermC") return Family::HermC;
  if (name == "HermH") return Family::HermH;
  if (name == "HermO") return Family::HermO;
  if (name == "DirectSum") return Family::DirectSum;
  throw Error(ErrorCode::UnsupportedFamily, "unknown family '" + name + "'");
}

int AlgebraDescriptor::matrix_size() const {
  switch (family) {
    case Family::SpinFactor: return size;
    case Family::HermH: return 2 * size;
    case Family::DirectSum: return inner->matrix_size();
    default: return size;
  }
}

std::string AlgebraDescriptor::describe() const {
  std::ostringstream os;
  if (family == Family::DirectSum) {
    os << "DirectSum(" << inner->describe() << ")";
  } else {
    os << family_name(family) << "(" << size << ")";
  }
  return os.str();
}

Vec AlgebraDescriptor::unit() const {
  Vec e = Vec::Zero(dim);
  switch (family) {
    case Family::SpinFactor: e(0) = 1.0; break;
    case Family::DirectSum: {
      Vec ei = inner->unit();
      e << ei, ei;
      break;
    }
    default:
      for (int i = 0; i < size; ++i) e(i) = 1.0;
  }
  return e;
}

Vec AlgebraDescriptor::product(const Vec& x, const Vec& y) const {
  switch (family) {
    case Family::SpinFactor: {
      Vec z(dim);
      z(0) = x.dot(y);
      z.tail(dim - 1) = x(0) * y.tail(dim - 1) + y(0) * x.tail(dim - 1);
      return z;
    }
    case Family::DirectSum: {
      const int n = inner->dim;
      Vec z(dim);
      z << inner->product(x.head(n), y.head(n)),
          inner->product(x.tail(n), y.tail(n));
      return z;
    }
    default: {
      CMat a = to_matrix(x), b = to_matrix(y);
      return from_matrix(0.5 * (a * b + b * a));
    }
  }
}

double AlgebraDescriptor::trace(const Vec& x) const {
  switch (family) {
    case Family::SpinFactor: return 2.0 * x(0);
    case Family::DirectSum: {
      const int n = inner->dim;
      return inner->trace(x.head(n)) + inner->trace(x.tail(n));
    }
    default: return x.head(size).sum();
  }
}

CMat AlgebraDescriptor::to_matrix(const Vec& x) const {
  if (family == Family::SpinFactor) return x.cast<cplx>();
  if (family == Family::DirectSum) {
    const int n = inner->dim;
    const int m = inner->matrix_size();
    CMat out = CMat::Zero(2 * m, inner->family == Family::SpinFactor ? 1 : 2 * m);
    if (inner->family == Family::SpinFactor) {
      out << x.head(n).cast<cplx>(), x.tail(n).cast<cplx>();
    } else {
      out.topLeftCorner(m, m) = inner->to_matrix(x.head(n));
      out.bottomRightCorner(m, m) = inner->to_matrix(x.tail(n));
    }
    return out;
  }
  const int r = size;
  const int k = components(family);
  if (family == Family::HermH) {
    CMat m = CMat::Zero(2 * r, 2 * r);
    for (int i = 0; i < r; ++i) {
      m.block<2, 2>(2 * i, 2 * i) = quaternion_block(x(i), 0, 0, 0);
    }
    int idx = r;
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        Eigen::Matrix2cd q =
            quaternion_block(x(idx), x(idx + 1), x(idx + 2), x(idx + 3));
        m.block<2, 2>(2 * i, 2 * j) = q;
        m.block<2, 2>(2 * j, 2 * i) = q.adjoint();
        idx += k;
      }
    }
    return m;
  }
  CMat m = CMat::Zero(r, r);
  for (int i = 0; i < r; ++i) m(i, i) = x(i);
  int idx = r;
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      cplx z = k == 1 ? cplx(x(idx), 0) : cplx(x(idx), x(idx + 1));
      m(i, j) = z;
      m(j, i) = std::conj(z);
      idx += k;
    }
  }
  return m;
}

Vec AlgebraDescriptor::from_matrix(const CMat& m) const {
  if (family == Family::SpinFactor) return m.col(0).real();
  if (family == Family::DirectSum) {
    const int mm = inner->matrix_size();
    Vec out(dim);
    if (inner->family == Family::SpinFactor) {
      out = m.col(0).real();
    } else {
      out << inner->from_matrix(m.topLeftCorner(mm, mm)),
          inner->from_matrix(m.bottomRightCorner(mm, mm));
    }
    return out;
  }
  const int r = size;
  const int k = components(family);
  Vec x(dim);
  if (family == Family::HermH) {
    for (int i = 0; i < r; ++i) {
      x(i) = 0.5 * (m(2 * i, 2 * i) + m(2 * i + 1, 2 * i + 1)).real();
    }
    int idx = r;
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        cplx alpha = 0.5 * (m(2 * i, 2 * j) + std::conj(m(2 * i + 1, 2 * j + 1)));
        cplx beta = 0.5 * (m(2 * i, 2 * j + 1) - std::conj(m(2 * i + 1, 2 * j)));
        x(idx) = alpha.real();
        x(idx + 1) = alpha.imag();
        x(idx + 2) = beta.real();
        x(idx + 3) = beta.imag();
        idx += k;
      }
    }
    return x;
  }
  for (int i = 0; i < r; ++i) x(i) = m(i, i).real();
  int idx = r;
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      cplx z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      x(idx) = z.real();
      if (k == 2) x(idx + 1) = z.imag();
      idx += k;
    }
  }
  return x;
}

Vec AlgebraDescriptor::random_element(Rng& rng, double scale) const {
  std::normal_distribution<double> g(0.0, scale);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x(i) = g(rng);
  return x;
}

std::vector<Vec> AlgebraDescriptor::standard_frame() const {
  std::vector<Vec> frame;
  switch (family) {
    case Family::SpinFactor: {
      Vec c1 = Vec::Zero(dim), c2 = Vec::Zero(dim);
      c1(0) = c1(1) = 0.5;
      c2(0) = 0.5;
      c2(1) = -0.5;
      frame = {c1, c2};
      break;
    }
    case Family::DirectSum: {
      const int n = inner->dim;
      for (const Vec& c : inner->standard_frame()) {
        Vec v = Vec::Zero(dim);
        v.head(n) = c;
        frame.push_back(v);
      }
      for (const Vec& c : inner->standard_frame()) {
        Vec v = Vec::Zero(dim);
        v.tail(n) = c;
        frame.push_back(v);
      }
      break;
    }
    default:
      for (int i = 0; i < size; ++i) {
        Vec v = Vec::Zero(dim);
        v(i) = 1.0;
        frame.push_back(v);
      }
  }
  return frame;
}

Vec AlgebraDescriptor::signed_frame_sum(int j) const {
  if (j < 0 || j > rank) {
    throw Error(ErrorCode::IndexOutOfRange, "frame index j out of range");
  }
  auto frame = standard_frame();
  Vec c = Vec::Zero(dim);
  for (int i = 0; i < rank; ++i) c += (i < rank - j ? 1.0 : -1.0) * frame[i];
  return c;
}

Algebra make_algebra(Family family, int size) {
  if (family == Family::HermO) {
    throw Error(ErrorCode::UnsupportedFamily,
                "the exceptional algebra Herm3(O) is not supported");
  }
  if (family == Family::DirectSum) {
    throw Error(ErrorCode::UnsupportedFamily,
                "direct sums are built from an inner descriptor");
  }
  if (size <= 0) throw Error(ErrorCode::InvalidSize, "size must be positive");
  if (family == Family::SpinFactor && size < 2) {
    throw Error(ErrorCode::InvalidSize, "spin factor requires d >= 2");
  }
  auto a = std::make_shared<AlgebraDescriptor>();
  a->family = family;
  a->size = size;
  switch (family) {
    case Family::SpinFactor:
      a->rank = 2;
      a->dim = size;
      a->simple = size >= 3;
      break;
    case Family::SymR:
      a->rank = size;
      a->dim = size * (size + 1) / 2;
      break;
    case Family::HermC:
      a->rank = size;
      a->dim = size * size;
      break;
    case Family::HermH:
      a->rank = size;
      a->dim = size * (2 * size - 1);
      break;
    default: break;
  }
  for (int i = 0; i < a->dim; ++i) {
    a->basis.push_back(a->to_matrix(Vec::Unit(a->dim, i)));
  }
  a->trace_form = Mat(a->dim, a->dim);
  for (int i = 0; i < a->dim; ++i) {
    for (int j = 0; j < a->dim; ++j) {
      a->trace_form(i, j) =
          a->inner_product(Vec::Unit(a->dim, i), Vec::Unit(a->dim, j));
    }
  }
  return a;
}

Algebra make_direct_sum(const Algebra& inner) {
  auto a = std::make_shared<AlgebraDescriptor>();
  a->family = Family::DirectSum;
  a->size = inner->size;
  a->inner = inner;
  a->rank = 2 * inner->rank;
  a->dim = 2 * inner->dim;
  a->simple = false;
  for (int i = 0; i < a->dim; ++i) {
    a->basis.push_back(a->to_matrix(Vec::Unit(a->dim, i)));
  }
  a->trace_form = Mat::Zero(a->dim, a->dim);
  a->trace_form.topLeftCorner(inner->dim, inner->dim) = inner->trace_form;
  a->trace_form.bottomRightCorner(inner->dim, inner->dim) = inner->trace_form;
  return a;
}

JordanElement make_element(const Algebra& algebra, const Vec& coords) {
  if (coords.size() != algebra->dim) {
    throw Error(ErrorCode::SizeMismatch, "coordinate length differs from dim");
  }
  return {algebra, coords};
}

Vec jordan_product(const AlgebraDescriptor& a, const Vec& x, const Vec& y) {
  return a.product(x, y);
}

Mat left_multiplication(const AlgebraDescriptor& a, const Vec& x) {
  Mat l(a.dim, a.dim);
  for (int k = 0; k < a.dim; ++k) l.col(k) = a.product(x, Vec::Unit(a.dim, k));
  return l;
}

MultiplicationOperators multiplication_operators(const AlgebraDescriptor& a,
                                                 const Vec& x) {
  MultiplicationOperators ops;
  ops.L = left_multiplication(a, x);
  ops.P = 2.0 * ops.L * ops.L - left_multiplication(a, a.square(x));
  return ops;
}

SpectralData spectral_decompose(const AlgebraDescriptor& a, const Vec& x) {
  switch (a.family) {
    case Family::SpinFactor: return spin_spectral(x);
    case Family::DirectSum: {
      const int n = a.inner->dim;
      SpectralData s1 = spectral_decompose(*a.inner, x.head(n));
      SpectralData s2 = spectral_decompose(*a.inner, x.tail(n));
      std::vector<std::pair<double, Vec>> all;
      for (size_t i = 0; i < s1.frame.size(); ++i) {
        Vec c = Vec::Zero(a.dim);
        c.head(n) = s1.frame[i];
        all.emplace_back(s1.eigenvalues(i), c);
      }
      for (size_t i = 0; i < s2.frame.size(); ++i) {
        Vec c = Vec::Zero(a.dim);
        c.tail(n) = s2.frame[i];
        all.emplace_back(s2.eigenvalues(i), c);
      }
      std::stable_sort(all.begin(), all.end(), [](const auto& l, const auto& r) {
        return l.first > r.first;
      });
      SpectralData s;
      s.eigenvalues = Vec(all.size());
      for (size_t i = 0; i < all.size(); ++i) {
        s.eigenvalues(i) = all[i].first;
        s.frame.push_back(all[i].second);
      }
      return s;
    }
    default: return matrix_spectral(a, x);
  }
}

Vec spectral_apply(const AlgebraDescriptor& a, const SpectralData& s,
                   const std::function<double(double)>& f) {
  Vec out = Vec::Zero(a.dim);
  for (size_t i = 0; i < s.frame.size(); ++i) {
    out += f(s.eigenvalues(i)) * s.frame[i];
  }
  return out;
}

Vec spectral_apply(const AlgebraDescriptor& a, const Vec& x,
                   const std::function<double(double)>& f) {
  return spectral_apply(a, spectral_decompose(a, x), f);
}

Signature signature_of(const Vec& eigenvalues, double tol) {
  Signature s;
  for (int i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > tol) ++s.p;
    if (eigenvalues(i) < -tol) ++s.q;
  }
  return s;
}

InverseData invert_and_signature(const AlgebraDescriptor& a, const Vec& x) {
  const double tol = tolerances().algebra;
  SpectralData s = spectral_decompose(a, x);
  InverseData out;
  out.det = s.eigenvalues.prod();
  out.trace = s.eigenvalues.sum();
  out.signature = signature_of(s.eigenvalues, tol);
  if (s.eigenvalues.cwiseAbs().minCoeff() > tol) {
    out.inverse = spectral_apply(a, s, [](double l) { return 1.0 / l; });
  }
  return out;
}

std::optional<Vec> jordan_inverse(const AlgebraDescriptor& a, const Vec& x) {
  return invert_and_signature(a, x).inverse;
}

ConeNorm cone_and_norm(const AlgebraDescriptor& a, const Vec& x) {
  const double tol = tolerances().algebra;
  Vec ev = spectral_decompose(a, x).eigenvalues;
  ConeNorm c;
  c.in_cone_open = ev.minCoeff() > tol;
  c.in_cone_closed = ev.minCoeff() >= -tol;
  c.spectral_norm = ev.cwiseAbs().maxCoeff();
  c.in_unit_ball = c.spectral_norm < 1.0 - tol;
  return c;
}

bool in_open_cone(const AlgebraDescriptor& a, const Vec& x) {
  return cone_and_norm(a, x).in_cone_open;
}

bool double_cone_membership(const AlgebraDescriptor& a, const Vec& upper,
                            const Vec& lower, const Vec& x) {
  return in_open_cone(a, upper - x) && in_open_cone(a, x - lower);
}

BergmanResult bergman_operator(const AlgebraDescriptor& a, const Vec& x,
                               const Vec& y) {
  Mat lx = left_multiplication(a, x);
  Mat ly = left_multiplication(a, y);
  Mat lxy = left_multiplication(a, a.product(x, y));
  Mat px = 2.0 * lx * lx - left_multiplication(a, a.square(x));
  Mat py = 2.0 * ly * ly - left_multiplication(a, a.square(y));
  BergmanResult b;
  b.matrix = Mat::Identity(a.dim, a.dim) - 2.0 * (lxy + lx * ly - ly * lx) +
             px * py;
  Eigen::JacobiSVD<Mat> svd(b.matrix);
  const Vec& sv = svd.singularValues();
  b.invertible = sv(sv.size() - 1) > tolerances().algebra * std::max(1.0, sv(0));
  return b;
}

Vec random_cone_element(const AlgebraDescriptor& a, Rng& rng, double lo,
                        double hi) {
  SpectralData s = spectral_decompose(a, a.random_element(rng));
  std::uniform_real_distribution<double> u(lo, hi);
  Vec x = Vec::Zero(a.dim);
  for (const Vec& c : s.frame) x += u(rng) * c;
  return x;
}

Vec random_unit_ball_element(const AlgebraDescriptor& a, Rng& rng,
                             double radius) {
  SpectralData s = spectral_decompose(a, a.random_element(rng));
  std::uniform_real_distribution<double> u(-radius, radius);
  Vec x = Vec::Zero(a.dim);
  for (const Vec& c : s.frame) x += u(rng) * c;
  return x;
}

Vec random_element_with_signature(const AlgebraDescriptor& a, int p, Rng& rng,
                                  double lo, double hi) {
  SpectralData s = spectral_decompose(a, a.random_element(rng));
  std::uniform_real_distribution<double> u(lo, hi);
  Vec x = Vec::Zero(a.dim);
  for (int i = 0; i < a.rank; ++i) x += (i < p ? 1.0 : -1.0) * u(rng) * s.frame[i];
  return x;
}

JordanElement jordan_product(const JordanElement& a, const JordanElement& b) {
  check_same(a.algebra, b.algebra);
  return {a.algebra, a.algebra->product(a.coords, b.coords)};
}

MultiplicationOperators multiplication_operators(const JordanElement& a) {
  return multiplication_operators(*a.algebra, a.coords);
}

SpectralData spectral_decompose(const JordanElement& x) {
  return spectral_decompose(*x.algebra, x.coords);
}

InverseData invert_and_signature(const JordanElement& x) {
  return invert_and_signature(*x.algebra, x.coords);
}

ConeNorm cone_and_norm(const JordanElement& x) {
  return cone_and_norm(*x.algebra, x.coords);
}

bool double_cone_membership(const JordanElement& a, const JordanElement& b,
                            const JordanElement& x) {
  check_same(a.algebra, b.algebra);
  check_same(a.algebra, x.algebra);
  return double_cone_membership(*a.algebra, a.coords, b.coords, x.coords);
}

BergmanResult bergman_operator(const JordanElement& x, const JordanElement& y) {
  check_same(x.algebra, y.algebra);
  return bergman_operator(*x.algebra, x.coords, y.coords);
}

}  // namespace causal
