#include "causal/conformal_completion.hpp"

#include <cmath>

namespace causal {

namespace {

CMat orthonormal_columns(const CMat& q) {
  Eigen::HouseholderQR<CMat> qr(q);
  return qr.householderQ() * CMat::Identity(q.rows(), q.cols());
}

CMat projector(const CompletionPoint& p) {
  CMat q = normalized(p).rep;
  return q * q.adjoint();
}

Model point_lie_model(const CompletionPoint& p) {
  point_model_for(*p.algebra);
  return matrix_model(p.algebra);
}

}  // namespace

PointModel point_model_for(const AlgebraDescriptor& a) {
  if (a.family == Family::SpinFactor) return PointModel::QuadricRay;
  if (a.is_matrix_family()) return PointModel::IsotropicSubspace;
  throw Error(ErrorCode::ModelMismatch, "no completion model for " + a.describe());
}

std::string point_model_name(PointModel m) {
  return m == PointModel::QuadricRay ? "QuadricRay" : "IsotropicSubspace";
}

double quadric_pairing(const LieModel& model, const Vec& x, const Vec& y) {
  return x.dot(model.form.real() * y);
}

bool point_invariants_hold(const CompletionPoint& p, double tol) {
  Model m = matrix_model(p.algebra);
  const int n = m->matrix_size;
  if (p.model == PointModel::QuadricRay) {
    if (p.rep.rows() != n || p.rep.cols() != 1) return false;
    double nrm = p.rep.norm();
    if (nrm < 1e-300) return false;
    Vec x = p.rep.real() / nrm;
    if (p.rep.imag().norm() > tol * nrm) return false;
    return std::abs(quadric_pairing(*m, x, x)) <= tol;
  }
  if (p.rep.rows() != n || p.rep.cols() != n / 2) return false;
  Eigen::JacobiSVD<CMat> svd(p.rep);
  const Vec& sv = svd.singularValues();
  if (sv(0) < 1e-300 || sv(sv.size() - 1) <= tol * sv(0)) return false;
  CMat q = orthonormal_columns(p.rep);
  if ((q.adjoint() * m->form * q).norm() > tol) return false;
  if (m->field == BaseField::Real && p.rep.imag().norm() > tol * sv(0)) return false;
  if (m->field == BaseField::Quaternion) {
    // The span must be stable under the quaternionic structure.
    CMat s = CMat::Zero(n, n);
    for (int i = 0; i < n / 2; ++i) {
      s(2 * i, 2 * i + 1) = 1.0;
      s(2 * i + 1, 2 * i) = -1.0;
    }
    CMat w = s * q.conjugate();
    if ((w - q * (q.adjoint() * w)).norm() > tol * std::sqrt(double(n))) return false;
  }
  return true;
}

CompletionPoint make_point(const Algebra& algebra, const CMat& rep) {
  CompletionPoint p{algebra, point_model_for(*algebra), rep};
  Model m = matrix_model(algebra);
  const int n = m->matrix_size;
  const int cols = p.model == PointModel::QuadricRay ? 1 : n / 2;
  if (rep.rows() != n || rep.cols() != cols) {
    throw Error(ErrorCode::InvalidSize, "representative has the wrong shape");
  }
  if (!point_invariants_hold(p)) {
    throw Error(ErrorCode::NotOnHypersurface,
                "representative is not a point of the completion");
  }
  return p;
}

CompletionPoint embed_point(const Algebra& algebra, const Vec& v) {
  const auto& a = *algebra;
  PointModel pm = point_model_for(a);
  if (v.size() != a.dim) throw Error(ErrorCode::ModelMismatch, "vector size mismatch");
  if (pm == PointModel::QuadricRay) {
    const int d = a.dim;
    double beta = v(0) * v(0) - v.tail(d - 1).squaredNorm();
    CMat rep(d + 2, 1);
    rep(0, 0) = 0.5 * (1 - beta);
    for (int i = 0; i < d; ++i) rep(1 + i, 0) = v(i);
    rep(d + 1, 0) = -0.5 * (1 + beta);
    return {algebra, pm, rep};
  }
  const int half = a.matrix_size();
  CMat rep(2 * half, half);
  rep.topRows(half) = a.to_matrix(v);
  rep.bottomRows(half) = CMat::Identity(half, half);
  return {algebra, pm, rep};
}

CompletionPoint embed_point(const JordanElement& v) {
  return embed_point(v.algebra, v.coords);
}

std::optional<Vec> chart_pullback(const CompletionPoint& p) {
  const auto& a = *p.algebra;
  if (p.model == PointModel::QuadricRay) {
    const int d = a.dim;
    Vec x = p.rep.real();
    double den = x(0) - x(d + 1);
    if (std::abs(den) <= 1e-9 * x.norm()) return std::nullopt;
    return Vec(x.segment(1, d) / den);
  }
  CMat q = orthonormal_columns(p.rep);
  const int half = static_cast<int>(q.cols());
  CMat lower = q.bottomRows(half);
  Eigen::JacobiSVD<CMat> svd(lower);
  if (svd.singularValues()(half - 1) <= 1e-9) return std::nullopt;
  return a.from_matrix(q.topRows(half) * lower.inverse());
}

CompletionPoint normalized(const CompletionPoint& p) {
  CompletionPoint out = p;
  if (p.model == PointModel::QuadricRay) {
    out.rep = p.rep / p.rep.norm();
    for (int i = 0; i < out.rep.rows(); ++i) {
      if (std::abs(out.rep(i, 0)) > 1e-9) {
        if (out.rep(i, 0).real() < 0) out.rep *= -1.0;
        break;
      }
    }
    return out;
  }
  out.rep = orthonormal_columns(p.rep);
  return out;
}

double point_distance(const CompletionPoint& p, const CompletionPoint& q) {
  if (!p.algebra->same_as(*q.algebra) || p.model != q.model) {
    throw Error(ErrorCode::ModelMismatch, "points live in different models");
  }
  return (projector(p) - projector(q)).norm();
}

bool same_point(const CompletionPoint& p, const CompletionPoint& q, double tol) {
  return point_distance(p, q) <= tol;
}

ConformalGenerator ConformalGenerator::translate(const Vec& v) {
  ConformalGenerator g;
  g.kind = GeneratorKind::Translate;
  g.v = v;
  return g;
}

ConformalGenerator ConformalGenerator::dilate(double t) {
  ConformalGenerator g;
  g.kind = GeneratorKind::Dilate;
  g.t = t;
  return g;
}

ConformalGenerator ConformalGenerator::inversion() {
  ConformalGenerator g;
  g.kind = GeneratorKind::Inversion;
  return g;
}

ConformalGenerator ConformalGenerator::moebius_rho(double t) {
  ConformalGenerator g;
  g.kind = GeneratorKind::MoebiusRho;
  g.t = t;
  return g;
}

ConformalGenerator ConformalGenerator::group_matrix(const CMat& m) {
  ConformalGenerator g;
  g.kind = GeneratorKind::Matrix;
  g.matrix = m;
  return g;
}

CMat generator_matrix(const LieModel& model, const ConformalGenerator& g) {
  switch (g.kind) {
    case GeneratorKind::Translate:
      if (g.v.size() != model.algebra->dim) {
        throw Error(ErrorCode::ModelMismatch, "translation vector size mismatch");
      }
      return matrix_exp(model.embed(g.v));
    case GeneratorKind::Dilate:
      return matrix_exp(g.t * euler_elements(model).h);
    case GeneratorKind::Inversion:
      return matrix_exp(M_PI * euler_elements(model).zk);
    case GeneratorKind::MoebiusRho:
      return matrix_exp(g.t * euler_elements(model).zk);
    case GeneratorKind::Matrix:
      if (g.matrix.rows() != model.matrix_size || g.matrix.cols() != model.matrix_size) {
        throw Error(ErrorCode::ModelMismatch, "group matrix size mismatch");
      }
      if (!model.in_group(g.matrix, 1e-7)) {
        throw Error(ErrorCode::NonGroupMatrix, "matrix violates the group condition");
      }
      return g.matrix;
  }
  return model.group_identity();
}

CompletionPoint apply_matrix(const CMat& g, const CompletionPoint& p) {
  Model mp = point_lie_model(p);
  const LieModel& m = *mp;
  if (g.rows() != m.matrix_size || g.cols() != m.matrix_size) {
    throw Error(ErrorCode::ModelMismatch, "group matrix size mismatch");
  }
  if (!m.in_group(g, 1e-7)) {
    throw Error(ErrorCode::NonGroupMatrix, "matrix violates the group condition");
  }
  CompletionPoint out = p;
  out.rep = g * p.rep;
  return normalized(out);
}

CompletionPoint apply_generator(const ConformalGenerator& g,
                                const CompletionPoint& p) {
  return apply_matrix(generator_matrix(*point_lie_model(p), g), p);
}

std::optional<Vec> cayley_real(const AlgebraDescriptor& a, const Vec& z) {
  SpectralData s = spectral_decompose(a, z);
  for (int i = 0; i < s.eigenvalues.size(); ++i) {
    double l = s.eigenvalues(i);
    if (std::abs(1 - l) <= 1e-9 * std::max(1.0, std::abs(l))) return std::nullopt;
  }
  return spectral_apply(a, s, [](double l) { return (1 + l) / (1 - l); });
}

std::optional<Vec> cayley_real_inverse(const AlgebraDescriptor& a, const Vec& v) {
  SpectralData s = spectral_decompose(a, v);
  for (int i = 0; i < s.eigenvalues.size(); ++i) {
    double l = s.eigenvalues(i);
    if (std::abs(1 + l) <= 1e-9 * std::max(1.0, std::abs(l))) return std::nullopt;
  }
  return spectral_apply(a, s, [](double l) { return (l - 1) / (l + 1); });
}

bool transversal(const CompletionPoint& p, const CompletionPoint& q) {
  if (!p.algebra->same_as(*q.algebra) || p.model != q.model) {
    throw Error(ErrorCode::ModelMismatch, "points live in different models");
  }
  CMat x = normalized(p).rep;
  CMat y = normalized(q).rep;
  if (p.model == PointModel::QuadricRay) {
    Model m = matrix_model(p.algebra);
    return std::abs(quadric_pairing(*m, x.real(), y.real())) > 1e-9;
  }
  CMat both(x.rows(), x.cols() + y.cols());
  both << x, y;
  Eigen::JacobiSVD<CMat> svd(both);
  return svd.singularValues()(both.cols() - 1) > 1e-9;
}

}  // namespace causal
