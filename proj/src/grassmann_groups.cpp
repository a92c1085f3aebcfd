#include "causal/grassmann_groups.hpp"

namespace causal {

namespace {

constexpr double kGroupTol = 1e-8;
constexpr double kConeTol = 1e-9;

CMat quaternion_structure(int n) {
  CMat s = CMat::Zero(n, n);
  for (int i = 0; i + 1 < n; i += 2) {
    s(i, i + 1) = 1;
    s(i + 1, i) = -1;
  }
  return s;
}

bool is_field_linear(const CMat& m, BaseField field, double tol) {
  const double scale = std::max(1.0, m.norm());
  switch (field) {
    case BaseField::Real: return m.imag().norm() <= tol * scale;
    case BaseField::Complex: return true;
    case BaseField::Quaternion: {
      CMat sl = quaternion_structure(static_cast<int>(m.rows()));
      CMat sr = quaternion_structure(static_cast<int>(m.cols()));
      return (m.conjugate() - sl * m * sr.inverse()).norm() <= tol * scale;
    }
  }
  return false;
}

void require_square(const CMat& m, int n) {
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorCode::SizeMismatch, "matrix size does not match the form");
}

double sigma_min_ratio(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / std::max(1.0, s(0));
}

// Real basis of the K-linear n x n matrices.
std::vector<CMat> field_basis(const FormSpace& space) {
  const int n = space.n();
  std::vector<CMat> out;
  if (space.field == BaseField::Quaternion) {
    const cplx i(0, 1);
    Eigen::Matrix2cd units[4];
    units[0] << 1, 0, 0, 1;
    units[1] << i, 0, 0, -i;
    units[2] << 0, 1, -1, 0;
    units[3] << 0, i, i, 0;
    for (int a = 0; a < n / 2; ++a)
      for (int b = 0; b < n / 2; ++b)
        for (const auto& u : units) {
          CMat m = CMat::Zero(n, n);
          m.block<2, 2>(2 * a, 2 * b) = u;
          out.push_back(m);
        }
    return out;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CMat m = CMat::Zero(n, n);
      m(a, b) = 1;
      out.push_back(m);
      if (space.field == BaseField::Complex) {
        m(a, b) = cplx(0, 1);
        out.push_back(m);
      }
    }
  return out;
}

}  // namespace

std::string base_field_name(BaseField f) {
  switch (f) {
    case BaseField::Real: return "R";
    case BaseField::Complex: return "C";
    case BaseField::Quaternion: return "H";
  }
  return "?";
}

Algebra FormSpace::algebra() const {
  switch (field) {
    case BaseField::Real: return make_algebra(Family::SymR, r);
    case BaseField::Complex: return make_algebra(Family::HermC, r);
    case BaseField::Quaternion: return make_algebra(Family::HermH, r);
  }
  return nullptr;
}

FormSpace make_form_space(BaseField field, int r, int p) {
  if (r < 1) throw Error(ErrorCode::InvalidSize, "r must be positive");
  FormSpace s;
  s.field = field;
  s.r = r;
  s.p = r;
  const cplx i(0, 1);
  switch (field) {
    case BaseField::Real: {
      if (r % 2 != 0) throw Error(ErrorCode::InvalidSize, "R needs r = 2s");
      const int h = r / 2;
      s.J = CMat::Zero(r, r);
      s.J.topRightCorner(h, h) = -CMat::Identity(h, h);
      s.J.bottomLeftCorner(h, h) = CMat::Identity(h, h);
      break;
    }
    case BaseField::Complex: {
      s.p = p < 0 ? r : p;
      if (s.p > r) throw Error(ErrorCode::InvalidSize, "p must lie in [0, r]");
      s.J = CMat::Zero(r, r);
      for (int k = 0; k < r; ++k) s.J(k, k) = k < s.p ? i : -i;
      break;
    }
    case BaseField::Quaternion: {
      s.J = CMat::Zero(2 * r, 2 * r);
      for (int k = 0; k < r; ++k) {
        s.J(2 * k, 2 * k) = i;
        s.J(2 * k + 1, 2 * k + 1) = -i;
      }
      break;
    }
  }
  s.form = 2.0 * s.J;
  return s;
}

CMat doubled_form(const FormSpace& space) {
  const int n = space.n();
  CMat b = CMat::Zero(2 * n, 2 * n);
  b.topLeftCorner(n, n) = space.form;
  b.bottomRightCorner(n, n) = -space.form;
  return b;
}

CMat doubled_to_omega(const FormSpace& space) {
  const int n = space.n();
  CMat t(2 * n, 2 * n);
  t << -space.J, space.J, CMat::Identity(n, n), CMat::Identity(n, n);
  return t;
}

bool unitary_and_cone_check(const CMat& m, const FormSpace& space,
                            CheckMode mode) {
  require_square(m, space.n());
  const CMat& f = space.form;
  if (!is_field_linear(m, space.field, kGroupTol)) return false;
  if (mode == CheckMode::Group) {
    const double scale = std::max(1.0, m.squaredNorm());
    return (m.adjoint() * f * m - f).norm() <= kGroupTol * scale;
  }
  const double scale = std::max(1.0, m.norm());
  if ((m.adjoint() * f + f * m).norm() > kGroupTol * scale) return false;
  CMat fa = f * m;
  CMat herm = 0.5 * (fa + fa.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -kConeTol;
}

CompletionPoint graph_embedding(const CMat& g, const FormSpace& space) {
  if (!unitary_and_cone_check(g, space, CheckMode::Group))
    throw Error(ErrorCode::NotUnitary, "g is not in U(F, beta_F)");
  const int n = space.n();
  CMat graph(2 * n, n);
  graph << CMat::Identity(n, n), g;
  return make_point(space.algebra(), doubled_to_omega(space) * graph);
}

std::optional<CMat> graph_pullback(const CompletionPoint& p,
                                   const FormSpace& space) {
  const int n = space.n();
  if (p.model != PointModel::IsotropicSubspace || p.rep.rows() != 2 * n ||
      p.rep.cols() != n)
    throw Error(ErrorCode::SizeMismatch, "point does not match the form");
  CMat x = p.rep.topRows(n), y = p.rep.bottomRows(n);
  CMat v = 0.5 * (y + space.J * x);
  CMat w = 0.5 * (y - space.J * x);
  if (sigma_min_ratio(v) <= 1e-9) return std::nullopt;
  return CMat(w * v.inverse());
}

CMat fractional_action(const CMat& big, const CMat& g, const FormSpace& space) {
  const int n = space.n();
  require_square(big, 2 * n);
  require_square(g, n);
  const CMat b2 = doubled_form(space);
  const double scale = std::max(1.0, big.squaredNorm());
  if ((big.adjoint() * b2 * big - b2).norm() > kGroupTol * scale ||
      !is_field_linear(big, space.field, kGroupTol))
    throw Error(ErrorCode::NotUnitary, "G is not in U(F + F)");
  if (!unitary_and_cone_check(g, space, CheckMode::Group))
    throw Error(ErrorCode::NotUnitary, "g is not in U(F, beta_F)");
  CMat den = big.topLeftCorner(n, n) + big.topRightCorner(n, n) * g;
  if (sigma_min_ratio(den) <= 1e-10)
    throw Error(ErrorCode::ChartSingular, "a + b g is singular");
  CMat num = big.bottomLeftCorner(n, n) + big.bottomRightCorner(n, n) * g;
  return num * den.inverse();
}

std::optional<CMat> group_cayley(const CMat& z, const FormSpace& space) {
  require_square(z, space.n());
  CMat den = z - space.J;
  if (sigma_min_ratio(den) <= 1e-12) return std::nullopt;
  return CMat((z + space.J) * den.inverse());
}

int unitary_algebra_dim(const FormSpace& space) {
  const auto basis = field_basis(space);
  const int n = space.n();
  Mat a(2 * n * n, basis.size());
  for (size_t k = 0; k < basis.size(); ++k) {
    CMat c = basis[k].adjoint() * space.form + space.form * basis[k];
    a.col(k) << Eigen::Map<const Mat>(c.real().eval().data(), n * n, 1),
        Eigen::Map<const Mat>(c.imag().eval().data(), n * n, 1);
  }
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  qr.setThreshold(1e-10);
  return static_cast<int>(basis.size()) - static_cast<int>(qr.rank());
}

CMat random_field_matrix(const FormSpace& space, int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0, 1);
  CMat m(rows, cols);
  switch (space.field) {
    case BaseField::Real:
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
      break;
    case BaseField::Complex:
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
      break;
    case BaseField::Quaternion:
      for (int i = 0; i + 1 < rows; i += 2)
        for (int j = 0; j + 1 < cols; j += 2) {
          cplx a(g(rng), g(rng)), b(g(rng), g(rng));
          m.block<2, 2>(i, j) << a, b, -std::conj(b), std::conj(a);
        }
      break;
  }
  return m;
}

CMat random_hermitian(const FormSpace& space, Rng& rng) {
  CMat k = random_field_matrix(space, space.n(), space.n(), rng);
  return 0.5 * (k + k.adjoint());
}

CMat random_unitary(const FormSpace& space, Rng& rng, double scale) {
  CMat x = space.form.inverse() * random_hermitian(space, rng);
  return matrix_exp(scale * x);
}

CMat random_cone_element(const FormSpace& space, Rng& rng) {
  CMat k = random_field_matrix(space, space.n(), space.n(), rng);
  return space.form.inverse() * (k.adjoint() * k);
}

CMat random_doubled_unitary(const FormSpace& space, Rng& rng, double scale) {
  const int n = space.n();
  CMat k = random_field_matrix(space, 2 * n, 2 * n, rng);
  CMat h = 0.5 * (k + k.adjoint());
  return matrix_exp(scale * doubled_form(space).inverse() * h);
}

}  // namespace causal
