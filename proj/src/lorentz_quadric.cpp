#include "causal/lorentz_quadric.hpp"

#include <cmath>
#include <limits>

namespace causal {

namespace {

constexpr double kHypersurfaceTol = 1e-8;
constexpr double kChartTol = 1e-12;
constexpr double kNullBlockTol = 1e-8;
constexpr double kZeroBlockTol = 1e-10;
constexpr int kSegmentSteps = 16;

Vec minkowski_diag(int n) {
  Vec f = -Vec::Ones(n);
  f(0) = 1;
  return f;
}

double diag_form(const Vec& f, const Vec& v, const Vec& w) {
  return (f.array() * v.array() * w.array()).sum();
}

int dim_of_ray(const Vec& ray) {
  if (ray.size() < 4)
    throw Error(ErrorCode::InvalidSize, "quadric ray needs d + 2 >= 4 entries");
  return static_cast<int>(ray.size()) - 2;
}

Vec general_forward(const Vec& v, const Vec& f) {
  double b = diag_form(f, v, v);
  if (std::abs(1 + b) <= kChartTol * (1 + std::abs(b)))
    throw Error(ErrorCode::OutsideChartDomain, "beta(v, v) = -1");
  Vec w(v.size() + 1);
  w(0) = (1 - b) / (1 + b);
  w.tail(v.size()) = 2.0 * v / (1 + b);
  return w;
}

Vec general_inverse(const Vec& w, const Vec& f) {
  Vec wv = w.tail(w.size() - 1);
  double q = w(0) * w(0) + diag_form(f, wv, wv);
  if (std::abs(q - 1) > kHypersurfaceTol * std::max(1.0, w.squaredNorm()))
    throw Error(ErrorCode::NotOnHypersurface, "point is not on the unit sphere");
  if (std::abs(1 + w(0)) <= kChartTol * std::max(1.0, w.norm()))
    throw Error(ErrorCode::OutsideChartDomain, "w_1 = -1");
  return wv / (1 + w(0));
}

Vec form_or_default(const Vec& form, int n) {
  if (form.size() == 0) return minkowski_diag(n);
  if (form.size() != n)
    throw Error(ErrorCode::InvalidSize, "form size does not match the point");
  return form;
}

bool future_timelike(const Vec& w) {
  return w(0) > 0 && minkowski(w, w) > 0;
}

double cone_distance(const Vec& x) {
  return (x(0) - x.tail(x.size() - 1).norm()) / std::sqrt(2.0);
}

bool in_chart_domain(double b, double at) {
  return std::abs(b - at) > kChartTol * (1 + std::abs(b));
}

}  // namespace

double minkowski(const Vec& v, const Vec& w) {
  return v(0) * w(0) - v.tail(v.size() - 1).dot(w.tail(w.size() - 1));
}

double quadric_form(const Vec& x, const Vec& y) {
  int n = static_cast<int>(x.size());
  return x(0) * y(0) + minkowski(x.segment(1, n - 2), y.segment(1, n - 2)) -
         x(n - 1) * y(n - 1);
}

QuadricPoint make_quadric_point(const Vec& ray) {
  dim_of_ray(ray);
  double n2 = ray.squaredNorm();
  if (n2 == 0) throw Error(ErrorCode::NotOnHypersurface, "zero ray");
  if (std::abs(quadric_form(ray, ray)) >= 1e-9 * n2)
    throw Error(ErrorCode::NotOnHypersurface, "ray is not null");
  return QuadricPoint{ray};
}

QuadricPoint eta(const Vec& v) {
  double b = minkowski(v, v);
  Vec r(v.size() + 2);
  r(0) = (1 - b) / 2;
  r.segment(1, v.size()) = v;
  r(v.size() + 1) = -(1 + b) / 2;
  return QuadricPoint{r};
}

std::optional<Vec> eta_inverse(const QuadricPoint& p) {
  int d = dim_of_ray(p.ray);
  double den = p.ray(0) - p.ray(d + 1);
  if (std::abs(den) <= 1e-9 * p.ray.norm()) return std::nullopt;
  return Vec(p.ray.segment(1, d) / den);
}

bool same_ray(const QuadricPoint& p, const QuadricPoint& q, double tol) {
  if (p.ray.size() != q.ray.size()) return false;
  double c = p.ray.normalized().dot(q.ray.normalized());
  return 1 - c * c < tol;
}

CompletionPoint to_completion_point(const QuadricPoint& p) {
  int d = dim_of_ray(p.ray);
  return make_point(make_algebra(Family::SpinFactor, d),
                    p.ray.cast<cplx>());
}

QuadricPoint from_completion_point(const CompletionPoint& p) {
  if (p.model != PointModel::QuadricRay)
    throw Error(ErrorCode::ModelMismatch, "not a quadric point");
  return make_quadric_point(p.rep.col(0).real());
}

Mat quadric_euler_element(int d) {
  Mat h = Mat::Zero(d + 2, d + 2);
  h(0, d + 1) = 1;
  h(d + 1, 0) = 1;
  return h;
}

std::string chart_name(Chart c) {
  switch (c) {
    case Chart::General: return "General";
    case Chart::DeSitter: return "DeSitter";
    case Chart::AntiDeSitter: return "AntiDeSitter";
  }
  return "?";
}

Vec stereo_forward(Chart chart, const Vec& v, const Vec& form) {
  int n = static_cast<int>(v.size());
  switch (chart) {
    case Chart::General:
      return general_forward(v, form_or_default(form, n));
    case Chart::AntiDeSitter:
      return general_forward(v, minkowski_diag(n));
    case Chart::DeSitter: {
      Vec w = general_forward(v, -minkowski_diag(n));
      Vec y(n + 1);
      y.head(n) = w.tail(n);
      y(n) = -w(0);
      return y;
    }
  }
  return v;
}

Vec stereo_inverse(Chart chart, const Vec& w, const Vec& form) {
  int n = static_cast<int>(w.size()) - 1;
  if (n < 1) throw Error(ErrorCode::InvalidSize, "empty point");
  switch (chart) {
    case Chart::General:
      return general_inverse(w, form_or_default(form, n));
    case Chart::AntiDeSitter:
      return general_inverse(w, minkowski_diag(n));
    case Chart::DeSitter: {
      Vec u(n + 1);
      u(0) = -w(n);
      u.tail(n) = w.head(n);
      return general_inverse(u, -minkowski_diag(n));
    }
  }
  return w;
}

Vec desitter_point(const QuadricPoint& p) {
  int d = dim_of_ray(p.ray);
  if (std::abs(p.ray(0)) <= 1e-12 * p.ray.norm())
    throw Error(ErrorCode::OutsideChartDomain, "t = 0");
  return p.ray.tail(d + 1) / p.ray(0);
}

QuadricPoint from_desitter(const Vec& y) {
  Vec r(y.size() + 1);
  r(0) = 1;
  r.tail(y.size()) = y;
  return make_quadric_point(r);
}

Vec ads_point(const QuadricPoint& p) {
  int d = dim_of_ray(p.ray);
  if (std::abs(p.ray(d + 1)) <= 1e-12 * p.ray.norm())
    throw Error(ErrorCode::OutsideChartDomain, "s = 0");
  return p.ray.head(d + 1) / -p.ray(d + 1);
}

QuadricPoint from_ads(const Vec& x) {
  Vec r(x.size() + 1);
  r.head(x.size()) = x;
  r(x.size()) = -1;
  return make_quadric_point(r);
}

std::string wedge_component_name(WedgeComponent c) {
  return c == WedgeComponent::Left ? "Left" : "Right";
}

WedgeMembership wedge_regions(const Vec& x, WedgeKind which) {
  if (x.size() < 3)
    throw Error(ErrorCode::InvalidSize, "point needs d + 1 >= 3 entries");
  int d = static_cast<int>(x.size()) - 1;
  WedgeMembership m;
  if (which == WedgeKind::DeSitter) {
    Vec yv = x.head(d);
    double q = minkowski(yv, yv) - x(d) * x(d);
    if (std::abs(q + 1) > kHypersurfaceTol * std::max(1.0, x.squaredNorm()))
      throw Error(ErrorCode::NotOnHypersurface, "not on de Sitter space");
    m.member = -x(d) > std::abs(x(0));
    return m;
  }
  if (std::abs(ads_form(x, x) - 1) >
      kHypersurfaceTol * std::max(1.0, x.squaredNorm()))
    throw Error(ErrorCode::NotOnHypersurface, "not on anti-de Sitter space");
  // Flow field of h'' at x is x_{d+1} e_2 + x_2 e_{d+1}; its pairing with the
  // rotation field (-x_2, x_1, 0, ...) fixes the time orientation.
  double x2 = x(1), xl = x(d);
  m.member = xl * xl > x2 * x2 && x(0) * xl > 0;
  if (m.member)
    m.component = xl > 0 ? WedgeComponent::Right : WedgeComponent::Left;
  return m;
}

double ads_form(const Vec& x, const Vec& y) {
  return x(0) * y(0) + minkowski(x.tail(x.size() - 1), y.tail(y.size() - 1));
}

Vec ads_exp(const Vec& p, const Vec& y) {
  if (p.size() != y.size() || p.size() < 3)
    throw Error(ErrorCode::InvalidSize, "point and tangent sizes differ");
  if (std::abs(ads_form(p, p) - 1) >
      kHypersurfaceTol * std::max(1.0, p.squaredNorm()))
    throw Error(ErrorCode::NotOnHypersurface, "not on anti-de Sitter space");
  if (std::abs(ads_form(p, y)) > kHypersurfaceTol * std::max(1.0, p.norm() * y.norm()))
    throw Error(ErrorCode::NotTangent, "y is not tangent at p");
  double q = ads_form(y, y);
  double c, s;
  if (std::abs(q) < 1e-8) {
    c = 1 - q / 2;
    s = 1 - q / 6;
  } else if (q > 0) {
    double r = std::sqrt(q);
    c = std::cos(r);
    s = std::sin(r) / r;
  } else {
    double r = std::sqrt(-q);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  }
  return c * p + s * y;
}

std::string stratum_name(Stratum s) {
  switch (s) {
    case Stratum::CCInterior: return "CCInterior";
    case Stratum::CCBoundary: return "CCBoundary";
    case Stratum::NCCInterior: return "NCCInterior";
    case Stratum::NCCOpposite: return "NCCOpposite";
    case Stratum::NCCSphere: return "NCCSphere";
    case Stratum::NCCProduct: return "NCCProduct";
  }
  return "?";
}

Stratum boundary_stratum(const QuadricPoint& p, int j, int sign) {
  int d = dim_of_ray(p.ray);
  if (j < 0 || j > d - 1)
    throw Error(ErrorCode::IndexOutOfRange, "j must lie in [0, d - 1]");
  Vec x = make_quadric_point(p.ray).ray.normalized();
  Vec g = Vec::Ones(d + 2);
  g.segment(2, d - 1).setConstant(-1);
  g(d + 1) = -1;
  // The block (t, v_1, ..., v_{d-j-1}) is the H-factor of the -r_j split; its
  // complement in the +r_j split carries (v_1, ..., v_{d-j-1}, s).
  std::vector<int> block;
  if (sign > 0) {
    for (int k = 2; k <= d - j; ++k) block.push_back(k);
    block.push_back(d + 1);
  } else {
    block.push_back(0);
    for (int k = 2; k <= d - j; ++k) block.push_back(k);
  }
  double norm2 = 0, form = 0;
  for (int k : block) {
    norm2 += x(k) * x(k);
    form += g(k) * x(k) * x(k);
  }
  bool zero = std::sqrt(norm2) < kZeroBlockTol;
  if (sign > 0) return zero ? Stratum::CCBoundary : Stratum::CCInterior;
  if (zero) return Stratum::NCCSphere;
  if (std::abs(form) < kNullBlockTol * norm2) return Stratum::NCCProduct;
  return form > 0 ? Stratum::NCCInterior : Stratum::NCCOpposite;
}

std::string gh_region_name(GHRegion r) {
  switch (r) {
    case GHRegion::DeSitterWedge: return "ds-wedge";
    case GHRegion::AdSWedge: return "ads-wedge";
    case GHRegion::PositiveCone: return "positive-cone";
    case GHRegion::FlipWedge: return "flip-wedge";
  }
  return "?";
}

GHRegion parse_gh_region(const std::string& name) {
  for (GHRegion r : {GHRegion::DeSitterWedge, GHRegion::AdSWedge,
                     GHRegion::PositiveCone, GHRegion::FlipWedge})
    if (gh_region_name(r) == name) return r;
  throw Error(ErrorCode::IncompatibleKind, "unknown region " + name);
}

bool gh_region_contains(GHRegion region, const Vec& x, const Vec& anchor) {
  switch (region) {
    case GHRegion::PositiveCone:
      return cone_distance(x) > 0;
    case GHRegion::FlipWedge: {
      int d = static_cast<int>(x.size()) / 2;
      return cone_distance(x.head(d)) > 0 && cone_distance(-x.tail(d)) > 0;
    }
    case GHRegion::DeSitterWedge: {
      if (!in_chart_domain(minkowski(x, x), 1)) return false;
      return wedge_regions(stereo_forward(Chart::DeSitter, x),
                           WedgeKind::DeSitter).member;
    }
    case GHRegion::AdSWedge: {
      if (!in_chart_domain(minkowski(x, x), -1)) return false;
      auto m = wedge_regions(stereo_forward(Chart::AntiDeSitter, x),
                             WedgeKind::AntiDeSitter);
      if (!m.member) return false;
      if (anchor.size() == 0) return true;
      auto ma = wedge_regions(stereo_forward(Chart::AntiDeSitter, anchor),
                              WedgeKind::AntiDeSitter);
      return ma.member && ma.component == m.component;
    }
  }
  return false;
}

double gh_boundary_distance(GHRegion region, const Vec& x) {
  int n = static_cast<int>(x.size());
  switch (region) {
    case GHRegion::PositiveCone:
      return cone_distance(x);
    case GHRegion::FlipWedge:
      return std::min(cone_distance(x.head(n / 2)),
                      cone_distance(-x.tail(n / 2)));
    case GHRegion::DeSitterWedge: {
      // The chart image is the double cone D_{e_0, -e_0}.
      double r = x.tail(n - 1).norm();
      return std::min(1 - x(0) - r, 1 + x(0) - r) / std::sqrt(2.0);
    }
    case GHRegion::AdSWedge: {
      double wedge = (x(n - 1) - std::abs(x(0))) / std::sqrt(2.0);
      // First-order distance to the hyperboloid beta = -1.
      double sphere = std::abs(minkowski(x, x) + 1) / (2 * x.norm());
      return std::min(wedge, sphere);
    }
  }
  return 0;
}

Vec sample_double_cone(const Vec& a, const Vec& b, Rng& rng) {
  Vec w = a - b;
  if (!future_timelike(w))
    throw Error(ErrorCode::NotCausallyRelated,
                "a - b is not future timelike");
  int n = static_cast<int>(w.size()) - 1;
  double tau = std::sqrt(minkowski(w, w));
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> g(0, 1);
  // Rest frame of w: D = {(t, x) : |x| < min(t, tau - t)}.
  double t, rho;
  do {
    t = tau * u(rng);
    rho = std::min(t, tau - t);
  } while (u(rng) > std::pow(2 * rho / tau, n));
  Vec dir(n);
  for (int k = 0; k < n; ++k) dir(k) = g(rng);
  Vec xs = dir.normalized() * rho * std::pow(u(rng), 1.0 / n);
  // Boost taking tau e_0 to w.
  Vec vel = w.tail(n) / w(0);
  double gamma = w(0) / tau;
  Vec q(n + 1);
  double vx = vel.dot(xs);
  q(0) = gamma * (t + vx);
  double v2 = vel.squaredNorm();
  Vec xp = xs + gamma * t * vel;
  if (v2 > 0) xp += (gamma - 1) * vx / v2 * vel;
  q.tail(n) = xp;
  return b + q;
}

GHProbeReport gh_probe(GHRegion region, const Vec& a, const Vec& b, int n,
                       Rng& rng) {
  if (a.size() != b.size() || a.size() < 2)
    throw Error(ErrorCode::InvalidSize, "endpoint sizes differ");
  bool flip = region == GHRegion::FlipWedge;
  if (flip && a.size() % 2 != 0)
    throw Error(ErrorCode::InvalidSize, "flip wedge points live in V + V");
  int d = flip ? static_cast<int>(a.size()) / 2 : static_cast<int>(a.size());
  if (flip) {
    if (!future_timelike(a.head(d) - b.head(d)) ||
        !future_timelike(b.tail(d) - a.tail(d)))
      throw Error(ErrorCode::NotCausallyRelated, "b is not in the past of a");
  } else if (!future_timelike(a - b)) {
    throw Error(ErrorCode::NotCausallyRelated, "b is not in the past of a");
  }
  if (!gh_region_contains(region, a, a) || !gh_region_contains(region, b, a))
    throw Error(ErrorCode::OutsideChartDomain, "endpoints must lie in the region");

  auto inside = [&](const Vec& x) { return gh_region_contains(region, x, a); };
  GHProbeReport r;
  r.region = region;
  r.a = a;
  r.b = b;
  r.samples = n;
  r.min_boundary_distance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Vec x(a.size());
    if (flip) {
      x.head(d) = sample_double_cone(a.head(d), b.head(d), rng);
      x.tail(d) = sample_double_cone(b.tail(d), a.tail(d), rng);
    } else {
      x = sample_double_cone(a, b, rng);
    }
    if (!inside(x)) continue;
    bool ok = true;
    for (int k = 1; k < kSegmentSteps && ok; ++k) {
      double s = static_cast<double>(k) / kSegmentSteps;
      ok = inside(b + s * (x - b)) && inside(x + s * (a - x));
    }
    if (!ok) continue;
    ++r.interval_samples;
    r.min_boundary_distance =
        std::min(r.min_boundary_distance, gh_boundary_distance(region, x));
  }
  r.escape_detected =
      r.interval_samples > 0 && r.min_boundary_distance < kEscapeThreshold;
  return r;
}

}  // namespace causal
