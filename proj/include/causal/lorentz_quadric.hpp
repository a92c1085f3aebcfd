#pragma once

#include <optional>
#include <string>

#include "causal/conformal_completion.hpp"

namespace causal {

// Lorentzian geometry on Minkowski space V = R^{1,d-1} and its completion
// Q(R^{2,d}).
//
// Coordinates:
//   V:        (v_0, v_1, ..., v_{d-1}), beta(v, v) = v_0^2 - |v_1..|^2.
//   R^{2,d}:  (t, v, s), form t t' + beta(v, v') - s s'.
//   dS^d:     y = (y_V, y_d) in V + R with beta(y_V) - y_d^2 = -1; the ray
//             [1 : y].
//   AdS^d:    x = (x_1, x_V) in R + V with x_1^2 + beta(x_V) = 1; the ray
//             [x : -1].

double minkowski(const Vec& v, const Vec& w);

struct QuadricPoint {
  Vec ray;
};

QuadricPoint make_quadric_point(const Vec& ray);
double quadric_form(const Vec& x, const Vec& y);
QuadricPoint eta(const Vec& v);
std::optional<Vec> eta_inverse(const QuadricPoint& p);
bool same_ray(const QuadricPoint& p, const QuadricPoint& q, double tol = 1e-9);
CompletionPoint to_completion_point(const QuadricPoint& p);
QuadricPoint from_completion_point(const CompletionPoint& p);
// The Euler element h (h e_t = e_s, h e_s = e_t) of so(2, d).
Mat quadric_euler_element(int d);

enum class Chart { General, DeSitter, AntiDeSitter };
std::string chart_name(Chart c);

// Stereographic projection eta_1(v) = ((1 - b) e_1 + 2 v) / (1 + b), b =
// beta(v, v), onto the unit sphere of R + V, and its inverse w -> w'/(1 + w_1).
// `form` is the diagonal of beta; empty means Minkowski. DeSitter applies the
// construction to -beta and returns the dS^d coordinates above; AntiDeSitter
// is the Minkowski case read in AdS^d coordinates.
Vec stereo_forward(Chart chart, const Vec& v, const Vec& form = Vec());
Vec stereo_inverse(Chart chart, const Vec& w, const Vec& form = Vec());

Vec desitter_point(const QuadricPoint& p);
QuadricPoint from_desitter(const Vec& y);
Vec ads_point(const QuadricPoint& p);
QuadricPoint from_ads(const Vec& x);

enum class WedgeKind { DeSitter, AntiDeSitter };
enum class WedgeComponent { Left, Right };

struct WedgeMembership {
  bool member = false;
  std::optional<WedgeComponent> component;
};

std::string wedge_component_name(WedgeComponent c);

// Positivity region of the boost h' (dS: -y_d > |y_0|), resp. h'' (AdS:
// x_{d+1}^2 > x_2^2 with x_1 x_{d+1} > 0; Right when x_{d+1} > 0).
WedgeMembership wedge_regions(const Vec& x, WedgeKind which);

double ads_form(const Vec& x, const Vec& y);
// Exp_p(y) = cos(sqrt q) p + sin(sqrt q)/sqrt q y, q = ads_form(y, y), with
// the hyperbolic branch for q < 0.
Vec ads_exp(const Vec& p, const Vec& y);

enum class Stratum {
  CCInterior,     // (AdS^p x S^q)/{+-1}
  CCBoundary,     // Q(R^{2,p-1})
  NCCInterior,    // dS^p x H^q
  NCCOpposite,    // H^p x dS^q
  NCCSphere,      // S^{p-1}
  NCCProduct,     // S^{p-1} x R^x x S^{q-1}
};
std::string stratum_name(Stratum s);

// Position of a null ray relative to the orbit of G^{(+-r_j)}, p = j + 1,
// q = d - p. sign = +1 for the compactly causal split, -1 otherwise.
Stratum boundary_stratum(const QuadricPoint& p, int j, int sign);

enum class GHRegion { DeSitterWedge, AdSWedge, PositiveCone, FlipWedge };
std::string gh_region_name(GHRegion r);
GHRegion parse_gh_region(const std::string& name);

struct GHProbeReport {
  GHRegion region = GHRegion::PositiveCone;
  Vec a, b;
  int samples = 0;
  int interval_samples = 0;
  double min_boundary_distance = 0;
  bool escape_detected = false;
};

inline constexpr double kEscapeThreshold = 1e-3;

// Region membership and Euclidean distance to the region boundary in chart
// coordinates. For AdSWedge the region is the component containing `anchor`.
bool gh_region_contains(GHRegion region, const Vec& x, const Vec& anchor);
double gh_boundary_distance(GHRegion region, const Vec& x);

// Uniform sample of the chart double cone D_{a,b} (a - b future timelike).
Vec sample_double_cone(const Vec& a, const Vec& b, Rng& rng);

// Samples n points of D_{a,b} in chart coordinates (V, or V + V for the flip
// wedge with cone V_+ x (-V_+)), keeps those joined to a and b by straight
// causal segments inside the region and records their distance to the region
// boundary.
GHProbeReport gh_probe(GHRegion region, const Vec& a, const Vec& b, int n,
                       Rng& rng);

}  // namespace causal
