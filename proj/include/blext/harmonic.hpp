#pragma once
// Harmonic measure: exact formulas on the disk and its exterior, the gamma-arc
// construction, projection-theorem bounds, and a walk-on-spheres Monte Carlo
// oracle for arbitrary polyline domains.

#include "blext/curves.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace blext {

// arc {e^{it} : t_lo <= t <= t_hi} of the unit circle
struct Arc {
    double t_lo = 0, t_hi = 0;
    double length() const { return t_hi - t_lo; }
};

// the four arcs flanking a query point; see gamma_arcs
struct GammaArcs {
    Arc g1, g2, g3, g4;
};

// For z = re^{i theta} inside the punctured disk, with delta = log(1/r):
//   g1 = [theta-2d, theta-d], g2 = [theta-d, theta-d/2],
//   g3 = [theta+d/2, theta+d], g4 = [theta+d, theta+2d].
GammaArcs gamma_arcs(cplx z);
// Exterior analog for |z| > 1 with delta = log|z|.
GammaArcs gamma_arcs_exterior(cplx z);

// (1/2pi) (1-|z|^2)/|zeta - z|^2 for |z| < 1, |zeta| = 1
double poisson_kernel(cplx z, cplx zeta);

struct HarmonicMeasureResult {
    double value = 0;
    std::string method;     // "poisson-exact" or "monte-carlo"
    double std_error = 0;   // 0 for exact
    std::uint64_t walks = 0;  // 0 for exact
    std::uint64_t lost = 0;   // walks that hit the step cap (monte-carlo only)
};

// omega(z, arc, D) by adaptive quadrature of the Poisson kernel,
// absolute error well below 1e-10
HarmonicMeasureResult hm_disk_exact(cplx z, Arc arc);

// omega(z, arc, C \ closed D) for |z| > 1: the reflection w -> 1/conj(w) maps
// the exterior onto the disk, fixes the circle pointwise, and preserves
// harmonic measure, so this is hm_disk_exact(1/conj(z), arc)
HarmonicMeasureResult hm_exterior_exact(cplx z, Arc arc);

// closed polyline with a marked-target flag per segment
// (segment k joins pts[k] to pts[(k+1) % pts.size()])
struct MarkedPolyline {
    std::vector<cplx> pts;
    std::vector<bool> marked;
};

// Harmonic measure of the marked part of the boundary seen from z, which may
// lie inside or outside the polyline. Walk-on-spheres with absorption layer
// h = 1e-4 * diam; walks outside re-enter the kill circle of radius
// 10^3 * diam through its exact hitting distribution. Throws if the polyline
// is not simple or if more than 0.1% of walks fail to absorb in 1e5 steps.
HarmonicMeasureResult hm_monte_carlo(const MarkedPolyline& poly, cplx z,
                                     std::uint64_t walks, std::uint64_t seed);

// splits segments of a closed polyline at the circle |w| = rho and marks the
// parts inside the open disk D(0, rho)
MarkedPolyline mark_inside_disk(const std::vector<cplx>& polyline, double rho);

// projection-theorem bounds on omega(zeta, boundary within D(0,rho), Omega)
// for Omega avoiding 0
double bn_lower(double zeta_abs, double rho);  // (2/pi) asin((rho-|z|)/(rho+|z|))
double bn_upper(double zeta_abs, double rho);  // (2/pi) acos((|z|-rho)/(|z|+rho))

// one inequality evaluation; margin >= 0 means the inequality holds
struct IneqMargin {
    double lhs = 0, rhs = 0, margin = 0;
};

// consequences of the projection theorem for omega(zeta, Gamma, Omega) >= eps:
//   dist(zeta,Gamma) <= csc^2(pi eps/4) dist(zeta, boundary)
//   diam Gamma >= tan^2(pi eps/4) dist(zeta,Gamma)
struct BncorReport {
    IneqMargin dist_bound;  // margin = rhs - lhs
    IneqMargin diam_bound;  // margin = lhs - rhs
    double epsilon = 0;
};
// interior version; boundary is a closed polyline (distance uses segments)
BncorReport check_bncor(cplx zeta, const PlanarSet& Gamma,
                        const std::vector<cplx>& boundary, double epsilon);
// exterior version (compact boundary K, domain unbounded):
//   dist(zeta,Gamma) <= 4 csc^2(pi eps/4) dist(zeta, K)
//   diam Gamma >= (1/4) tan^2(pi eps/4) *
//                 (diam K - diam Gamma)^2 / (diam K (diam K + dist(zeta,Gamma)))
//                 * dist(zeta,Gamma)
BncorReport check_bncor_exterior(cplx zeta, const PlanarSet& Gamma,
                                 const std::vector<cplx>& K, double epsilon);

// distance from a point to a closed polyline (segment-exact)
double polyline_dist(cplx p, const std::vector<cplx>& pts);
double polyline_diam(const std::vector<cplx>& pts);
bool polyline_simple(const std::vector<cplx>& pts);

} // namespace blext
