#include "blext/harmonic.hpp"
#include "blext/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blext {

namespace {

constexpr double kPi = kTwoPi / 2;

// adaptive Simpson with error estimate |S2 - S1|/15
template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    double err = left + right - whole;
    if (depth <= 0 || std::abs(err) < 15 * tol)
        return left + right + err / 15;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, tol / 2, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (a == b) return 0;
    double m = (a + b) / 2, fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

std::size_t nearest_polyline_segment(cplx p, const std::vector<cplx>& pts,
                                     double& dist) {
    const std::size_t n = pts.size();
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = segment_dist(p, pts[k], pts[(k + 1) % n]);
        if (d < best) { best = d; arg = k; }
    }
    dist = best;
    return arg;
}

} // namespace

GammaArcs gamma_arcs(cplx z) {
    double r = std::abs(z);
    if (r <= 0 || r >= 1) throw std::domain_error("gamma_arcs needs 0 < |z| < 1");
    double theta = std::arg(z), d = std::log(1 / r);
    return {Arc{theta - 2 * d, theta - d}, Arc{theta - d, theta - d / 2},
            Arc{theta + d / 2, theta + d}, Arc{theta + d, theta + 2 * d}};
}

GammaArcs gamma_arcs_exterior(cplx z) {
    double R = std::abs(z);
    if (!(R > 1)) throw std::domain_error("gamma_arcs_exterior needs |z| > 1");
    double theta = std::arg(z), d = std::log(R);
    return {Arc{theta - 2 * d, theta - d}, Arc{theta - d, theta - d / 2},
            Arc{theta + d / 2, theta + d}, Arc{theta + d, theta + 2 * d}};
}

double poisson_kernel(cplx z, cplx zeta) {
    return (1 - std::norm(z)) / std::norm(zeta - z) / kTwoPi;
}

HarmonicMeasureResult hm_disk_exact(cplx z, Arc arc) {
    double r = std::abs(z);
    if (r >= 1) throw std::domain_error("hm_disk_exact needs |z| < 1");
    if (!(arc.t_hi > arc.t_lo) || arc.length() > kTwoPi + 1e-12)
        throw std::domain_error("bad arc");
    auto f = [&](double t) { return poisson_kernel(z, std::polar(1.0, t)); };
    // split at the kernel peak t = arg z (mod 2pi) and cap chunk length so the
    // adaptive pass starts from a resolved picture
    std::vector<double> cuts = {arc.t_lo, arc.t_hi};
    double theta = std::arg(z), w = std::max(1e-6, 1 - r);
    for (double tk = theta - 3 * kTwoPi; tk < arc.t_hi + kTwoPi; tk += kTwoPi)
        for (double c : {tk - w, tk, tk + w})
            if (c > arc.t_lo && c < arc.t_hi) cuts.push_back(c);
    for (double c = arc.t_lo + 0.25; c < arc.t_hi; c += 0.25) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double total = 0;
    const double tol = 1e-12;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        total += adaptive_simpson(f, cuts[k], cuts[k + 1],
                                  tol * (cuts[k + 1] - cuts[k]) / arc.length());
    HarmonicMeasureResult res;
    res.value = std::clamp(total, 0.0, 1.0);
    res.method = "poisson-exact";
    return res;
}

HarmonicMeasureResult hm_exterior_exact(cplx z, Arc arc) {
    if (!(std::abs(z) > 1)) throw std::domain_error("hm_exterior_exact needs |z| > 1");
    return hm_disk_exact(1.0 / std::conj(z), arc);
}

double polyline_dist(cplx p, const std::vector<cplx>& pts) {
    double d;
    nearest_polyline_segment(p, pts, d);
    return d;
}

double polyline_diam(const std::vector<cplx>& pts) {
    double d = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

bool polyline_simple(const std::vector<cplx>& pts) {
    const std::size_t n = pts.size();
    if (n < 3) return false;
    double diam = polyline_diam(pts);
    if (diam <= 0) return false;
    const double tol = 1e-12 * diam;
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(pts[(k + 1) % n] - pts[k]) <= tol) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segment_segment_dist(pts[i], pts[(i + 1) % n], pts[j],
                                     pts[(j + 1) % n]) <= tol)
                return false;
        }
    return true;
}

MarkedPolyline mark_inside_disk(const std::vector<cplx>& polyline, double rho) {
    if (rho <= 0) throw std::domain_error("rho must be positive");
    MarkedPolyline out;
    const std::size_t n = polyline.size();
    for (std::size_t k = 0; k < n; ++k) {
        cplx a = polyline[k], b = polyline[(k + 1) % n], d = b - a;
        // |a + t d| = rho
        double A = std::norm(d);
        double B = 2 * (a.real() * d.real() + a.imag() * d.imag());
        double C = std::norm(a) - rho * rho;
        std::vector<double> ts = {0.0, 1.0};
        double disc = B * B - 4 * A * C;
        if (A > 0 && disc > 0) {
            double sq = std::sqrt(disc);
            for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)})
                if (t > 1e-6 && t < 1 - 1e-6) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            cplx lo = a + ts[i] * d, mid = a + (ts[i] + ts[i + 1]) / 2 * d;
            out.pts.push_back(lo);
            out.marked.push_back(std::abs(mid) < rho);
        }
    }
    return out;
}

HarmonicMeasureResult hm_monte_carlo(const MarkedPolyline& poly, cplx z,
                                     std::uint64_t walks, std::uint64_t seed) {
    const std::size_t n = poly.pts.size();
    if (n < 3 || poly.marked.size() != n)
        throw std::invalid_argument("bad marked polyline");
    if (walks < 1000) throw std::invalid_argument("need at least 1000 walks");
    if (!polyline_simple(poly.pts))
        throw std::invalid_argument("polyline is not simple");
    const double diam = polyline_diam(poly.pts);
    const double h = 1e-4 * diam;
    cplx centroid(0, 0);
    for (cplx p : poly.pts) centroid += p;
    centroid /= double(n);
    const double r_kill = 1e3 * diam;
    if (polyline_dist(z, poly.pts) <= h)
        throw std::invalid_argument("start point touches the boundary layer");

    double sum = 0, sumsq = 0;
    std::uint64_t absorbed = 0, lost = 0;
    for (std::uint64_t w = 0; w < walks; ++w) {
        // per-walk stream: SplitMix64 states spaced by the golden-ratio gamma
        SplitMix64 rng(seed + w * 0x9e3779b97f4a7c15ULL);
        cplx cur = z;
        bool done = false;
        for (int step = 0; step < 100000; ++step) {
            double dist;
            std::size_t seg = nearest_polyline_segment(cur, poly.pts, dist);
            if (dist < h) {
                double s = poly.marked[seg] ? 1.0 : 0.0;
                sum += s;
                sumsq += s * s;
                ++absorbed;
                done = true;
                break;
            }
            double far = std::abs(cur - centroid);
            if (far > r_kill) {
                // exact hitting distribution of the kill circle seen from cur
                double rho = r_kill / far;
                double u = rng.uniform();
                double phi = 2 * std::atan((1 - rho) / (1 + rho) *
                                           std::tan(kPi * (u - 0.5)));
                double psi = std::arg(cur - centroid);
                cur = centroid + std::polar(r_kill, psi + phi);
                continue;
            }
            cur += std::polar(dist, rng.uniform(0, kTwoPi));
        }
        if (!done) ++lost;
    }
    if (lost * 1000 > walks)
        throw std::runtime_error("more than 0.1% of walks failed to absorb");
    HarmonicMeasureResult res;
    res.method = "monte-carlo";
    res.walks = walks;
    res.lost = lost;
    res.value = sum / double(absorbed);
    double var = (sumsq - sum * sum / double(absorbed)) / double(absorbed - 1);
    res.std_error = std::sqrt(std::max(0.0, var) / double(absorbed));
    return res;
}

double bn_lower(double zeta_abs, double rho) {
    if (!(zeta_abs >= 0 && zeta_abs < rho))
        throw std::domain_error("bn_lower needs 0 <= |zeta| < rho");
    return 2 / kPi * std::asin((rho - zeta_abs) / (rho + zeta_abs));
}

double bn_upper(double zeta_abs, double rho) {
    if (!(zeta_abs > rho && rho > 0))
        throw std::domain_error("bn_upper needs |zeta| > rho > 0");
    return 2 / kPi * std::acos((zeta_abs - rho) / (zeta_abs + rho));
}

BncorReport check_bncor(cplx zeta, const PlanarSet& Gamma,
                        const std::vector<cplx>& boundary, double epsilon) {
    if (epsilon <= 0) throw std::domain_error("epsilon must be positive");
    BncorReport rep;
    rep.epsilon = epsilon;
    double s = std::sin(kPi * epsilon / 4), tn = std::tan(kPi * epsilon / 4);
    double dzG = point_set_dist(zeta, Gamma);
    rep.dist_bound.lhs = dzG;
    rep.dist_bound.rhs = 1 / (s * s) * polyline_dist(zeta, boundary);
    rep.dist_bound.margin = rep.dist_bound.rhs - rep.dist_bound.lhs;
    rep.diam_bound.lhs = set_diam(Gamma);
    rep.diam_bound.rhs = tn * tn * dzG;
    rep.diam_bound.margin = rep.diam_bound.lhs - rep.diam_bound.rhs;
    return rep;
}

BncorReport check_bncor_exterior(cplx zeta, const PlanarSet& Gamma,
                                 const std::vector<cplx>& K, double epsilon) {
    if (epsilon <= 0) throw std::domain_error("epsilon must be positive");
    BncorReport rep;
    rep.epsilon = epsilon;
    double s = std::sin(kPi * epsilon / 4), tn = std::tan(kPi * epsilon / 4);
    double dzG = point_set_dist(zeta, Gamma);
    double dK = polyline_diam(K), dG = set_diam(Gamma);
    rep.dist_bound.lhs = dzG;
    rep.dist_bound.rhs = 4 / (s * s) * polyline_dist(zeta, K);
    rep.dist_bound.margin = rep.dist_bound.rhs - rep.dist_bound.lhs;
    rep.diam_bound.lhs = dG;
    rep.diam_bound.rhs = 0.25 * tn * tn * (dK - dG) * (dK - dG) /
                         (dK * (dK + dzG)) * dzG;
    rep.diam_bound.margin = rep.diam_bound.lhs - rep.diam_bound.rhs;
    return rep;
}

} // namespace blext
