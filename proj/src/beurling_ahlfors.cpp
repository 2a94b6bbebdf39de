#include "blext/ba_ext.hpp"
#include "blext/harmonic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace blext {

namespace {

constexpr double kPi = kTwoPi / 2;

// real 2x2 matrix of multiplication by a complex number
Jacobian2 cmult(cplx a) {
    Jacobian2 m;
    m << a.real(), -a.imag(), a.imag(), a.real();
    return m;
}

} // namespace

double op_norm(const Jacobian2& m) {
    double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    double s1 = a * a + b * b + c * c + d * d;
    double r = std::hypot(a * a + c * c - b * b - d * d, 2 * (a * b + c * d));
    return std::sqrt((s1 + r) / 2);
}

double op_norm_inv(const Jacobian2& m) {
    double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (det == 0) return std::numeric_limits<double>::infinity();
    // sigma_min = |det| / sigma_max avoids cancellation
    return op_norm(m) / std::abs(det);
}

double CircleHomeoLift::eval(double x) const {
    const std::size_t n = t.size();
    double m = std::floor((x - t[0]) / kTwoPi);
    double u = x - kTwoPi * m;
    if (u >= t[0] + kTwoPi) { u -= kTwoPi; m += 1; }
    if (u < t[0]) { u += kTwoPi; m -= 1; }
    auto it = std::upper_bound(t.begin(), t.end(), u);
    std::size_t k = std::size_t(it - t.begin()) - 1;
    double t0 = t[k], c0 = chi[k];
    double t1 = (k + 1 < n) ? t[k + 1] : t[0] + kTwoPi;
    double c1 = (k + 1 < n) ? chi[k + 1] : chi[0] + kTwoPi;
    return c0 + (u - t0) / (t1 - t0) * (c1 - c0) + kTwoPi * m;
}

double CircleHomeoLift::inverse(double v) const {
    const std::size_t n = t.size();
    double m = std::floor((v - chi[0]) / kTwoPi);
    double u = v - kTwoPi * m;
    if (u >= chi[0] + kTwoPi) { u -= kTwoPi; m += 1; }
    if (u < chi[0]) { u += kTwoPi; m -= 1; }
    auto it = std::upper_bound(chi.begin(), chi.end(), u);
    std::size_t k = std::size_t(it - chi.begin()) - 1;
    double c0 = chi[k], t0 = t[k];
    double c1 = (k + 1 < n) ? chi[k + 1] : chi[0] + kTwoPi;
    double t1 = (k + 1 < n) ? t[k + 1] : t[0] + kTwoPi;
    return t0 + (u - c0) / (c1 - c0) * (t1 - t0) + kTwoPi * m;
}

double CircleHomeoLift::integral(double x) const {
    // int_{t[0]}^{x}: whole periods in closed form plus an in-period remainder
    double m = std::floor((x - t[0]) / kTwoPi);
    double u = x - kTwoPi * m;
    if (u >= t[0] + kTwoPi) { u -= kTwoPi; m += 1; }
    if (u < t[0]) { u += kTwoPi; m -= 1; }
    auto it = std::upper_bound(t.begin(), t.end(), u);
    std::size_t k = std::size_t(it - t.begin()) - 1;
    double part = cumint[k] + (chi[k] + eval(u)) / 2 * (u - t[k]);
    return m * period_integral + kTwoPi * kTwoPi * m * (m - 1) / 2 +
           part + kTwoPi * m * (u - t[0]);
}

CircleHomeoLift lift_from_nodes(std::vector<double> t, std::vector<double> chi) {
    CircleHomeoLift lf;
    lf.t = std::move(t);
    lf.chi = std::move(chi);
    const std::size_t n = lf.t.size();
    if (n < 3 || lf.chi.size() != n) throw std::invalid_argument("need >= 3 nodes");
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(lf.t[k]) || !std::isfinite(lf.chi[k]))
            throw std::invalid_argument("non-finite lift node");
        if (lf.t[k] < 0 || lf.t[k] >= kTwoPi)
            throw std::invalid_argument("lift parameter outside [0, 2pi)");
        if (k > 0 && lf.t[k] <= lf.t[k - 1])
            throw std::invalid_argument("lift parameters not increasing");
        if (k > 0 && lf.chi[k] <= lf.chi[k - 1])
            throw std::invalid_argument("lift values not increasing");
    }
    if (lf.chi[0] < 0 || lf.chi[0] >= kTwoPi)
        throw std::invalid_argument("chi[0] must lie in [0, 2pi)");
    if (lf.chi[n - 1] >= lf.chi[0] + kTwoPi)
        throw std::invalid_argument("lift exceeds one revolution");
    lf.cumint.resize(n);
    lf.cumint[0] = 0;
    for (std::size_t k = 1; k < n; ++k)
        lf.cumint[k] = lf.cumint[k - 1] +
                       (lf.chi[k - 1] + lf.chi[k]) / 2 * (lf.t[k] - lf.t[k - 1]);
    lf.period_integral = lf.cumint[n - 1] +
                         (lf.chi[n - 1] + lf.chi[0] + kTwoPi) / 2 *
                             (lf.t[0] + kTwoPi - lf.t[n - 1]);
    // detect chi(t + pi) = chi(t) + pi on the node set
    lf.pi_equivariant = false;
    if (n % 2 == 0) {
        const std::size_t h = n / 2;
        bool eq = true;
        for (std::size_t k = 0; k < h && eq; ++k) {
            eq = std::abs(lf.t[k + h] - lf.t[k] - kPi) <= 1e-9 &&
                 std::abs(lf.chi[k + h] - lf.chi[k] - kPi) <= 1e-9;
        }
        lf.pi_equivariant = eq;
    }
    return lf;
}

CircleHomeoLift lift(const std::vector<double>& t, const std::vector<cplx>& psi) {
    const std::size_t n = t.size();
    if (n < 3 || psi.size() != n) throw std::invalid_argument("need >= 3 samples");
    std::vector<double> chi(n);
    double c = std::arg(psi[0]);
    if (c < 0) c += kTwoPi;
    chi[0] = c;
    for (std::size_t k = 1; k < n; ++k) {
        double inc = std::arg(psi[k] / psi[k - 1]);
        if (inc <= 0) inc += kTwoPi;  // branch: increments in (0, 2pi)
        chi[k] = chi[k - 1] + inc;
    }
    double closing = std::arg(psi[0] / psi[n - 1]);
    if (closing <= 0) closing += kTwoPi;
    if (std::abs(chi[n - 1] + closing - chi[0] - kTwoPi) > 1e-9)
        throw std::invalid_argument("samples do not wind once around the circle");
    return lift_from_nodes(t, std::move(chi));
}

CircleHomeoLift identity_lift(int n) {
    std::vector<double> t(n), chi(n);
    for (int k = 0; k < n; ++k) t[k] = chi[k] = kTwoPi * k / n;
    return lift_from_nodes(std::move(t), std::move(chi));
}

cplx ba_extend(const CircleHomeoLift& chi, cplx z) {
    double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::domain_error("ba_extend needs Im z > 0");
    double il = chi.integral(x - y), ic = chi.integral(x), ir = chi.integral(x + y);
    return cplx((ir - il) / (2 * y), (ir + il - 2 * ic) / y);
}

Jacobian2 ba_jacobian(const CircleHomeoLift& chi, cplx z) {
    double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::domain_error("ba_jacobian needs Im z > 0");
    double il = chi.integral(x - y), ic = chi.integral(x), ir = chi.integral(x + y);
    double cl = chi.eval(x - y), cc = chi.eval(x), cr = chi.eval(x + y);
    Jacobian2 m;
    m(0, 0) = (cr - cl) / (2 * y);
    m(0, 1) = (cr + cl) / (2 * y) - (ir - il) / (2 * y * y);
    m(1, 0) = (cr + cl - 2 * cc) / y;
    m(1, 1) = (cr - cl) / y - (ir + il - 2 * ic) / (y * y);
    return m;
}

cplx psi_disk(const CircleHomeoLift& chi, cplx zeta) {
    double r = std::abs(zeta);
    if (r > 1 + 1e-9) throw std::domain_error("psi_disk needs |zeta| <= 1");
    if (r == 0) return cplx(0, 0);
    double theta = std::arg(zeta), delta = -std::log(std::min(r, 1.0));
    if (delta < 1e-12) return std::polar(1.0, chi.eval(theta));
    cplx e = ba_extend(chi, cplx(theta, delta));
    return std::polar(std::exp(-e.imag()), e.real());
}

Jacobian2 psi_jacobian(const CircleHomeoLift& chi, cplx zeta) {
    double r = std::abs(zeta);
    if (!(r > 0 && r < 1)) throw std::domain_error("psi_jacobian needs 0 < |zeta| < 1");
    cplx z(std::arg(zeta), -std::log(r));
    cplx e = ba_extend(chi, z);
    cplx psi = std::polar(std::exp(-e.imag()), e.real());
    // Psi = exp(i chi_e(-i Log zeta)); conformal factors enter as complex
    // multiplications around the real 2x2 core
    return cmult(cplx(0, 1) * psi) * ba_jacobian(chi, z) *
           cmult(1.0 / (cplx(0, 1) * zeta));
}

namespace {

// winding of chi_e - tau around the rectangle [x0,x1]x[y0,y1]
double rect_winding(const CircleHomeoLift& chi, cplx tau, double x0, double x1,
                    double y0, double y1, int per_side) {
    std::vector<cplx> path;
    for (int k = 0; k < per_side; ++k)
        path.push_back(cplx(x0 + (x1 - x0) * k / per_side, y0));
    for (int k = 0; k < per_side; ++k)
        path.push_back(cplx(x1, y0 + (y1 - y0) * k / per_side));
    for (int k = 0; k < per_side; ++k)
        path.push_back(cplx(x1 - (x1 - x0) * k / per_side, y1));
    for (int k = 0; k < per_side; ++k)
        path.push_back(cplx(x0, y1 - (y1 - y0) * k / per_side));
    double total = 0;
    cplx prev = ba_extend(chi, path.back()) - tau;
    for (cplx p : path) {
        cplx cur = ba_extend(chi, p) - tau;
        total += std::arg(cur / prev);
        prev = cur;
    }
    return total / kTwoPi;
}

} // namespace

cplx psi_inverse(const CircleHomeoLift& chi, cplx w) {
    double rho = std::abs(w);
    if (!(rho > 0 && rho <= 1 + 1e-9))
        throw std::domain_error("psi_inverse needs 0 < |w| <= 1");
    double omega = std::arg(w), dw = -std::log(std::min(rho, 1.0));
    if (dw < 1e-12) return std::polar(1.0, chi.inverse(omega));
    const cplx tau(chi.eval(chi.inverse(omega)) , dw); // branch anchor for Re
    // Newton in half-plane coordinates
    cplx z(chi.inverse(omega), dw);
    auto residual = [&](cplx zz) {
        cplx e = ba_extend(chi, zz);
        return std::abs(std::polar(std::exp(-e.imag()), e.real()) - w);
    };
    for (int it = 0; it < 60; ++it) {
        cplx f = ba_extend(chi, z) - tau;
        if (residual(z) <= 1e-12) break;
        Jacobian2 m = ba_jacobian(chi, z);
        Eigen::Vector2d rhs(f.real(), f.imag());
        Eigen::Vector2d step = m.partialPivLu().solve(rhs);
        cplx dz(step(0), step(1));
        double damp = 1;
        while (z.imag() - damp * dz.imag() <= 0 && damp > 1e-6) damp /= 2;
        z -= damp * dz;
    }
    if (residual(z) <= 1e-10) return std::polar(std::exp(-z.imag()), z.real());

    // fallback: winding-number bisection on a rectangle that must contain the
    // solution (the imaginary part of chi_e stays within 4 pi of Im z)
    double x0 = tau.real() - kTwoPi - 1, x1 = tau.real() + kTwoPi + 1;
    double y0 = std::max(1e-14, dw - 2 * kTwoPi - 1), y1 = dw + 2 * kTwoPi + 1;
    if (std::lround(rect_winding(chi, tau, x0, x1, y0, y1, 256)) < 1) {
        std::ostringstream os;
        os << "psi_inverse failed: no preimage located for w = (" << w.real()
           << ", " << w.imag() << "), residual " << residual(z);
        throw std::runtime_error(os.str());
    }
    for (int round = 0; round < 60 && (x1 - x0) + (y1 - y0) > 1e-12; ++round) {
        double xm = (x0 + x1) / 2, ym = (y0 + y1) / 2;
        bool found = false;
        for (auto [ax0, ax1, ay0, ay1] :
             {std::array<double, 4>{x0, xm, y0, ym},
              std::array<double, 4>{xm, x1, y0, ym},
              std::array<double, 4>{x0, xm, ym, y1},
              std::array<double, 4>{xm, x1, ym, y1}}) {
            if (std::lround(rect_winding(chi, tau, ax0, ax1, ay0, ay1, 128)) >= 1) {
                x0 = ax0; x1 = ax1; y0 = ay0; y1 = ay1;
                found = true;
                break;
            }
        }
        if (!found) break;
        z = cplx((x0 + x1) / 2, (y0 + y1) / 2);
        if (residual(z) <= 1e-10)
            return std::polar(std::exp(-z.imag()), z.real());
    }
    // polish whatever the bisection produced
    for (int it = 0; it < 40; ++it) {
        cplx f = ba_extend(chi, z) - tau;
        Jacobian2 m = ba_jacobian(chi, z);
        Eigen::Vector2d step =
            m.partialPivLu().solve(Eigen::Vector2d(f.real(), f.imag()));
        cplx dz(step(0), step(1));
        double damp = 1;
        while (z.imag() - damp * dz.imag() <= 0 && damp > 1e-6) damp /= 2;
        z -= damp * dz;
        if (residual(z) <= 1e-10)
            return std::polar(std::exp(-z.imag()), z.real());
    }
    std::ostringstream os;
    os << "psi_inverse failed to reach residual 1e-10 for w = (" << w.real()
       << ", " << w.imag() << "); best residual " << residual(z);
    throw std::runtime_error(os.str());
}

PsiJacobianBounds psi_jacobian_bounds(const CircleHomeoLift& chi, cplx z) {
    if (!chi.pi_equivariant)
        throw std::invalid_argument("derivative bounds need an equivariant lift");
    double r = std::abs(z);
    if (!(r > 0 && r < 1))
        throw std::domain_error("psi_jacobian_bounds needs 0 < |z| < 1");
    const double e4p = std::exp(2 * kTwoPi);
    double delta = std::log(1 / r);
    PsiJacobianBounds out;
    Jacobian2 m = psi_jacobian(chi, z);
    out.dpsi_measured = op_norm(m);
    out.dpsi_inv_measured = op_norm_inv(m);
    auto sample_arc = [&](Arc a) {
        PlanarSet pts;
        for (int k = 0; k <= 128; ++k)
            pts.push_back(std::polar(1.0, chi.eval(a.t_lo + a.length() * k / 128)));
        return pts;
    };
    auto g = gamma_arcs(z);
    if (r > std::exp(-kPi / 4)) {
        double d = set_dist(sample_arc(g.g1), sample_arc(g.g4));
        out.dpsi_bound = e4p * kPi * d / delta;
    } else {
        out.dpsi_bound = 20 * e4p;
    }
    if (r > std::exp(-kTwoPi)) {
        double d2 = set_diam(sample_arc(g.g2)), d3 = set_diam(sample_arc(g.g3));
        out.dpsi_inv_bound = 4 * e4p * delta / std::min(d2, d3);
    } else {
        out.dpsi_inv_bound = 16 * e4p;
    }
    return out;
}

} // namespace blext
