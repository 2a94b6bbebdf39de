#include "blext/extend.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blext {

namespace {

constexpr double kPi = kTwoPi / 2;

double posmod(double x, double m) {
    double r = std::fmod(x, m);
    return r < 0 ? r + m : r;
}

// real 2x2 matrix of multiplication by c
Jacobian2 cmul(cplx c) {
    Jacobian2 m;
    m << c.real(), -c.imag(), c.imag(), c.real();
    return m;
}

// real Jacobian of a map with Wirtinger derivatives a = df/dz, b = df/dzbar
Jacobian2 wirtinger(cplx a, cplx b) {
    Jacobian2 m;
    m << (a + b).real(), -(a - b).imag(), (a + b).imag(), (a - b).real();
    return m;
}

// real Jacobian of the reflection r(v) = 1/conj(v) (anti-holomorphic,
// d/dzbar = -1/conj(v)^2)
Jacobian2 reflection_jacobian(cplx v) {
    return wirtinger(0, -1.0 / (std::conj(v) * std::conj(v)));
}

cplx raw_boundary(const DiskSideExtension& s, double theta) {
    return s.phi.boundary_interp(s.chi.inverse(posmod(theta, kTwoPi)));
}

cplx raw_eval(const DiskSideExtension& s, cplx zeta) {
    double r = std::abs(zeta);
    if (s.phi.kind == ConformalMap::Kind::interior) {
        if (r > 1 + 1e-9)
            throw std::domain_error("inner extension needs |zeta| <= 1");
        if (r > 1 - 1e-3) return raw_boundary(s, std::arg(zeta));
        if (r == 0) return s.phi.map(zeta);
        return s.phi.map(psi_inverse(s.chi, zeta));
    }
    if (r < 1 - 1e-9)
        throw std::domain_error("outer extension needs |zeta| >= 1");
    if (r < 1 + 1e-3) return raw_boundary(s, std::arg(zeta));
    cplx z = psi_inverse(s.chi, 1.0 / std::conj(zeta));
    return s.phi.map(1.0 / std::conj(z));
}

Jacobian2 raw_jacobian(const DiskSideExtension& s, cplx zeta) {
    double r = std::abs(zeta);
    if (s.phi.kind == ConformalMap::Kind::interior) {
        if (r < 1e-9 || r > 1 - 1e-9)
            throw std::domain_error("inner jacobian needs 0 < |zeta| < 1");
        cplx z = psi_inverse(s.chi, zeta);
        return cmul(s.phi.derivative(z)) *
               psi_jacobian(s.chi, z).inverse().eval();
    }
    if (r < 1 + 1e-9)
        throw std::domain_error("outer jacobian needs |zeta| > 1");
    cplx z = psi_inverse(s.chi, 1.0 / std::conj(zeta));
    return cmul(s.phi.derivative(1.0 / std::conj(z))) *
           reflection_jacobian(z) * psi_jacobian(s.chi, z).inverse().eval() *
           reflection_jacobian(zeta);
}

void require_symmetric(const CircleEmbedding& f) {
    if (!f.symmetric)
        throw std::invalid_argument(
            "plane extension needs a centrally symmetric embedding");
}

}  // namespace

cplx DiskSideExtension::eval(cplx zeta) const {
    cplx v = raw_eval(*this, zeta);
    if (!odd) return v;
    return (v - raw_eval(*this, -zeta)) * 0.5;
}

Jacobian2 DiskSideExtension::jacobian(cplx zeta) const {
    Jacobian2 m = raw_jacobian(*this, zeta);
    if (!odd) return m;
    return (m + raw_jacobian(*this, -zeta)) * 0.5;
}

cplx DiskSideExtension::boundary_value(double theta) const {
    cplx v = raw_boundary(*this, theta);
    if (!odd) return v;
    return (v - raw_boundary(*this, theta + kPi)) * 0.5;
}

cplx winding_map(cplx w) {
    double r = std::abs(w);
    if (r == 0) return 0;
    return w * w / r;
}

Jacobian2 winding_jacobian(cplx w) {
    double r = std::abs(w);
    if (r == 0) throw std::domain_error("winding map is not smooth at 0");
    cplx e = w / r;
    return wirtinger(1.5 * e, -0.5 * e * e * e);
}

cplx winding_section(cplx w) {
    double r = std::abs(w);
    if (r == 0) return 0;
    return std::polar(r, posmod(std::arg(w), kTwoPi) / 2);
}

cplx PlaneExtension::eval(cplx zeta) const {
    if (desym) {
        if (zeta == cplx(0)) return desym->w0;
        cplx s = desym->section_sign * winding_section(zeta);
        return desym->w0 + winding_map(desym->core->eval(s));
    }
    return std::abs(zeta) <= 1 ? inner.eval(zeta) : outer.eval(zeta);
}

Jacobian2 PlaneExtension::jacobian(cplx zeta) const {
    if (desym) {
        if (std::abs(zeta) < 1e-9)
            throw std::domain_error("jacobian needs |zeta| > 0");
        cplx s = desym->section_sign * winding_section(zeta);
        cplx u = desym->core->eval(s);
        // F = w0 + W(core(s)) and W(s(zeta)) = zeta, so Ds = DW(s)^{-1}
        return winding_jacobian(u) * desym->core->jacobian(s) *
               winding_jacobian(s).inverse().eval();
    }
    return std::abs(zeta) < 1 ? inner.jacobian(zeta) : outer.jacobian(zeta);
}

DiskSideExtension extend_disk(const CircleEmbedding& f) {
    require_symmetric(f);
    DiskSideExtension s;
    s.phi = interior_map(f);
    s.chi = boundary_homeo(s.phi, f);
    s.odd = true;
    return s;
}

DiskSideExtension extend_exterior(const CircleEmbedding& f) {
    require_symmetric(f);
    DiskSideExtension s;
    s.phi = exterior_map(f);
    s.chi = boundary_homeo(s.phi, f);
    s.odd = true;
    // the disk map moves moduli by at most e^{4 pi} each way, so the product
    // |zeta|^2 |z|^2 along the reflected composition stays in e^{+-8 pi}
    const double cap = std::exp(8 * kPi);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int i = 0; i < 16; ++i) {
        double rad = std::exp(std::log(1.002) +
                              (kTwoPi - std::log(1.002)) * i / 15.0);
        for (int k = 0; k < 16; ++k) {
            cplx zeta = std::polar(rad, kTwoPi * (k + 0.5) / 16);
            cplx z = psi_inverse(s.chi, 1.0 / std::conj(zeta));
            double prod = std::norm(zeta) * std::norm(z);
            lo = std::min(lo, prod);
            hi = std::max(hi, prod);
        }
    }
    if (lo < 1 / cap || hi > cap)
        throw std::runtime_error("extension violates the modulus growth bound");
    s.mod_growth_lo = lo;
    s.mod_growth_hi = hi;
    return s;
}

PlaneExtension extend_plane_symmetric(const CircleEmbedding& f) {
    PlaneExtension F;
    F.source = f;
    F.inner = extend_disk(f);
    F.outer = extend_exterior(f);
    return F;
}

BoundaryAgreement boundary_agreement(const PlaneExtension& F, int per_node) {
    BoundaryAgreement ba;
    const CircleEmbedding& f = F.source;
    const std::size_t n = f.size();
    for (std::size_t j = 0; j < n; ++j) {
        double t0 = f.t[j];
        double t1 = (j + 1 < n ? f.t[j + 1] : f.t[0] + kTwoPi);
        for (int q = 0; q < per_node; ++q) {
            double th = t0 + (t1 - t0) * q / per_node;
            cplx target = f.eval(th);
            cplx vi, vo;
            if (F.desym) {
                double half = posmod(th, kTwoPi) / 2;
                const PlaneExtension& core = *F.desym->core;
                double sign = F.desym->section_sign;
                vi = F.desym->w0 +
                     winding_map(sign * core.inner.boundary_value(half));
                vo = F.desym->w0 +
                     winding_map(sign * core.outer.boundary_value(half));
            } else {
                vi = F.inner.boundary_value(th);
                vo = F.outer.boundary_value(th);
            }
            ba.inner = std::max(ba.inner, std::abs(vi - target));
            ba.outer = std::max(ba.outer, std::abs(vo - target));
            ba.across = std::max(ba.across, std::abs(vi - vo));
        }
    }
    return ba;
}

JacobianReport jacobian_report(const PlaneExtension& F, const GridSpec& spec,
                               std::vector<GridRow>* rows) {
    JacobianReport rep;
    const double inner_edges[4] = {spec.gap, std::exp(-kTwoPi),
                                   std::exp(-kPi / 4), 1 - spec.gap};
    const double outer_edges[4] = {1 + spec.gap, std::exp(kPi / 4),
                                   std::exp(kTwoPi),
                                   spec.outer_limit * std::exp(kTwoPi)};
    auto sweep = [&](const double* edges, bool is_inner) {
        for (int reg = 0; reg < 3; ++reg) {
            double llo = std::log(edges[reg]), lhi = std::log(edges[reg + 1]);
            for (int i = 0; i < spec.radii; ++i) {
                double r = std::exp(llo + (lhi - llo) * (i + 0.5) / spec.radii);
                for (int k = 0; k < spec.angles; ++k) {
                    cplx z = std::polar(r, kTwoPi * (k + 0.5) / spec.angles);
                    Jacobian2 J = F.jacobian(z);
                    double df = op_norm(J);
                    double dfi = op_norm_inv(J);
                    double det = J.determinant();
                    if (!(det > 0)) {
                        std::ostringstream os;
                        os << "orientation fold at (" << z.real() << ", "
                           << z.imag() << ")";
                        throw std::runtime_error(os.str());
                    }
                    if (df > rep.sup_df) rep.sup_df = df, rep.sup_df_at = z;
                    if (dfi > rep.sup_df_inv)
                        rep.sup_df_inv = dfi, rep.sup_df_inv_at = z;
                    if (is_inner) {
                        if (df > rep.inner_sup_df)
                            rep.inner_sup_df = df, rep.inner_sup_df_at = z;
                        if (dfi > rep.inner_sup_df_inv)
                            rep.inner_sup_df_inv = dfi,
                            rep.inner_sup_df_inv_at = z;
                    }
                    if (det < rep.min_det) rep.min_det = det, rep.min_det_at = z;
                    if (rows) rows->push_back({z, df, dfi, det});
                    ++rep.points;
                }
            }
        }
    };
    sweep(inner_edges, true);
    sweep(outer_edges, false);
    return rep;
}

nlohmann::ordered_json extension_report_json(const PlaneExtension& F,
                                             const JacobianReport& jr,
                                             const BoundaryAgreement& ba,
                                             const GridSpec& spec) {
    BiLipschitzReport bl = curve_bilipschitz(F.source, 1);
    const double L = bl.upper_L, l = bl.lower_l;
    nlohmann::ordered_json j;
    j["boundary_agreement"] = {{"inner", ba.inner},
                               {"outer", ba.outer},
                               {"across", ba.across}};
    j["sup_DF"] = jr.sup_df;
    j["sup_DF_inv"] = jr.sup_df_inv;
    j["empirical_L"] = L;
    j["empirical_l"] = l;
    nlohmann::ordered_json m;
    if (F.desym) {
        m["global_df"] = 1e28 * L - jr.sup_df;
        m["global_df_inv"] = 1e25 * L / (l * l) - jr.sup_df_inv;
    } else {
        m["interior_df"] = 1e13 * L - jr.inner_sup_df;
        m["interior_df_inv"] = 1e11 / l - jr.inner_sup_df_inv;
        m["global_df"] = 1e27 * L - jr.sup_df;
        m["global_df_inv"] = 1e23 / l - jr.sup_df_inv;
    }
    j["paper_bound_margins"] = m;
    j["grid_spec"] = {{"radii", spec.radii},
                      {"angles", spec.angles},
                      {"gap", spec.gap},
                      {"outer_limit", spec.outer_limit}};
    j["witnesses"] = {
        {"sup_DF_at", {jr.sup_df_at.real(), jr.sup_df_at.imag()}},
        {"sup_DF_inv_at", {jr.sup_df_inv_at.real(), jr.sup_df_inv_at.imag()}},
        {"min_det", jr.min_det},
        {"min_det_at", {jr.min_det_at.real(), jr.min_det_at.imag()}}};
    return j;
}

}  // namespace blext
