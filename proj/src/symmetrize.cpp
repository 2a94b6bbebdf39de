#include "blext/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace blext {

namespace {

constexpr double kPi = kTwoPi / 2;

// The de-symmetrized extension reproduces the curve through the winding map,
// which doubles angles about the basepoint on the way back. A straight chord
// subtending angle s at w0 therefore comes back bowed by about
// max|f - w0| * s^2 / 8, so coarse segments seen under a wide angle would
// dominate the boundary-agreement budget even though the pipeline is exact at
// every node. The cure is representation refinement: insert exact points of
// the same polyline (f.eval along the segment) until every chord subtends at
// most max_span at w0. max_span = 0.06 keeps the bowing below
// 4.5e-4 * diam -- half the 1e-3 * diam budget -- while leaving crowded
// regions, whose segments already subtend tiny angles, untouched.
CircleEmbedding resample_by_view_angle(const CircleEmbedding& f, cplx w0,
                                       double max_span) {
    const std::size_t n = f.size();
    std::vector<double> t;
    std::vector<cplx> v;
    for (std::size_t j = 0; j < n; ++j) {
        double t0 = f.t[j];
        double t1 = j + 1 < n ? f.t[j + 1] : f.t[0] + kTwoPi;
        t.push_back(t0);
        v.push_back(f.value[j]);
        double span = std::abs(
            std::arg((f.value[(j + 1) % n] - w0) / (f.value[j] - w0)));
        int m = static_cast<int>(std::ceil(span / max_span));
        for (int k = 1; k < m; ++k) {
            double tk = t0 + (t1 - t0) * k / m;
            t.push_back(tk);
            v.push_back(f.eval(tk));
        }
    }
    // closing-segment insertions may pass 2 pi; rotate them to the front
    std::size_t tail = t.size();
    while (tail > 0 && t[tail - 1] >= kTwoPi) --tail;
    if (tail < t.size()) {
        std::vector<double> t2;
        std::vector<cplx> v2;
        for (std::size_t k = tail; k < t.size(); ++k) {
            t2.push_back(t[k] - kTwoPi);
            v2.push_back(v[k]);
        }
        t2.insert(t2.end(), t.begin(), t.begin() + tail);
        v2.insert(v2.end(), v.begin(), v.begin() + tail);
        t.swap(t2);
        v.swap(v2);
    }
    return embedding_from_nodes(std::move(t), std::move(v));
}

}  // namespace

std::pair<double, double> winding_jacobian_norms(cplx w) {
    Jacobian2 j = winding_jacobian(w);
    return {op_norm(j), 1.0 / op_norm_inv(j)};
}

WindingSymmetrization symmetrize(const CircleEmbedding& f, cplx w0) {
    const std::size_t n = f.size();
    const double d = f.diam();
    if (f.dist_to(w0) <= 1e-12 * d)
        throw std::invalid_argument("symmetrization basepoint lies on the curve");
    int wind = winding_number(f, w0);
    if (wind != 1 && wind != -1)
        throw std::invalid_argument(
            "symmetrization needs a basepoint the curve winds around once");

    WindingSymmetrization sym;
    sym.source = f;
    sym.w0 = w0;
    sym.sign_choice = 1;
    sym.r_min = std::numeric_limits<double>::infinity();
    for (const cplx& v : f.value)
        sym.r_min = std::min(sym.r_min, std::abs(v - w0));

    // continuous argument along the nodes: each hop takes the principal branch
    std::vector<double> a(n);
    a[0] = std::arg(f.value[0] - w0);
    for (std::size_t j = 1; j < n; ++j)
        a[j] = a[j - 1] + std::arg((f.value[j] - w0) / (f.value[j - 1] - w0));

    // nodes of g at the half-parameters, antipodes filled by exact negation
    std::vector<double> t(2 * n);
    std::vector<cplx> v(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        t[j] = f.t[j] / 2;
        v[j] = std::polar(std::abs(f.value[j] - w0), a[j] / 2);
        t[j + n] = t[j] + kPi;
        v[j + n] = -v[j];
    }
    sym.g = embedding_from_nodes(std::move(t), std::move(v));
    if (!sym.g.symmetric)
        throw std::logic_error("symmetrization lost exact antipodality");
    return sym;
}

WindingSymmetrization symmetrize_recentred(const CircleEmbedding& f) {
    IncenterReport inc = incenter(f);
    WindingSymmetrization sym = symmetrize(f, inc.center);
    sym.inradius = inc.radius;
    return sym;
}

namespace {

SymmetrizationMargins margins_with_floor(const WindingSymmetrization& sym,
                                         bool uniform) {
    BiLipschitzReport bf = curve_bilipschitz(sym.source, 1);
    BiLipschitzReport bg = curve_bilipschitz(sym.g, 1);
    SymmetrizationMargins m;
    m.bound_upper = kPi * bf.upper_L;
    double r = uniform ? bf.lower_l : sym.r_min;
    m.bound_lower = r * bf.lower_l / (kTwoPi * bf.upper_L);
    m.g_upper = bg.upper_L;
    m.g_lower = bg.lower_l;
    m.upper_margin = m.bound_upper - m.g_upper;
    m.lower_margin = m.g_lower - m.bound_lower;
    return m;
}

}  // namespace

SymmetrizationMargins symmetrization_margins(const WindingSymmetrization& sym) {
    return margins_with_floor(sym, false);
}

SymmetrizationMargins symmetrization_uniform_margins(
    const WindingSymmetrization& sym) {
    return margins_with_floor(sym, true);
}

nlohmann::ordered_json symmetrization_report_json(
    const WindingSymmetrization& sym) {
    BiLipschitzReport bg = curve_bilipschitz(sym.g, 1);
    SymmetrizationMargins p = symmetrization_margins(sym);
    SymmetrizationMargins c = symmetrization_uniform_margins(sym);
    nlohmann::ordered_json j;
    j["w0"] = {sym.w0.real(), sym.w0.imag()};
    j["r_min"] = sym.r_min;
    j["empirical_g_constants"] = {{"L", bg.upper_L}, {"l", bg.lower_l}};
    j["prop84_margins"] = {{"upper", p.upper_margin}, {"lower", p.lower_margin}};
    j["cor85_margins"] = {{"upper", c.upper_margin}, {"lower", c.lower_margin}};
    return j;
}

PlaneExtension desymmetrize_extension(const PlaneExtension& G, cplx w0) {
    const CircleEmbedding& g = G.source;
    if (!g.symmetric || g.size() % 2 != 0)
        throw std::runtime_error("G not centrally symmetric enough");
    const std::size_t h = g.size() / 2;
    const double gd = g.diam();

    // oddness of G on probe rings on both sides of T
    double odd_dev = 0;
    for (double r : {0.3, 0.7, 0.95, 1.05, 2.0, 20.0})
        for (int k = 0; k < 32; ++k) {
            cplx z = std::polar(r, kTwoPi * (k + 0.37) / 32);
            odd_dev = std::max(odd_dev, std::abs(G.eval(z) + G.eval(-z)));
        }
    if (odd_dev > 1e-6 * gd)
        throw std::runtime_error("G not centrally symmetric enough");

    auto core = std::make_shared<PlaneExtension>(G);

    // reconstruct the de-symmetrized boundary data from g's first half
    std::vector<double> th(h);
    std::vector<cplx> fv(h);
    for (std::size_t k = 0; k < h; ++k) {
        th[k] = 2 * g.t[k];
        fv[k] = w0 + winding_map(g.value[k]);
    }
    PlaneExtension F;
    F.source = embedding_from_nodes(th, fv);
    const double fd = F.source.diam();

    // both half-angle sections must give the same map across the branch cut
    double branch_dev = 0;
    for (double r : {0.4, 0.9, 1.1, 5.0})
        for (double eps : {1e-9, 1e-3, 0.3})
            for (double sgn : {1.0, -1.0}) {
                cplx s = winding_section(std::polar(r, sgn * eps));
                branch_dev = std::max(
                    branch_dev, std::abs(winding_map(core->eval(s)) -
                                         winding_map(core->eval(-s))));
            }
    if (branch_dev > 1e-8 * fd)
        throw std::runtime_error("G not centrally symmetric enough");

    // vote the section sign by agreement with the reconstructed nodes
    double dev_plus = 0, dev_minus = 0;
    for (std::size_t k = 0; k < h; ++k) {
        cplx s = std::polar(1.0, g.t[k]);
        dev_plus = std::max(dev_plus,
                            std::abs(w0 + winding_map(core->eval(s)) - fv[k]));
        dev_minus = std::max(
            dev_minus, std::abs(w0 + winding_map(core->eval(-s)) - fv[k]));
    }
    F.desym = PlaneExtension::Desym{w0, dev_plus <= dev_minus ? 1.0 : -1.0,
                                    core};
    return F;
}

PlaneExtension extend_plane_general(const CircleEmbedding& f) {
    // same polyline, finer nodes: the incenter is a property of the polyline,
    // so symmetrize_recentred picks the identical basepoint again below
    CircleEmbedding fr = resample_by_view_angle(f, incenter(f).center, 0.06);
    WindingSymmetrization sym = symmetrize_recentred(fr);
    PlaneExtension G = extend_plane_symmetric(sym.g);
    PlaneExtension F = desymmetrize_extension(G, sym.w0);
    F.source = f;  // measure agreement against the true boundary data
    return F;
}

}  // namespace blext
