#include "blext/conformal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace blext {

namespace {

constexpr double kPi = kTwoPi / 2;
const double kInf = std::numeric_limits<double>::infinity();

double posmod(double x, double m) {
    double r = std::fmod(x, m);
    return r < 0 ? r + m : r;
}

// branch of the square root mapping C minus [0, inf) onto the upper half-plane
cplx hsqrt(cplx u) { return cplx(0, 1) * std::sqrt(-u); }

// forward slit step on half-plane interior points: T(z) = z/(1 - z/q), then
// the slit opener sqrt(z^2 + h^2); der accumulates the chain derivative
void slit_advance(cplx& z, cplx& der, const SlitStep& st) {
    if (std::isfinite(st.q)) {
        cplx den = 1.0 - z / st.q;
        der /= den * den;
        z /= den;
    }
    cplx out = hsqrt(z * z + st.h * st.h);
    der *= z / out;
    z = out;
}

cplx slit_fwd(cplx z, const SlitStep& st) {
    cplx der = 1;
    slit_advance(z, der, st);
    return z;
}

// slit step on the boundary tracks: real-projective arithmetic with a single
// unsigned infinity; slot disambiguates the two sides of a fresh weld tip
double slit_fwd_real(double x, const SlitStep& st, int slot) {
    if (std::isinf(x)) {
        if (!std::isfinite(st.q)) return kInf;
        x = -st.q;
    } else if (std::isfinite(st.q)) {
        x = x / (1.0 - x / st.q);  // pole at q lands on infinity as intended
        if (std::isinf(x)) return kInf;
    }
    if (x == 0.0) return slot == 0 ? -st.h : st.h;
    return std::copysign(std::hypot(x, st.h), x);
}

// is x on the boundary copy lying between the weld endpoints 0 and p?
bool between_endpoints(double x, double p) {
    if (std::isinf(p)) return x > 0;
    return p > 0 ? (x > 0 && x < p) : (x < 0 && x > p);
}

// closing weld and normalization applied to a boundary-track coordinate,
// returning the unit-circle prevertex position
cplx close_real(double x, const ZipperInterior& zp) {
    double m;
    if (std::isinf(x)) m = std::isfinite(zp.p) ? -zp.p : kInf;
    else if (!std::isfinite(zp.p)) m = x;
    else if (x == zp.p) m = kInf;
    else m = x / (1.0 - x / zp.p);
    double y;
    if (zp.inside_halfdisk) y = std::isinf(m) ? kInf : m * m;
    else if (m == 0.0) y = kInf;
    else if (std::isinf(m)) y = 0.0;
    else y = 1.0 / (m * m);
    cplx u = std::isinf(y) ? cplx(1, 0) : (y - zp.y0) / (y - std::conj(zp.y0));
    return u * std::polar(1.0, -zp.beta);
}

// shared interior evaluation: disk to domain, optionally with the derivative
cplx eval_chain(const ZipperInterior& zp, cplx zeta, cplx* deriv) {
    const double sgn = std::isinf(zp.p) || zp.p > 0 ? 1.0 : -1.0;
    cplx der = std::polar(1.0, zp.beta);
    cplx u = zeta * std::polar(1.0, zp.beta);
    cplx omu = 1.0 - u;
    cplx y = (zp.y0 - std::conj(zp.y0) * u) / omu;
    der *= (zp.y0 - std::conj(zp.y0)) / (omu * omu);
    cplx s = std::sqrt(y);
    cplx w;
    if (zp.inside_halfdisk) {
        w = sgn * s;
        der *= sgn * 0.5 / s;
    } else {
        w = -sgn / s;
        der *= sgn * 0.5 / (s * s * s);
    }
    if (std::isfinite(zp.p)) {
        cplx d2 = 1.0 + w / zp.p;
        w /= d2;
        der /= d2 * d2;
    }
    for (std::size_t k = zp.steps.size(); k-- > 0;) {
        const SlitStep& st = zp.steps[k];
        cplx g = hsqrt(w * w - st.h * st.h);
        der *= w / g;
        w = g;
        if (std::isfinite(st.q)) {
            cplx d3 = 1.0 + w / st.q;
            w /= d3;
            der /= d3 * d3;
        }
    }
    cplx m = std::polar(1.0, zp.alpha) * w * w;
    cplx d4 = 1.0 - m;
    der *= std::polar(1.0, zp.alpha) * 2.0 * w * (zp.a1 - zp.a0) / (d4 * d4);
    if (deriv) *deriv = der;
    return (zp.a1 - m * zp.a0) / d4;
}

} // namespace

cplx ZipperInterior::from_disk(cplx zeta) const { return eval_chain(*this, zeta, nullptr); }

cplx ZipperInterior::derivative(cplx zeta) const {
    cplx d;
    eval_chain(*this, zeta, &d);
    return d;
}

cplx ZipperInterior::to_disk(cplx w) const {
    cplx xi = hsqrt(std::polar(1.0, -alpha) * (w - a1) / (w - a0));
    for (const SlitStep& st : steps) xi = slit_fwd(xi, st);
    if (std::isfinite(p)) xi /= 1.0 - xi / p;
    cplx y = inside_halfdisk ? xi * xi : 1.0 / (xi * xi);
    cplx u = (y - y0) / (y - std::conj(y0));
    return u * std::polar(1.0, -beta);
}

cplx ZipperInterior::boundary_point(double theta) const {
    cplx uu = std::polar(1.0, theta + beta);
    cplx omu = 1.0 - uu;
    double xi = std::abs(omu) < 1e-300
                    ? kInf
                    : ((y0 - std::conj(y0) * uu) / omu).real();
    // closing inverse: quadrant square roots split into a real track (still on
    // the welded part) and a complex track (on the closing geodesic). The
    // interior-side boundary maps to the ray of sign(p) when the interior is
    // the half-disk, and to the opposite ray otherwise.
    bool cm = false;
    double X = 0;
    cplx W;
    double sgn = std::isinf(p) || p > 0 ? 1.0 : -1.0;
    if (inside_halfdisk) {
        if (std::isinf(xi)) X = kInf;
        else if (xi >= 0) X = sgn * std::sqrt(xi);
        else { W = cplx(0, std::sqrt(-xi)); cm = true; }
    } else {
        if (std::isinf(xi)) X = 0;
        else if (xi == 0) X = kInf;
        else if (xi > 0) X = -sgn / std::sqrt(xi);
        else { W = cplx(0, 1.0 / std::sqrt(-xi)); cm = true; }
    }
    if (std::isfinite(p)) {
        if (cm) W /= 1.0 + W / p;
        else if (std::isinf(X)) X = p;
        else X /= 1.0 + X / p;
    }
    for (std::size_t k = steps.size(); k-- > 0;) {
        const SlitStep& st = steps[k];
        if (!cm) {
            if (!std::isinf(X)) {
                double ax = std::abs(X);
                if (ax >= st.h) {
                    X = std::copysign(std::sqrt((ax - st.h) * (ax + st.h)), X);
                } else {
                    // the point sits on this weld: switch to the complex track
                    W = cplx(0, std::sqrt((st.h - ax) * (st.h + ax)));
                    cm = true;
                }
            }
        } else {
            W = hsqrt(W * W - st.h * st.h);
        }
        if (std::isfinite(st.q)) {
            if (cm) W /= 1.0 + W / st.q;
            else if (std::isinf(X)) X = st.q;
            else X /= 1.0 + X / st.q;
        }
    }
    if (!cm && std::isinf(X)) return a0;
    cplx m = std::polar(1.0, alpha) * (cm ? W * W : cplx(X * X, 0));
    return (a1 - m * a0) / (1.0 - m);
}

ZipperInterior build_zipper(const std::vector<cplx>& nodes) {
    const std::size_t n = nodes.size();
    if (n < 3) throw std::invalid_argument("zipper needs at least 3 nodes");
    double scale = 0;
    for (std::size_t j = 1; j < n; ++j)
        scale = std::max(scale, std::abs(nodes[j] - nodes[0]));
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(nodes[(j + 1) % n] - nodes[j]) <= 1e-12 * scale)
            throw std::invalid_argument("numerically coincident zipper nodes");

    ZipperInterior zp;
    zp.a0 = nodes[0];
    zp.a1 = nodes[1];
    cplx ref = (nodes[n - 1] - zp.a1) / (nodes[n - 1] - zp.a0);
    zp.alpha = std::arg(-ref);
    auto first_map = [&](cplx z) {
        return hsqrt(std::polar(1.0, -zp.alpha) * (z - zp.a1) / (z - zp.a0));
    };
    std::vector<cplx> img(n);
    for (std::size_t j = 2; j < n; ++j) img[j] = first_map(nodes[j]);
    cplx anchor = first_map(0);
    // derivative of the first map at the anchor 0
    cplx der = std::polar(1.0, -zp.alpha) * (zp.a1 - zp.a0) / (zp.a0 * zp.a0) /
               (2.0 * anchor);

    // two boundary tracks per node: the sides of the weld
    std::vector<std::array<double, 2>> sh(n, {0.0, 0.0});
    sh[0] = {kInf, kInf};
    zp.steps.reserve(n - 2);
    for (std::size_t k = 2; k < n; ++k) {
        cplx a = img[k];
        if (!(a.imag() > 0))
            throw std::runtime_error(
                "zipper weld left the half-plane; curve must be simple and "
                "positively oriented");
        SlitStep st;
        double a2 = std::norm(a);
        st.q = std::abs(a.real()) <= 1e-12 * std::abs(a) ? kInf : a2 / a.real();
        st.h = a2 / a.imag();
        for (std::size_t j = k + 1; j < n; ++j) img[j] = slit_fwd(img[j], st);
        slit_advance(anchor, der, st);
        for (std::size_t j = 0; j < k; ++j)
            for (int s2 = 0; s2 < 2; ++s2)
                sh[j][s2] = slit_fwd_real(sh[j][s2], st, s2);
        sh[k] = {0.0, 0.0};
        zp.steps.push_back(st);
    }

    zp.p = sh[0][0];
    zp.inside_halfdisk = std::isinf(zp.p)
                             ? anchor.real() > 0
                             : std::abs(anchor - zp.p / 2) < std::abs(zp.p) / 2;
    cplx m = anchor, dm = 1;
    if (std::isfinite(zp.p)) {
        cplx den = 1.0 - anchor / zp.p;
        m = anchor / den;
        dm = 1.0 / (den * den);
    }
    cplx y, dy;
    if (zp.inside_halfdisk) {
        y = m * m;
        dy = 2.0 * m * dm;
    } else {
        y = 1.0 / (m * m);
        dy = -2.0 * dm / (m * m * m);
    }
    zp.y0 = y;
    // du/dy at the anchor is 1/(y0 - conj(y0))
    cplx total = der * dy / (zp.y0 - std::conj(zp.y0));
    zp.beta = std::arg(total);

    zp.prevertex.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x;
        if (j == 0) {
            x = zp.p;
        } else if (j == n - 1) {
            x = 0.0;
        } else {
            bool s0 = between_endpoints(sh[j][0], zp.p) == zp.inside_halfdisk;
            bool s1 = between_endpoints(sh[j][1], zp.p) == zp.inside_halfdisk;
            if (s0 == s1) throw std::runtime_error("prevertex tracking degenerated");
            x = s0 ? sh[j][0] : sh[j][1];
        }
        zp.prevertex[j] = std::arg(close_real(x, zp));
    }
    zp.prevertex[0] = posmod(zp.prevertex[0], kTwoPi);
    for (std::size_t j = 1; j < n; ++j) {
        double inc = posmod(zp.prevertex[j] - zp.prevertex[j - 1], kTwoPi);
        if (inc <= 0) throw std::runtime_error("prevertices collapsed");
        zp.prevertex[j] = zp.prevertex[j - 1] + inc;
    }
    if (!(zp.prevertex[n - 1] - zp.prevertex[0] < kTwoPi))
        throw std::runtime_error("boundary correspondence is not monotone");
    return zp;
}

// --- ConformalMap ------------------------------------------------------------

cplx ConformalMap::boundary_interp(double t) const {
    const auto& bt = boundary_table;
    const std::size_t n = bt.size();
    double base = bt[0].t;
    double tq = base + posmod(t - base, kTwoPi);
    std::size_t j =
        std::size_t(std::upper_bound(bt.begin(), bt.end(), tq,
                                     [](double a, const BoundaryEntry& e) {
                                         return a < e.t;
                                     }) -
                    bt.begin()) -
        1;
    double t0 = bt[j].t;
    double t1 = j + 1 < n ? bt[j + 1].t : bt[0].t + kTwoPi;
    cplx w0 = bt[j].w;
    cplx w1 = j + 1 < n ? bt[j + 1].w : bt[0].w;
    return w0 + (tq - t0) / (t1 - t0) * (w1 - w0);
}

cplx ConformalMap::map(cplx z) const {
    double r = std::abs(z);
    if (kind == Kind::interior) {
        if (r > 1 + 1e-9) throw std::domain_error("interior map needs |z| <= 1");
        if (r > 1 - 1e-3) return boundary_interp(std::arg(z));
        return zipper.from_disk(z);
    }
    if (r < 1 - 1e-9) throw std::domain_error("exterior map needs |z| >= 1");
    if (r < 1 + 1e-3) return boundary_interp(std::arg(z));
    return center + 1.0 / zipper.from_disk(1.0 / z);
}

cplx ConformalMap::derivative(cplx z) const {
    if (kind == Kind::interior) {
        if (std::abs(z) > 1 + 1e-9)
            throw std::domain_error("interior map needs |z| <= 1");
        return zipper.derivative(z);
    }
    if (std::abs(z) < 1 - 1e-9)
        throw std::domain_error("exterior map needs |z| >= 1");
    cplx iv = 1.0 / z;
    cplx f = zipper.from_disk(iv);
    cplx fp = zipper.derivative(iv);
    cplx zf = z * f;
    return fp / (zf * zf);
}

cplx ConformalMap::inverse(cplx w) const {
    if (kind == Kind::interior) return zipper.to_disk(w);
    return 1.0 / zipper.to_disk(1.0 / (w - center));
}

cplx ConformalMap::boundary_point(double t) const {
    if (kind == Kind::interior) return zipper.boundary_point(t);
    return center + 1.0 / zipper.boundary_point(-t);
}

nlohmann::ordered_json ConformalMap::to_json() const {
    auto enc = [](double x) -> nlohmann::ordered_json {
        if (std::isfinite(x)) return x;
        return nullptr;  // infinities (identity recenterings) encode as null
    };
    nlohmann::ordered_json j;
    j["kind"] = kind == Kind::interior ? "interior" : "exterior";
    j["center"] = {center.real(), center.imag()};
    j["capacity"] = capacity;
    j["first_arc"] = {zipper.a0.real(), zipper.a0.imag(), zipper.a1.real(),
                      zipper.a1.imag()};
    j["alpha"] = zipper.alpha;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const SlitStep& s : zipper.steps)
        steps.push_back(nlohmann::ordered_json::array({enc(s.q), s.h}));
    j["steps"] = steps;
    j["p"] = enc(zipper.p);
    j["inside_halfdisk"] = zipper.inside_halfdisk;
    j["y0"] = {zipper.y0.real(), zipper.y0.imag()};
    j["beta"] = zipper.beta;
    j["prevertex"] = zipper.prevertex;
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const BoundaryEntry& e : boundary_table)
        table.push_back(nlohmann::ordered_json::array({e.t, e.w.real(), e.w.imag()}));
    j["boundary_table"] = table;
    return j;
}

ConformalMap ConformalMap::from_json(const nlohmann::ordered_json& j) {
    auto dec = [](const nlohmann::ordered_json& v) {
        return v.is_null() ? kInf : v.get<double>();
    };
    ConformalMap m;
    m.kind = j.at("kind") == "interior" ? Kind::interior : Kind::exterior;
    m.center = cplx(j.at("center")[0], j.at("center")[1]);
    m.capacity = j.at("capacity");
    m.zipper.a0 = cplx(j.at("first_arc")[0], j.at("first_arc")[1]);
    m.zipper.a1 = cplx(j.at("first_arc")[2], j.at("first_arc")[3]);
    m.zipper.alpha = j.at("alpha");
    for (const auto& s : j.at("steps"))
        m.zipper.steps.push_back({dec(s[0]), s[1].get<double>()});
    m.zipper.p = dec(j.at("p"));
    m.zipper.inside_halfdisk = j.at("inside_halfdisk");
    m.zipper.y0 = cplx(j.at("y0")[0], j.at("y0")[1]);
    m.zipper.beta = j.at("beta");
    m.zipper.prevertex = j.at("prevertex").get<std::vector<double>>();
    for (const auto& e : j.at("boundary_table"))
        m.boundary_table.push_back({e[0].get<double>(), cplx(e[1], e[2])});
    return m;
}

// --- constructors ------------------------------------------------------------

namespace {

// midpoint refinement of a closed node loop until `resolution` is reached;
// positions of the original nodes are tracked through the doubling
void refine_loop(std::vector<cplx>& nodes, std::vector<std::size_t>& orig,
                 int resolution) {
    while (static_cast<int>(nodes.size()) < resolution) {
        std::vector<cplx> fine;
        fine.reserve(nodes.size() * 2);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            fine.push_back(nodes[j]);
            fine.push_back((nodes[j] + nodes[(j + 1) % nodes.size()]) / 2.0);
        }
        for (std::size_t& k : orig) k *= 2;
        nodes = std::move(fine);
    }
}

// The exact map of a centrally symmetric curve carries antipodal nodes to
// antipodal prevertices. The welded construction drifts from that by its
// discretization error -- a few 1e-2 for pinched shapes whose sheltered arcs
// crowd near the double-precision floor, where refinement cannot help -- so
// the table is projected onto the exactly symmetric subspace: average each
// antipodal pair, then restore the strict increase that rounding alone can
// break inside crowded clusters. Keeping the table on the symmetric subspace
// keeps the boundary band and the boundary lift consistent with each other.
// Drift past 5e-2 is a branch error or an off-by-one pairing, not
// discretization, and is rejected.
void symmetrize_prevertices(std::vector<BoundaryEntry>& bt) {
    const std::size_t n = bt.size();
    if (n < 2 || n % 2 != 0) return;
    const std::size_t h = n / 2;
    for (std::size_t j = 0; j < h; ++j)
        if (std::abs(bt[j + h].t - bt[j].t - kPi) > 5e-2)
            throw std::runtime_error(
                "boundary correspondence lost central symmetry");
    for (std::size_t j = 0; j < h; ++j) {
        double m = (bt[j].t + (bt[j + h].t - kPi)) / 2;
        bt[j].t = m;
        bt[j + h].t = m + kPi;
    }
    for (std::size_t j = 1; j < n; ++j)
        if (!(bt[j].t > bt[j - 1].t))
            bt[j].t = std::nextafter(bt[j - 1].t, kInf);
}

} // namespace

ConformalMap interior_map(const CircleEmbedding& curve, int resolution) {
    if (winding_number(curve, 0) != 1)
        throw std::invalid_argument(
            "interior map needs 0 strictly inside a positively oriented curve");
    std::vector<cplx> nodes = curve.value;
    std::vector<std::size_t> orig(nodes.size());
    for (std::size_t j = 0; j < orig.size(); ++j) orig[j] = j;
    refine_loop(nodes, orig, resolution);
    ConformalMap m;
    m.kind = ConformalMap::Kind::interior;
    m.zipper = build_zipper(nodes);
    m.boundary_table.resize(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j)
        m.boundary_table[j] = {m.zipper.prevertex[orig[j]], curve.value[j]};
    if (curve.symmetric) symmetrize_prevertices(m.boundary_table);
    return m;
}

ConformalMap exterior_map(const CircleEmbedding& curve, int resolution) {
    cplx w0 = 0;
    if (winding_number(curve, 0) == 0) w0 = incenter(curve).center;
    if (winding_number(curve, w0) != 1)
        throw std::invalid_argument(
            "exterior map needs a positively oriented curve");
    const std::size_t n0 = curve.size();
    // invert about w0 and reverse so the inverted loop is positively oriented
    std::vector<cplx> nodes(n0);
    std::vector<std::size_t> pos(n0);
    for (std::size_t j = 0; j < n0; ++j) pos[j] = (n0 - j) % n0;
    for (std::size_t j = 0; j < n0; ++j) nodes[pos[j]] = 1.0 / (curve.value[j] - w0);
    refine_loop(nodes, pos, resolution);
    ConformalMap m;
    m.kind = ConformalMap::Kind::exterior;
    m.center = w0;
    m.zipper = build_zipper(nodes);
    m.capacity = 1.0 / std::abs(m.zipper.derivative(0));
    std::vector<double> tau(n0);
    for (std::size_t j = 0; j < n0; ++j) tau[j] = -m.zipper.prevertex[pos[j]];
    tau[0] = posmod(tau[0], kTwoPi);
    for (std::size_t j = 1; j < n0; ++j) {
        double inc = posmod(tau[j] - tau[j - 1], kTwoPi);
        if (inc <= 0) throw std::runtime_error("prevertices collapsed");
        tau[j] = tau[j - 1] + inc;
    }
    if (!(tau[n0 - 1] - tau[0] < kTwoPi))
        throw std::runtime_error("boundary correspondence is not monotone");
    m.boundary_table.resize(n0);
    for (std::size_t j = 0; j < n0; ++j)
        m.boundary_table[j] = {tau[j], curve.value[j]};
    if (curve.symmetric) symmetrize_prevertices(m.boundary_table);
    return m;
}

CircleHomeoLift boundary_homeo(const ConformalMap& map, const CircleEmbedding& curve) {
    const std::size_t n = map.boundary_table.size();
    if (n != curve.size())
        throw std::invalid_argument("map was not built from this curve");
    const double tol = 1e-4 * curve.diam();
    std::vector<double> tr(n), ss(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx w = map.boundary_table[j].w;
        if (curve.dist_to(w) > tol)
            throw std::runtime_error("boundary correspondence failure");
        tr[j] = posmod(map.boundary_table[j].t, kTwoPi);
        ss[j] = curve.project_param(w);
    }
    // rotate so the node with the smallest prevertex angle leads
    std::size_t k0 = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (tr[j] < tr[k0]) k0 = j;
    std::vector<double> t2(n), chi2(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (k0 + i) % n;
        t2[i] = tr[j];
        chi2[i] = ss[j];
    }
    chi2[0] = posmod(chi2[0], kTwoPi);
    for (std::size_t i = 1; i < n; ++i)
        chi2[i] = chi2[i - 1] + posmod(chi2[i] - chi2[i - 1], kTwoPi);
    if (curve.symmetric && n % 2 == 0) {
        // the welded arcs are laid down sequentially, so antipodal prevertices
        // drift apart by the discretization error; anything past 1e-2 means a
        // branch error or an off-by-one pairing, not discretization
        const std::size_t h = n / 2;
        for (std::size_t k = 0; k < h; ++k)
            if (std::abs(t2[k + h] - t2[k] - kPi) > 1e-2 ||
                std::abs(chi2[k + h] - chi2[k] - kPi) > 1e-2)
                throw std::runtime_error(
                    "boundary correspondence lost central symmetry");
        // project onto the symmetric subspace: average each antipodal pair so
        // chi(t + pi) = chi(t) + pi holds exactly downstream; pairs straddling
        // the wrap at 0 or 2pi are clamped back into range (a nudge below the
        // discretization error already present)
        for (std::size_t k = 0; k < h; ++k) {
            double tm = (t2[k] + (t2[k + h] - kPi)) / 2;
            double cm = (chi2[k] + (chi2[k + h] - kPi)) / 2;
            tm = std::clamp(tm, 0.0, kPi - 1e-12);
            t2[k] = tm;
            t2[k + h] = tm + kPi;
            chi2[k] = cm;
            chi2[k + h] = cm + kPi;
        }
        if (chi2[0] < 0)
            for (double& c : chi2) c += kTwoPi;
        else if (chi2[0] >= kTwoPi)
            for (double& c : chi2) c -= kTwoPi;
    }
    return lift_from_nodes(std::move(t2), std::move(chi2));
}

PlanarSet boundary_arc_set(const ConformalMap& map, Arc gamma, int samples) {
    PlanarSet out;
    out.reserve(samples + 1);
    for (int k = 0; k <= samples; ++k)
        out.push_back(map.boundary_interp(gamma.t_lo + gamma.length() * k / samples));
    return out;
}

MarkedPolyline boundary_marked_arc(const ConformalMap& map, Arc gamma) {
    const auto& bt = map.boundary_table;
    double base = bt[0].t;
    double lo = base + posmod(gamma.t_lo - base, kTwoPi);
    double len = gamma.length();
    std::vector<double> ts;
    ts.reserve(bt.size() + 2);
    for (const BoundaryEntry& e : bt) ts.push_back(e.t);
    ts.push_back(lo);
    double hi = lo + len;
    ts.push_back(hi < base + kTwoPi ? hi : hi - kTwoPi);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             ts.end());
    MarkedPolyline mp;
    const std::size_t n = ts.size();
    for (double t : ts) mp.pts.push_back(map.boundary_interp(t));
    mp.marked.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double t1 = k + 1 < n ? ts[k + 1] : ts[0] + kTwoPi;
        double mid = (ts[k] + t1) / 2;
        mp.marked[k] = posmod(mid - lo, kTwoPi) < len;
    }
    return mp;
}

// --- inequality margins -------------------------------------------------------

InteriorDerivativeMargins verify_interior_derivative_bounds(
    const ConformalMap& map, const CircleEmbedding& curve, cplx z) {
    if (map.kind != ConformalMap::Kind::interior)
        throw std::invalid_argument("interior bounds need an interior map");
    double r = std::abs(z);
    if (!(r > 0 && r < 1)) throw std::domain_error("need 0 < |z| < 1");
    InteriorDerivativeMargins out;
    double dphi = std::abs(map.derivative(z));
    double rho = curve.dist_to(map.map(z));
    double mid = (1 - r * r) * dphi;
    out.koebe_lower = IneqMargin{rho, mid, mid - rho};
    out.koebe_upper = IneqMargin{mid, 4 * rho, 4 * rho - mid};
    double ell = kInf, L = 0;
    {
        std::vector<cplx> dom, img;
        curve_samples(curve, 4, dom, img);
        for (cplx wp : img) {
            ell = std::min(ell, std::abs(wp));
            L = std::max(L, std::abs(wp));
        }
    }
    double lo = ell * (1 - r) / std::pow(1 + r, 3);
    double hi = L * (1 + r) / std::pow(1 - r, 3);
    out.koebedist_lower = IneqMargin{lo, dphi, dphi - lo};
    out.koebedist_upper = IneqMargin{dphi, hi, hi - dphi};
    if (r > std::exp(-kTwoPi)) {
        GammaArcs g = gamma_arcs(z);
        if (r > std::exp(-kPi / 4)) {
            double d14 = set_dist(boundary_arc_set(map, g.g1),
                                  boundary_arc_set(map, g.g4));
            double bound = d14 / (60000.0 * std::log(1 / r));
            out.confderest1 = IneqMargin{bound, dphi, dphi - bound};
        }
        double d2 = set_diam(boundary_arc_set(map, g.g2));
        double d3 = set_diam(boundary_arc_set(map, g.g3));
        double bound = 2e6 * std::min(d2, d3) / std::log(1 / r);
        out.confderest2 = IneqMargin{dphi, bound, bound - dphi};
    }
    return out;
}

ExteriorDerivativeMargins verify_exterior_derivative_bounds(
    const ConformalMap& map, const CircleEmbedding& curve, cplx z) {
    if (map.kind != ConformalMap::Kind::exterior)
        throw std::invalid_argument("exterior bounds need an exterior map");
    double R = std::abs(z);
    if (!(R > 1)) throw std::domain_error("need |z| > 1");
    ExteriorDerivativeMargins out;
    double dphi = std::abs(map.derivative(z));
    double diamK = curve.diam();
    double cap = map.capacity;
    out.capdiam_lower = IneqMargin{2 * cap, diamK, diamK - 2 * cap};
    out.capdiam_upper = IneqMargin{diamK, 4 * cap, 4 * cap - diamK};
    double fp = dphi / cap;
    double loewner = 1 - 1 / (R * R);
    out.sigmadist_lower = IneqMargin{loewner, fp, fp - loewner};
    out.sigmadist_upper = IneqMargin{fp, 1 / loewner, 1 / loewner - fp};
    double rho = curve.dist_to(map.map(z));
    double lR = std::log(R);
    if (R < std::exp(kPi / 4))
        out.derdistext1 = IneqMargin{rho / (5 * lR), dphi, dphi - rho / (5 * lR)};
    out.derdistext2 = IneqMargin{dphi, 4 * rho / lR, 4 * rho / lR - dphi};
    if (R >= std::exp(kPi / 4)) {
        out.extderest1 = IneqMargin{diamK / 6, dphi, dphi - diamK / 6};
    } else {
        GammaArcs g = gamma_arcs_exterior(z);
        double d14 = set_dist(boundary_arc_set(map, g.g1),
                              boundary_arc_set(map, g.g4));
        double b = d14 / (600000.0 * lR);
        out.extderest1 = IneqMargin{b, dphi, dphi - b};
    }
    if (R >= std::exp(kTwoPi)) {
        out.extderest2 = IneqMargin{dphi, diamK, diamK - dphi};
    } else {
        GammaArcs g = gamma_arcs_exterior(z);
        double d2 = set_diam(boundary_arc_set(map, g.g2));
        double d3 = set_diam(boundary_arc_set(map, g.g3));
        double b = 5e9 * std::min(d2, d3) / lR;
        out.extderest2 = IneqMargin{dphi, b, b - dphi};
    }
    return out;
}

} // namespace blext
