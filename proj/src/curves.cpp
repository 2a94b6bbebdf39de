#include "blext/curves.hpp"
#include "blext/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blext {

namespace {

double wrap_2pi(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

void validate(const CircleEmbedding& f) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("curve needs at least 3 nodes");
    if (f.value.size() != n) throw std::invalid_argument("node arrays disagree");
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(f.t[k]) || !std::isfinite(f.value[k].real()) ||
            !std::isfinite(f.value[k].imag()))
            throw std::invalid_argument("non-finite node");
        if (f.t[k] < 0 || f.t[k] >= kTwoPi)
            throw std::invalid_argument("node parameter outside [0, 2pi)");
        if (k > 0 && f.t[k] <= f.t[k - 1])
            throw std::invalid_argument("node parameters not strictly increasing");
    }
    const double scale = f.diam();
    if (scale <= 0) throw std::invalid_argument("degenerate curve");
    const double tol = 1e-12 * scale;
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(f.value[(k + 1) % n] - f.value[k]) <= tol)
            throw std::invalid_argument("zero-length segment");
    // simplicity: non-adjacent segments must keep a positive distance
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // adjacent through the wrap
            double d = segment_segment_dist(f.value[i], f.value[(i + 1) % n],
                                            f.value[j], f.value[(j + 1) % n]);
            if (d <= tol) throw std::invalid_argument("curve is not simple");
        }
    }
}

// exact antipodal node pairing (bitwise: negation is exact in IEEE)
bool detect_symmetric(const CircleEmbedding& f) {
    const std::size_t n = f.size();
    if (n % 2 != 0) return false;
    const std::size_t h = n / 2;
    for (std::size_t k = 0; k < h; ++k) {
        if (std::abs(f.t[k + h] - f.t[k] - kTwoPi / 2) > 1e-15) return false;
        if (f.value[k + h] != -f.value[k]) return false;
    }
    return true;
}

// builds the second half of a symmetric curve as the exact negation of the first
CircleEmbedding mirror_closed(std::vector<double> t_half, std::vector<cplx> v_half) {
    CircleEmbedding f;
    const std::size_t h = t_half.size();
    f.t.resize(2 * h);
    f.value.resize(2 * h);
    for (std::size_t k = 0; k < h; ++k) {
        f.t[k] = t_half[k];
        f.value[k] = v_half[k];
        f.t[k + h] = t_half[k] + kTwoPi / 2;
        f.value[k + h] = -v_half[k];
    }
    f.symmetric = true;
    validate(f);
    return f;
}

} // namespace

double segment_segment_dist(cplx a0, cplx a1, cplx b0, cplx b1) {
    auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    cplx da = a1 - a0, db = b1 - b0;
    double d1 = cross(db, a0 - b0), d2 = cross(db, a1 - b0);
    double d3 = cross(da, b0 - a0), d4 = cross(da, b1 - a0);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return 0.0; // proper crossing
    double d = segment_dist(a0, b0, b1);
    d = std::min(d, segment_dist(a1, b0, b1));
    d = std::min(d, segment_dist(b0, a0, a1));
    d = std::min(d, segment_dist(b1, a0, a1));
    return d;
}

double segment_dist(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0) return std::abs(p - a);
    double s = ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(p - (a + s * d));
}

cplx CircleEmbedding::eval(double s) const {
    const std::size_t n = size();
    s = wrap_2pi(s);
    // find segment: t[k] <= s < t[k+1] (last segment wraps)
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t k = (it == t.begin()) ? n - 1 : std::size_t(it - t.begin()) - 1;
    double t0 = t[k], t1 = (k + 1 < n) ? t[k + 1] : t[0] + kTwoPi;
    double ss = s;
    if (it == t.begin()) { t0 = t[n - 1] - kTwoPi; t1 = t[0]; } // s before first node
    double u = (ss - t0) / (t1 - t0);
    return value[k] + u * (value[(k + 1) % n] - value[k]);
}

double CircleEmbedding::diam() const {
    double d = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            d = std::max(d, std::abs(value[i] - value[j]));
    return d;
}

double CircleEmbedding::dist_to(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < size(); ++k)
        d = std::min(d, segment_dist(p, value[k], value[(k + 1) % size()]));
    return d;
}

std::size_t CircleEmbedding::nearest_segment(cplx p) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < size(); ++k) {
        double d = segment_dist(p, value[k], value[(k + 1) % size()]);
        if (d < best) { best = d; arg = k; }
    }
    return arg;
}

double CircleEmbedding::project_param(cplx p) const {
    std::size_t k = nearest_segment(p);
    const std::size_t n = size();
    cplx a = value[k], b = value[(k + 1) % n];
    cplx d = b - a;
    double s = std::norm(d) == 0 ? 0.0
        : std::clamp(((p - a).real() * d.real() + (p - a).imag() * d.imag()) / std::norm(d), 0.0, 1.0);
    double t0 = t[k], t1 = (k + 1 < n) ? t[k + 1] : t[0] + kTwoPi;
    return wrap_2pi(t0 + s * (t1 - t0));
}

CircleEmbedding embedding_from_nodes(std::vector<double> t, std::vector<cplx> value) {
    CircleEmbedding f;
    f.t = std::move(t);
    f.value = std::move(value);
    validate(f);
    f.symmetric = detect_symmetric(f);
    return f;
}

CircleEmbedding circle_embedding(cplx c, double R, int n, double phase) {
    if (R <= 0) throw std::invalid_argument("circle radius must be positive");
    if (n < 3) throw std::invalid_argument("n < 3");
    auto point = [&](double t) { return c + R * std::polar(1.0, t + phase); };
    if (c == cplx(0, 0) && n % 2 == 0) {
        std::vector<double> th(n / 2);
        std::vector<cplx> vh(n / 2);
        for (int k = 0; k < n / 2; ++k) { th[k] = kTwoPi * k / n; vh[k] = point(th[k]); }
        return mirror_closed(th, vh);
    }
    std::vector<double> t(n);
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) { t[k] = kTwoPi * k / n; v[k] = point(t[k]); }
    return embedding_from_nodes(std::move(t), std::move(v));
}

CircleEmbedding ellipse_embedding(double a, double b, int n) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("ellipse semi-axes must be positive");
    if (n < 3) throw std::invalid_argument("n < 3");
    auto point = [&](double t) { return cplx(a * std::cos(t), b * std::sin(t)); };
    if (n % 2 == 0) {
        std::vector<double> th(n / 2);
        std::vector<cplx> vh(n / 2);
        for (int k = 0; k < n / 2; ++k) { th[k] = kTwoPi * k / n; vh[k] = point(th[k]); }
        return mirror_closed(th, vh);
    }
    std::vector<double> t(n);
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) { t[k] = kTwoPi * k / n; v[k] = point(t[k]); }
    return embedding_from_nodes(std::move(t), std::move(v));
}

CircleEmbedding polygon_embedding(const std::vector<cplx>& vertices, int n) {
    const std::size_t m = vertices.size();
    if (m < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    if (n < int(m)) throw std::invalid_argument("n smaller than vertex count");
    std::vector<double> arclen(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        arclen[k + 1] = arclen[k] + std::abs(vertices[(k + 1) % m] - vertices[k]);
    const double per = arclen[m];
    if (per <= 0) throw std::invalid_argument("degenerate polygon");
    auto point = [&](double t) {
        double s = wrap_2pi(t) / kTwoPi * per;
        auto it = std::upper_bound(arclen.begin(), arclen.end(), s);
        std::size_t k = std::min<std::size_t>(m - 1, std::size_t(it - arclen.begin()) - 1);
        double u = (s - arclen[k]) / (arclen[k + 1] - arclen[k]);
        return vertices[k] + u * (vertices[(k + 1) % m] - vertices[k]);
    };
    bool sym = (n % 2 == 0);
    if (sym) {
        // centrally symmetric vertex set, traversed half a perimeter apart
        for (std::size_t k = 0; k < m && sym; ++k) {
            bool found = false;
            for (std::size_t j = 0; j < m && !found; ++j)
                if (std::abs(vertices[j] + vertices[k]) <= 1e-15 * per) found = true;
            sym = found;
        }
    }
    if (sym) {
        std::vector<double> th(n / 2);
        std::vector<cplx> vh(n / 2);
        for (int k = 0; k < n / 2; ++k) { th[k] = kTwoPi * k / n; vh[k] = point(th[k]); }
        // mirroring requires f(t + pi) = -f(t), true when -vertices is the same
        // cycle half a perimeter out of phase; verify on one sample
        if (std::abs(point(kTwoPi / 2) + point(0.0)) <= 1e-12 * per)
            return mirror_closed(th, vh);
    }
    std::vector<double> t(n);
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) { t[k] = kTwoPi * k / n; v[k] = point(t[k]); }
    return embedding_from_nodes(std::move(t), std::move(v));
}

CircleEmbedding square_embedding(double s, int n) {
    if (s <= 0) throw std::invalid_argument("square side must be positive");
    double h = s / 2;
    return polygon_embedding({cplx(h, h), cplx(-h, h), cplx(-h, -h), cplx(h, -h)}, n);
}

CircleEmbedding trig_embedding(double ar, int kr, double at, int kt, int n) {
    if (std::abs(ar) >= 1) throw std::invalid_argument("radial amplitude must stay below 1");
    auto point = [&](double t) {
        return (1.0 + ar * std::sin(kr * t)) * std::polar(1.0, t + at * std::sin(kt * t));
    };
    if (kr % 2 == 0 && kt % 2 == 0 && n % 2 == 0) {
        std::vector<double> th(n / 2);
        std::vector<cplx> vh(n / 2);
        for (int k = 0; k < n / 2; ++k) { th[k] = kTwoPi * k / n; vh[k] = point(th[k]); }
        return mirror_closed(th, vh);
    }
    std::vector<double> t(n);
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) { t[k] = kTwoPi * k / n; v[k] = point(t[k]); }
    return embedding_from_nodes(std::move(t), std::move(v));
}

CircleEmbedding bowtie_embedding(double eps, int n) {
    if (eps <= 0 || eps >= 0.5)
        throw std::invalid_argument("bowtie neck width must lie in (0, 0.5)");
    const double alpha = std::asin(eps / 2);  // junction parameters at +-alpha
    const double rR = 0.25, cR = std::sqrt(rR * rR - eps * eps / 4);
    const double cL = std::sqrt(1.0 - eps * eps / 4);
    const double phiA = std::atan2(eps / (2 * rR), -cR / rR); // in (pi/2, pi)
    auto point = [&](double t) -> cplx {
        t = wrap_2pi(t);
        if (t > kTwoPi / 2) t -= kTwoPi; // to (-pi, pi]
        if (std::abs(t) <= alpha) {
            // small lobe, traversed from B=(0,-eps/2) up to A=(0,eps/2) at
            // constant (fast) speed
            double phi = phiA * (t / alpha);
            return cplx(cR + rR * std::cos(phi), rR * std::sin(phi));
        }
        // big lobe: unit-speed arc of the unit circle centered at (-cL, 0)
        return cplx(-cL + std::cos(t), std::sin(t));
    };
    // uniform grid plus the two junction parameters, so the neck width is
    // exactly eps on the polyline
    std::vector<double> t;
    t.reserve(n + 2);
    for (int k = 0; k < n; ++k) t.push_back(kTwoPi * k / n);
    t.push_back(alpha);
    t.push_back(kTwoPi - alpha);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end(),
                        [](double a, double b) { return b - a < 1e-9; }),
            t.end());
    std::vector<cplx> v(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) v[k] = point(t[k]);
    return embedding_from_nodes(std::move(t), std::move(v));
}

int winding_number(const CircleEmbedding& f, cplx p) {
    if (f.dist_to(p) <= 1e-12 * f.diam())
        throw std::invalid_argument("winding number undefined on the curve");
    double total = 0;
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k)
        total += std::arg((f.value[(k + 1) % n] - p) / (f.value[k] - p));
    return int(std::lround(total / kTwoPi));
}

BiLipschitzReport bilipschitz_constants(const std::vector<cplx>& domain,
                                        const std::vector<cplx>& image,
                                        std::uint64_t budget, std::uint64_t seed) {
    if (domain.size() != image.size() || domain.size() < 2)
        throw std::invalid_argument("need matched samples");
    const std::size_t n = domain.size();
    BiLipschitzReport rep;
    rep.upper_L = 0;
    rep.lower_l = std::numeric_limits<double>::infinity();
    rep.seed = seed;
    auto consider = [&](std::size_t i, std::size_t j) {
        double dd = std::abs(domain[i] - domain[j]);
        if (dd == 0) return;
        double r = std::abs(image[i] - image[j]) / dd;
        if (r > rep.upper_L) { rep.upper_L = r; rep.upper_i = i; rep.upper_j = j; }
        if (r < rep.lower_l) { rep.lower_l = r; rep.lower_i = i; rep.lower_j = j; }
        ++rep.pairs;
    };
    const std::uint64_t all = std::uint64_t(n) * (n - 1) / 2;
    if (all <= budget) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
    } else {
        rep.subsampled = true;
        SplitMix64 rng(seed);
        // adjacent samples first so local stretching is always represented
        for (std::size_t i = 0; i + 1 < n; ++i) consider(i, i + 1);
        while (rep.pairs < budget) {
            std::size_t i = std::size_t(rng.next() % n), j = std::size_t(rng.next() % n);
            if (i == j) continue;
            consider(i, j);
        }
    }
    return rep;
}

void curve_samples(const CircleEmbedding& f, int per_segment,
                   std::vector<cplx>& domain, std::vector<cplx>& image) {
    if (per_segment < 1) throw std::invalid_argument("per_segment < 1");
    const std::size_t n = f.size();
    domain.clear();
    image.clear();
    domain.reserve(n * per_segment);
    image.reserve(n * per_segment);
    for (std::size_t k = 0; k < n; ++k) {
        double t0 = f.t[k], t1 = (k + 1 < n) ? f.t[k + 1] : f.t[0] + kTwoPi;
        for (int j = 0; j < per_segment; ++j) {
            double s = t0 + (t1 - t0) * j / per_segment;
            domain.push_back(std::polar(1.0, s));
            image.push_back(j == 0 ? f.value[k]
                                   : f.value[k] + (double(j) / per_segment) *
                                         (f.value[(k + 1) % n] - f.value[k]));
        }
    }
}

BiLipschitzReport curve_bilipschitz(const CircleEmbedding& f, int per_segment,
                                    std::uint64_t budget, std::uint64_t seed) {
    std::vector<cplx> dom, img;
    curve_samples(f, per_segment, dom, img);
    return bilipschitz_constants(dom, img, budget, seed);
}

IncenterReport incenter(const CircleEmbedding& f, int grid, int levels) {
    if (grid < 8) throw std::invalid_argument("grid too coarse");
    double xlo = f.value[0].real(), xhi = xlo, ylo = f.value[0].imag(), yhi = ylo;
    for (cplx v : f.value) {
        xlo = std::min(xlo, v.real()); xhi = std::max(xhi, v.real());
        ylo = std::min(ylo, v.imag()); yhi = std::max(yhi, v.imag());
    }
    const double scale = f.diam();
    cplx best(0, 0);
    double best_d = -1;
    auto lex_less = [](cplx p, cplx q) {
        return p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag());
    };
    auto consider = [&](cplx p) {
        double d = f.dist_to(p);
        if (d <= 0) return;
        bool better = d > best_d || (d == best_d && lex_less(p, best));
        if (!better) return;
        if (winding_number(f, p) == 0) return; // exterior point
        best_d = d;
        best = p;
    };
    // base grid over the bounding box
    double cw = (xhi - xlo) / (grid - 1), ch = (yhi - ylo) / (grid - 1);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            consider(cplx(xlo + cw * i, ylo + ch * j));
    if (best_d < 0) throw std::runtime_error("no interior grid point found");
    // refinement: x4 resolution around the incumbent each level
    double hx = cw, hy = ch;
    for (int lvl = 0; lvl < levels; ++lvl) {
        cplx c = best;
        for (int i = -8; i <= 8; ++i)
            for (int j = -8; j <= 8; ++j)
                consider(c + cplx(i * hx / 4, j * hy / 4));
        hx /= 4; hy /= 4;
    }
    // local coordinate descent down to float resolution
    double step = std::max(hx, hy);
    while (step > 1e-12 * scale) {
        bool moved = false;
        for (cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
            cplx p = best + step * dir;
            double d = f.dist_to(p);
            if (d > best_d && winding_number(f, p) != 0) {
                best = p; best_d = d; moved = true;
            }
        }
        if (!moved) step /= 2;
    }
    IncenterReport rep;
    rep.center = best;
    rep.radius = best_d;
    rep.grid = grid;
    rep.levels = levels;
    return rep;
}

double set_dist(const PlanarSet& a, const PlanarSet& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty set");
    double d = std::numeric_limits<double>::infinity();
    for (cplx p : a)
        for (cplx q : b) d = std::min(d, std::abs(p - q));
    return d;
}

double set_diam(const PlanarSet& a) {
    if (a.empty()) throw std::invalid_argument("empty set");
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            d = std::max(d, std::abs(a[i] - a[j]));
    return d;
}

double point_set_dist(cplx p, const PlanarSet& a) {
    if (a.empty()) throw std::invalid_argument("empty set");
    double d = std::numeric_limits<double>::infinity();
    for (cplx q : a) d = std::min(d, std::abs(p - q));
    return d;
}

} // namespace blext
