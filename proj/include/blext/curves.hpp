#pragma once
// Piecewise-linear embeddings of the unit circle into the plane, the example
// curve families, and the planar measurements the rest of the pipeline needs:
// winding numbers, empirical bi-Lipschitz constants, inscribed-disk centers,
// and set distance/diameter helpers.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace blext {

using cplx = std::complex<double>;
using PlanarSet = std::vector<cplx>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Closed curve f: T -> C stored as nodes (t_k, f(e^{i t_k})) with t_k strictly
// increasing in [0, 2*pi); values are interpolated linearly in t between nodes
// (wrapping the last node to the first). The polyline IS the curve: every
// downstream consumer works with this one representation.
struct CircleEmbedding {
    std::vector<double> t;
    std::vector<cplx> value;
    // true when nodes come in exact antipodal pairs: node at t+pi holds the
    // bitwise negation of the node at t
    bool symmetric = false;

    std::size_t size() const { return t.size(); }
    cplx eval(double s) const;   // periodic piecewise-linear evaluation
    double diam() const;         // diameter of the node set
    double dist_to(cplx p) const; // distance from p to the polyline
    // index of the segment (k -> k+1 mod n) nearest to p
    std::size_t nearest_segment(cplx p) const;
    // parameter s with eval(s) = nearest polyline point to p
    double project_param(cplx p) const;
};

// --- construction -----------------------------------------------------------

// Validates node count, parameter monotonicity and simplicity (no proper
// self-intersections, tolerance 1e-12 relative to the curve scale).
CircleEmbedding embedding_from_nodes(std::vector<double> t, std::vector<cplx> value);

// t |-> c + R e^{i(t + phase)}
CircleEmbedding circle_embedding(cplx c, double R, int n, double phase = 0.0);
// t |-> a cos t + i b sin t
CircleEmbedding ellipse_embedding(double a, double b, int n);
// arclength-proportional traversal of a closed polygon (CCW vertex list)
CircleEmbedding polygon_embedding(const std::vector<cplx>& vertices, int n);
// axis-aligned square of side s centered at 0
CircleEmbedding square_embedding(double s, int n);
// t |-> (1 + ar sin(kr t)) e^{i(t + at sin(kt t))}; centrally symmetric when
// kr and kt are both even
CircleEmbedding trig_embedding(double ar, int kr, double at, int kt, int n);
// Two circular lobes (radii 1 and 1/4) joined at a neck of width eps across
// the origin. The short parameter arc |t| <= asin(eps/2) traverses the small
// lobe at speed ~1/eps, the rest traverses the big lobe at speed ~1, so the
// embedding has empirical constants of order (1/eps, 1).
CircleEmbedding bowtie_embedding(double eps, int n);

// --- measurements -----------------------------------------------------------

// winding number of the curve around p (sum of signed angle increments);
// throws if p lies on the polyline
int winding_number(const CircleEmbedding& f, cplx p);

struct BiLipschitzReport {
    double upper_L = 0.0;
    double lower_l = 0.0;
    // witness sample indices (into the sample list handed in)
    std::size_t upper_i = 0, upper_j = 0;
    std::size_t lower_i = 0, lower_j = 0;
    std::uint64_t pairs = 0;
    bool subsampled = false;
    std::uint64_t seed = 0;
};

// Empirical constants of a map given matched samples (domain point, image
// point). All pairs up to `budget`; uniform random pairs with the recorded
// seed beyond that.
BiLipschitzReport bilipschitz_constants(const std::vector<cplx>& domain,
                                        const std::vector<cplx>& image,
                                        std::uint64_t budget = 2'000'000,
                                        std::uint64_t seed = 1);

// Samples (e^{i s}, f(e^{i s})) densely along the polyline: nodes plus
// `per_segment - 1` interior points per segment. per_segment = 1 gives nodes
// only. Dense sampling matters: node-only pairs of an inscribed polygon can
// overestimate the lower constant past the polygon's own inradius.
void curve_samples(const CircleEmbedding& f, int per_segment,
                   std::vector<cplx>& domain, std::vector<cplx>& image);

BiLipschitzReport curve_bilipschitz(const CircleEmbedding& f, int per_segment = 4,
                                    std::uint64_t budget = 2'000'000,
                                    std::uint64_t seed = 1);

struct IncenterReport {
    cplx center;
    double radius = 0.0;  // distance from center to the polyline
    int grid = 0;         // base grid resolution
    int levels = 0;       // refinement levels applied
};

// Center of a largest inscribed disk: dense grid over the bounding box,
// refined around the best cell, then local coordinate descent. Deterministic;
// ties resolved toward lexicographically smallest (Re, Im).
IncenterReport incenter(const CircleEmbedding& f, int grid = 128, int levels = 3);

double set_dist(const PlanarSet& a, const PlanarSet& b);
double set_diam(const PlanarSet& a);
double point_set_dist(cplx p, const PlanarSet& a);

// distance from p to segment [a, b]
double segment_dist(cplx p, cplx a, cplx b);
// distance between segments [a0,a1] and [b0,b1] (0 when they cross)
double segment_segment_dist(cplx a0, cplx a1, cplx b0, cplx b1);

} // namespace blext
