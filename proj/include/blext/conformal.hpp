#pragma once
// Numerical Riemann maps of polyline Jordan curves via the geodesic zipper
// algorithm: interior map D -> Omega with Phi(0) = 0, Phi'(0) > 0, and
// exterior map C \ closed-D -> exterior fixing infinity with positive leading
// coefficient (the logarithmic capacity). Provides forward/derivative/inverse
// evaluators, exact boundary correspondence, serialization, and the
// derivative-bound margin checks used by the verification suite.

#include "blext/ba_ext.hpp"
#include "blext/curves.hpp"
#include "blext/harmonic.hpp"

#include <json.hpp>
#include <limits>
#include <optional>
#include <vector>

namespace blext {

// one welded geodesic arc: the recentering Mobius T(z) = z/(1 - z/q)
// (identity when q is infinite) followed by the slit opener sqrt(z^2 + h^2)
struct SlitStep {
    double q = std::numeric_limits<double>::infinity();
    double h = 0;
};

// Conformal map of the unit disk onto the region bounded by a node polyline
// (with the first and closing edges replaced by circular/geodesic arcs),
// assembled by welding the nodes in order. The anchor 0 must lie inside.
struct ZipperInterior {
    cplx a0, a1;       // first welded arc runs from a0 to a1 (a1 maps to 0)
    double alpha = 0;  // rotation putting that arc onto [0, inf)
    std::vector<SlitStep> steps;             // one per node from index 2 on
    double p = 0;                            // real image of a0 after welding
    bool inside_halfdisk = true;             // anchor side at the closing weld
    // closing-plane image of the anchor; u = (y - y0)/(y - conj(y0)) is the
    // final Mobius onto the disk (formed from same-scale differences, which
    // keeps precision when the welded coordinates grow large)
    cplx y0;
    double beta = 0;   // rotation giving a positive derivative at the anchor
    std::vector<double> prevertex;  // per node, unwrapped, strictly increasing

    cplx from_disk(cplx zeta) const;
    cplx derivative(cplx zeta) const;
    cplx to_disk(cplx w) const;
    // exact welded-curve point for a boundary angle (real-track evaluation)
    cplx boundary_point(double theta) const;
};

// Builds the welded composition; throws when the node sequence is degenerate
// or a weld leaves the half-plane (non-simple or badly ordered input).
ZipperInterior build_zipper(const std::vector<cplx>& nodes);

struct BoundaryEntry {
    // prevertex angle, strictly increasing down the table; for centrally
    // symmetric curves the angles are projected so antipodal nodes sit at
    // exactly antipodal angles (the raw welded angles drift apart by the
    // discretization error, which would desynchronize the boundary band
    // from the boundary lift)
    double t;
    cplx w;  // matching curve node
};

struct ConformalMap {
    enum class Kind { interior, exterior };

    Kind kind = Kind::interior;
    cplx center = 0;      // inversion center (exterior only)
    double capacity = 0;  // leading coefficient at infinity (exterior only)
    std::vector<BoundaryEntry> boundary_table;  // one row per original node
    ZipperInterior zipper;

    // Interior: defined on |z| <= 1. Exterior: defined on |z| >= 1. A band of
    // width 1e-3 around T is delegated to boundary-table interpolation.
    cplx map(cplx z) const;
    cplx derivative(cplx z) const;
    cplx inverse(cplx w) const;
    cplx boundary_point(double t) const;   // exact welded-curve point
    cplx boundary_interp(double t) const;  // table interpolation (on the curve)

    nlohmann::ordered_json to_json() const;
    static ConformalMap from_json(const nlohmann::ordered_json& j);
};

// resolution <= node count means no refinement; otherwise polyline midpoints
// are inserted (exterior: midpoints of the inverted polyline) until the
// working node count reaches it. boundary_table keeps original nodes only.
ConformalMap interior_map(const CircleEmbedding& curve, int resolution = 0);
ConformalMap exterior_map(const CircleEmbedding& curve, int resolution = 0);

// Lift of psi = f^{-1} o phi: for each boundary-table row, the curve
// parameter of the node recovered by projection onto the polyline. Verifies
// central symmetry of the correspondence for symmetric curves (then makes the
// antipodal structure exact so downstream symmetry checks are bitwise).
CircleHomeoLift boundary_homeo(const ConformalMap& map, const CircleEmbedding& curve);

// boundary arc pushed through table interpolation, as a sample cloud
PlanarSet boundary_arc_set(const ConformalMap& map, Arc gamma, int samples = 64);
// full boundary as a closed polyline with the segments inside gamma marked
MarkedPolyline boundary_marked_arc(const ConformalMap& map, Arc gamma);

// Margins (slack, expected >= 0) for the interior derivative bounds; members
// are absent when |z| falls outside an inequality's stated annulus.
struct InteriorDerivativeMargins {
    std::optional<IneqMargin> confderest1;     // lower bound, e^{-pi/4} < r < 1
    std::optional<IneqMargin> confderest2;     // upper bound, e^{-2pi} < r < 1
    std::optional<IneqMargin> koebe_lower, koebe_upper;          // rho sandwich
    std::optional<IneqMargin> koebedist_lower, koebedist_upper;  // distortion
};
InteriorDerivativeMargins verify_interior_derivative_bounds(
    const ConformalMap& map, const CircleEmbedding& curve, cplx z);

struct ExteriorDerivativeMargins {
    std::optional<IneqMargin> extderest1, extderest2;        // two-regime bounds
    std::optional<IneqMargin> capdiam_lower, capdiam_upper;  // 2cap<=diam<=4cap
    std::optional<IneqMargin> sigmadist_lower, sigmadist_upper;  // Loewner
    std::optional<IneqMargin> derdistext1;  // lower vs rho, 1 < R < e^{pi/4}
    std::optional<IneqMargin> derdistext2;  // upper vs rho, R > 1
};
ExteriorDerivativeMargins verify_exterior_derivative_bounds(
    const ConformalMap& map, const CircleEmbedding& curve, cplx z);

} // namespace blext
