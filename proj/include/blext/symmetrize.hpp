#pragma once
// Winding symmetrization: conjugate an arbitrary circle embedding to a
// centrally symmetric one through the angle-doubling map W(z) = z^2/|z|
// (f(W(z)) - w0 = W(g(z))), recenter at the incenter, and de-symmetrize plane
// extensions back, giving the general extension pipeline.

#include "blext/curves.hpp"
#include "blext/extend.hpp"

#include <json.hpp>
#include <utility>

namespace blext {

// singular values of the winding-map derivative at w != 0: always (2, 1)
std::pair<double, double> winding_jacobian_norms(cplx w);

struct WindingSymmetrization {
    CircleEmbedding source;
    cplx w0 = 0;          // basepoint subtracted before the angle halving
    CircleEmbedding g;    // centrally symmetric; nodes at half-parameters of
                          // the source nodes plus their exact antipodes
    double sign_choice = 1;  // -g is the other valid symmetrization
    double r_min = 0;        // min node distance |f - w0|
    double inradius = 0;     // inscribed radius when recentred, else 0
};

// g(e^{it}) = |f(e^{2it}) - w0| exp(i a(t)/2), a the continuous argument of
// f(e^{2it}) - w0. Needs winding_number(f, w0) = +-1 and w0 off the curve.
WindingSymmetrization symmetrize(const CircleEmbedding& f, cplx w0);
// basepoint = incenter of the source
WindingSymmetrization symmetrize_recentred(const CircleEmbedding& f);

// Empirical node-pair constants of g against the predicted sandwich: the
// upper bound is pi L in both variants; the lower bound uses the measured
// min distance r_min (margins) or its inradius-free floor l^2/(2 pi L)
// (uniform_margins), with (L, l) the empirical node constants of the source.
struct SymmetrizationMargins {
    double bound_upper = 0, bound_lower = 0;
    double g_upper = 0, g_lower = 0;
    double upper_margin = 0;  // bound_upper - g_upper
    double lower_margin = 0;  // g_lower - bound_lower
};
SymmetrizationMargins symmetrization_margins(const WindingSymmetrization& sym);
SymmetrizationMargins symmetrization_uniform_margins(
    const WindingSymmetrization& sym);

// {w0, r_min, empirical_g_constants, prop84_margins, cor85_margins}
nlohmann::ordered_json symmetrization_report_json(
    const WindingSymmetrization& sym);

// F(w) = w0 + W(G(s(w))) for a centrally symmetric extension G: verifies
// G(-z) = -G(z) on probe grids and that both half-angle sections give the
// same values across the branch cut, then votes the section sign by node
// agreement with the source reconstructed from G. Throws
// "G not centrally symmetric enough" when the checks fail.
PlaneExtension desymmetrize_extension(const PlaneExtension& G, cplx w0);

// symmetrize_recentred -> extend_plane_symmetric -> desymmetrize_extension;
// the result keeps f as its boundary data.
PlaneExtension extend_plane_general(const CircleEmbedding& f);

}  // namespace blext
