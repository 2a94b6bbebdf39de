#pragma once
// Plane extensions of circle embeddings assembled from a Riemann map and the
// Beurling-Ahlfors extension of its boundary correspondence: interior
// F = Phi o Psi^{-1} on the closed disk, exterior F = Phi o r o Psi^{-1} o r
// outside it (r the reflection in T), glued into one evaluator with analytic
// Jacobian chains, plus grid measurement of the derivative operator norms.

#include "blext/ba_ext.hpp"
#include "blext/conformal.hpp"
#include "blext/curves.hpp"

#include <json.hpp>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

namespace blext {

// One side of the extension: phi.kind selects the interior or the exterior
// composition; chi is the lift of psi = f^{-1} o phi on T.
struct DiskSideExtension {
    ConformalMap phi;
    CircleHomeoLift chi;
    // evaluate the odd projection (F(z) - F(-z))/2, which is exactly
    // antipodal; set for centrally symmetric sources
    bool odd = false;
    // measured range of |zeta|^2 |z|^2 across the build samples (outer side)
    double mod_growth_lo = 0, mod_growth_hi = 0;

    // Composition at zeta (inner: |zeta| <= 1, outer: |zeta| >= 1). A band of
    // width 1e-3 at T delegates to the boundary composition.
    cplx eval(cplx zeta) const;
    // Derivative matrix by the analytic chain; needs zeta strictly between
    // the unit circle and the side's other boundary (0 or infinity).
    Jacobian2 jacobian(cplx zeta) const;
    // boundary value of the composition at angle theta
    cplx boundary_value(double theta) const;
};

struct PlaneExtension {
    CircleEmbedding source;
    DiskSideExtension inner, outer;
    // desymmetrized general extension: F = w0 + W(core(s(z))) with W the
    // winding map, s a branch of its inverse, and core a centrally symmetric
    // extension; set by the symmetrization pipeline
    struct Desym {
        cplx w0;
        double section_sign = 1;  // which half-angle section feeds core
        std::shared_ptr<const PlaneExtension> core;
    };
    std::optional<Desym> desym;

    cplx eval(cplx zeta) const;      // dispatch on |zeta|
    Jacobian2 jacobian(cplx zeta) const;
};

// Both builders require a centrally symmetric embedding with 0 inside.
DiskSideExtension extend_disk(const CircleEmbedding& f);
DiskSideExtension extend_exterior(const CircleEmbedding& f);
PlaneExtension extend_plane_symmetric(const CircleEmbedding& f);

// The winding map w -> w^2/|w| doubles the argument and keeps the modulus
// (W(0) = 0); its derivative has singular values 2 and 1 everywhere else.
// winding_section is the branch of W^{-1} with arguments in [0, pi).
cplx winding_map(cplx w);
Jacobian2 winding_jacobian(cplx w);  // throws at 0
cplx winding_section(cplx w);

// sup |F(e^{i t}) - f(e^{i t})| over dense angle samples, per side, plus the
// largest inner-vs-outer gap on T
struct BoundaryAgreement {
    double inner = 0, outer = 0, across = 0;
    double worst() const { return inner > outer ? inner : outer; }
};
BoundaryAgreement boundary_agreement(const PlaneExtension& F, int per_node = 4);

struct GridSpec {
    int radii = 64;   // per annular region
    int angles = 256;
    double gap = 1e-3;         // distance kept from T and from 0
    double outer_limit = 2.0;  // outermost radius = outer_limit * e^{2 pi}
};

struct GridRow {
    cplx z;
    double df = 0, df_inv = 0, det = 0;
};

struct JacobianReport {
    double sup_df = 0, sup_df_inv = 0;
    cplx sup_df_at, sup_df_inv_at;
    // the contribution of the |zeta| < 1 grid alone
    double inner_sup_df = 0, inner_sup_df_inv = 0;
    cplx inner_sup_df_at, inner_sup_df_inv_at;
    double min_det = std::numeric_limits<double>::infinity();
    cplx min_det_at;
    std::size_t points = 0;
};

// Operator norms of DF over polar grids, radii log-spaced per region between
// the radii where the derivative estimates change regime (e^{-2 pi},
// e^{-pi/4}, 1, e^{pi/4}, e^{2 pi}). Throws "orientation fold at ..." when
// det DF <= 0 at a grid point. `rows` (when given) receives every sample.
JacobianReport jacobian_report(const PlaneExtension& F, const GridSpec& spec = {},
                               std::vector<GridRow>* rows = nullptr);

// {boundary_agreement, sup_DF, sup_DF_inv, empirical_L, empirical_l,
//  paper_bound_margins, grid_spec, witnesses}
nlohmann::ordered_json extension_report_json(const PlaneExtension& F,
                                             const JacobianReport& jr,
                                             const BoundaryAgreement& ba,
                                             const GridSpec& spec);

} // namespace blext
