#pragma once
// Modified Beurling-Ahlfors machinery: circle-homeomorphism lifts, the
// half-plane extension chi_e with exact piecewise-polynomial integration, its
// Jacobian, the induced disk homeomorphism Psi, inverses, and the
// semicircle-comparison derivative bounds.

#include "blext/curves.hpp"

#include <Eigen/Dense>

#include <vector>

namespace blext {

using Jacobian2 = Eigen::Matrix2d;

// largest singular value and inverse of the smallest one
double op_norm(const Jacobian2& m);
double op_norm_inv(const Jacobian2& m);

// increasing piecewise-linear lift of a sense-preserving circle
// homeomorphism: chi maps R onto R, chi(t + 2pi) = chi(t) + 2pi
struct CircleHomeoLift {
    std::vector<double> t;    // node parameters in [0, 2pi), strictly increasing
    std::vector<double> chi;  // strictly increasing, chi[0] in [0, 2pi)
    bool pi_equivariant = false;  // chi(t + pi) = chi(t) + pi

    std::size_t size() const { return t.size(); }
    double eval(double x) const;
    double inverse(double v) const;
    // integral(x) = int_{t[0]}^{x} chi(u) du, exact for the PL interpolant
    double integral(double x) const;

  private:
    friend CircleHomeoLift lift_from_nodes(std::vector<double>, std::vector<double>);
    std::vector<double> cumint;  // cumulative segment integrals from t[0]
    double period_integral = 0;  // int over one full period from t[0]
};

// validates monotonicity, precomputes integrals, detects pi-equivariance
CircleHomeoLift lift_from_nodes(std::vector<double> t, std::vector<double> chi);

// builds the lift from unimodular samples psi(e^{i t_k}); increments of arg
// are taken in (0, 2pi) and the total turning must be exactly one revolution
CircleHomeoLift lift(const std::vector<double>& t, const std::vector<cplx>& psi);

CircleHomeoLift identity_lift(int n);

// chi_e(x+iy) = 1/2 int_{-1}^{1} chi(x+ty) (1 + 2i sgn t) dt, y > 0,
// evaluated in closed form
cplx ba_extend(const CircleHomeoLift& chi, cplx z);

// exact derivative matrix of chi_e
Jacobian2 ba_jacobian(const CircleHomeoLift& chi, cplx z);

// disk homeomorphism Psi(e^{iz}) = exp(i chi_e(z)), Psi(0) = 0, |zeta| <= 1
cplx psi_disk(const CircleHomeoLift& chi, cplx zeta);

// solves psi_disk(zeta) = w to residual 1e-10 (Newton, then a winding-number
// bisection fallback); 0 < |w| <= 1
cplx psi_inverse(const CircleHomeoLift& chi, cplx w);

// derivative matrix of Psi at zeta (0 < |zeta| < 1) via the conformal chain
// factors |Psi|/|zeta| through chi_e
Jacobian2 psi_jacobian(const CircleHomeoLift& chi, cplx zeta);

// case-split derivative bounds for centrally symmetric psi, with the measured
// operator norms they dominate
struct PsiJacobianBounds {
    double dpsi_bound = 0;       // upper bound for |DPsi|
    double dpsi_inv_bound = 0;   // upper bound for |DPsi^{-1}|
    double dpsi_measured = 0;
    double dpsi_inv_measured = 0;
};
PsiJacobianBounds psi_jacobian_bounds(const CircleHomeoLift& chi, cplx z);

} // namespace blext
