#pragma once

#include <vector>

#include "pmech/heisenberg.hpp"
#include "pmech/observable.hpp"
#include "pmech/pgfun.hpp"
#include "pmech/states.hpp"

namespace pmech {

// --- inner products ----------------------------------------------------------

// (4/h)^n Integral f1 conj(f2) dq dp
Cplx fock_inner(const FockState& f1, const FockState& f2);
// (4/h)^n Integral v1 conj(v2) dx dy (no s-integration on the fiber)
Cplx hh_inner(const HState& v1, const HState& v2);

double fock_norm(const FockState& f);
double hh_norm(const HState& v);

// --- reference states ---------------------------------------------------------

// Ground state exp(-2 pi (q^2+p^2)/h) of F^2(O_h); unit fock_inner norm.
FockState fock_ground_state(double h, int n);
// Coherent family f_(x,y) = rho_h(0,x,y) applied to the ground state.
FockState fock_coherent_state(double h, const std::vector<double>& x, const std::vector<double>& y);

// Vacuum (h/2)^n exp(- pi h/2 (x^2/(w m) + y^2 w m)) on the fiber; unit norm.
HState vacuum_hstate(double h, int n, double mass = 1.0, double omega = 1.0);

// Coherent state v_(h,a,b): the zeta-translate of the vacuum, in closed form.
HState coherent_v(const CoherentLabel& lbl);

// Kernel-state versions: l_(h,a,b) and the (q,p) pure-state phase l_(0,a,b).
KernelState kernel_coherent(const CoherentLabel& lbl);
KernelState kernel_pure_state(const std::vector<double>& a, const std::vector<double>& b);

// --- intertwining maps ---------------------------------------------------------

// T: L^2(R^n) -> F^2(O_h), (2/h)^{n/4} Integral K_I(q,p,xi) psi(xi) dxi.
FockState T_apply(const SchrodingerState& st);
// Adjoint inverse, normalized so that T_inverse(T(psi)) = psi.
SchrodingerState T_inverse_apply(const FockState& f);

// S_h: F^2(O_h) -> H_h^2 by inverse Fourier transform on the fiber.
HState S_h_apply(const FockState& f);
FockState S_h_inverse(const HState& v);

// Direct kernel map L^2(R^n) -> H_h^2; equals S_h o T.
HState ltwo_to_hh_kernel_apply(const SchrodingerState& st);

// --- reproducing kernels --------------------------------------------------------

// <v_(h,a,b), v_(h,a',b')> in closed form; diagonal is exactly 1.
Cplx repker_hh(const CoherentLabel& l1, const CoherentLabel& l2);
// (1/h)^n exp(-2 pi/h (...)) closed form on the orbit.
Cplx repker_fock(const std::vector<double>& q, const std::vector<double>& p,
                 const std::vector<double>& qp, const std::vector<double>& pp, double h);

// --- kernels and functionals ------------------------------------------------------

// l(s,x,y) = (4/h)^n Integral conj(v(g^-1 g')) v(g') dx' dy' on the fiber.
KernelState kernel_from_state(const HState& v);

// Functional pairing Integral B conj(l): for the p-mechanisation of a
// polynomial this is sum c_ab (-1/2 pi i)^{|a|+|b|} d_x^a d_y^b conj(l)(0,0).
Cplx kernel_pairing(const PMechObservable& B, const KernelState& l);

// (q,p) pure state applied to an observable; returns the classical value
// f(a,b), computed through the one-dimensional representation.
Cplx pure_state_eval(const std::vector<double>& a, const std::vector<double>& b,
                     const PMechObservable& obs);

// --- generalized eigenfunctions (one degree of freedom) ----------------------------

enum class GeneralizedKind { Position, Momentum };

// The explicit exponential in H_h with P(q)* u = xi u (resp. P(p)*); returned
// as the (x,y) part of the fiber function.
HState generalized_eigenfunction(GeneralizedKind kind, double xi, double h);

// --- polarization residuals ----------------------------------------------------------

// max over sample points and j of |D_h^j f| (F^2 side) resp. |E_h^j f| (H_h^2 side).
double fock_polarization_residual(const FockState& f, const std::vector<std::vector<double>>& pts);
double hh_polarization_residual(const HState& v, const std::vector<std::vector<double>>& pts);

}  // namespace pmech
