#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pmech/observable.hpp"
#include "pmech/rng.hpp"
#include "pmech/spaces.hpp"
#include "pmech/states.hpp"

namespace pmech {

// --- convolution by p-mechanised observables ---------------------------------

// (B * v)(g) = sum c_ab (-1/2 pi i)^{|a|+|b|} d_x'^a d_y'^b v(g'^-1 g) at g'=e,
// computed symbolically on the fiber. First-order observables reproduce the
// invariant vector fields.
HState convolve_left(const PMechObservable& B, const HState& v);
HState convolve_right(const HState& v, const PMechObservable& B);

// A v = (2 pi / i h) v on the fiber; rejects h = 0.
HState antiderivative_apply(const HState& v);

// {[B1, B2]} v = (B1*B2 - B2*B1) A v.
HState universal_bracket_apply(const PMechObservable& B1, const PMechObservable& B2, const HState& v);

// --- harmonic and forced oscillator -------------------------------------------

struct OscParams {
    double mass = 1.0;
    double omega = 1.0;

    OscParams() = default;
    OscParams(double m, double w) : mass(m), omega(w) {
        if (!(mass > 0.0) || !(omega > 0.0)) throw std::invalid_argument("OscParams: need m, w > 0");
    }
};

struct ForceSpec {
    enum class Kind { Zero, Periodic, Tabulated } kind = Kind::Zero;
    double Z0 = 0.0;
    double Omega = 0.0;
    std::function<double(double)> z;
    double quad_tol = 1e-10;

    static ForceSpec zero() { return {}; }
    static ForceSpec periodic(double Z0_, double Omega_) {
        ForceSpec f;
        f.kind = Kind::Periodic;
        f.Z0 = Z0_;
        f.Omega = Omega_;
        return f;
    }
    static ForceSpec tabulated(std::function<double(double)> fn, double tol = 1e-10) {
        ForceSpec f;
        f.kind = Kind::Tabulated;
        f.z = std::move(fn);
        f.quad_tol = tol;
        return f;
    }

    double eval(double t) const;
};

// psi_1 = Integral_0^t cos(W tau) sin(w tau), psi_2 with cos; the resonant
// branch is taken for |W - w| <= 1e-9.
std::pair<double, double> resonance_psi(double omega, double Omega, double t);

// Integral_0^t z(tau) sin(w tau) / cos(w tau) dtau (closed form for the
// periodic force, adaptive Simpson otherwise).
double z_sin_integral(const ForceSpec& force, double omega, double t);
double z_cos_integral(const ForceSpec& force, double omega, double t);

// Classical harmonic Hamiltonian (m w^2 q^2 + p^2/m)/2, one degree of freedom.
PolyQP harmonic_hamiltonian(const OscParams& pr);
PolyQP forced_hamiltonian(const OscParams& pr, double z_at_t);

// Creation/annihilation p-mechanisations of (m w q -+ i p) per coordinate.
PMechObservable creation_obs(int n, int j, double mass = 1.0, double omega = 1.0);
PMechObservable annihilation_obs(int n, int j, double mass = 1.0, double omega = 1.0);

// Heisenberg flow of an observable in the harmonic system (exact substitution).
PMechObservable harmonic_evolve_obs(const PMechObservable& B0, double t, const OscParams& pr);

// Pointwise value of the forced-oscillator solution with initial fiber data
// B0(x,y); the s argument only contributes through the implicit fiber factor
// and is accepted for completeness.
Cplx forced_solution_eval(const PGFun& B0, double t, const OscParams& pr, const ForceSpec& force,
                          double s, double x, double y);

// Phase-space substitution flow of the forced oscillator (the map whose
// composition with an initial observable gives its time evolution).
std::pair<double, double> classical_forced_flow(double q, double p, double t, const OscParams& pr,
                                                const ForceSpec& force);

struct CoherentTrajectoryPoint {
    CoherentLabel label;
    Cplx phase;  // unit modulus
};

// Interaction-picture evolution of a coherent state under the forced
// oscillator with m = w = 1: a shifted label and a numerical phase.
CoherentTrajectoryPoint interaction_forced_trajectory(const CoherentLabel& start,
                                                      const ForceSpec& force, double t);

// Harmonic evolution of a coherent state: rotated label and phase e^{-i w t/2}.
CoherentTrajectoryPoint harmonic_coherent_evolution(const CoherentLabel& start, double t,
                                                    const OscParams& pr);

// v_k = (1/k!)^{1/2} (A A^+)^k applied to the vacuum. The printed ladder
// normalisations are mutually inconsistent, so only proportionality is
// asserted downstream; measured ladder constants are reported by tests.
HState harmonic_eigenfunction(int k, double h, const OscParams& pr);

// max over random test states w of |<B*v,w> - lambda <v,w>| / (|v||w|).
double eigen_check(const PMechObservable& B, const HState& v, Cplx lambda, Rng& rng,
                   int n_tests = 10);

}  // namespace pmech
