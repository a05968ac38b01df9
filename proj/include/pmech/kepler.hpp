#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "pmech/cantrans.hpp"
#include "pmech/heisenberg.hpp"
#include "pmech/pgfun.hpp"

namespace pmech {

// --- spherical polar coordinates -------------------------------------------------

// theta is the azimuthal angle in [0, 2 pi), phi the polar angle in (0, pi).
// Different closed forms swap these names; this header fixes the roles once
// and converts at every formula boundary.
struct SphericalPoint {
    double r = 1.0;
    double theta = 0.0;  // azimuthal
    double phi = 1.5707963267948966;  // polar
};

// Rejects points on the axis xi_1 = xi_2 = 0 (branch selection undefined there).
SphericalPoint sph_from_cartesian(const std::array<double, 3>& xi);
std::array<double, 3> cartesian_from_sph(const SphericalPoint& p);

// Canonical momenta conjugate to (r, theta, phi). p_azim is the angular
// momentum about the 3-axis (often written p_phi).
struct SphericalMomenta {
    double p_r = 0.0;
    double p_azim = 0.0;   // conjugate to theta
    double p_polar = 0.0;  // conjugate to phi
};

SphericalMomenta spherical_momenta(const std::array<double, 3>& q, const std::array<double, 3>& p);
std::array<double, 3> cartesian_momenta(const SphericalPoint& pt, const SphericalMomenta& m);

// --- special functions ---------------------------------------------------------------

// Associated Legendre P_l^m(x) in the plain Rodrigues normalisation
// (no Condon-Shortley factor); m may be negative.
double assoc_legendre(int l, int m, double x);

// Y_l^m(theta_polar, phi_azim) = N (-1)^m e^{i m phi} P_l^m(cos theta).
Cplx sph_harmonic(int l, int m, double theta_polar, double phi_azim);

// Standardised generalized Laguerre L_k^(alpha)(z) by recurrence.
double laguerre_std(int k, int alpha, double z);

// The source's Rodrigues convention L^p_{q-p}(z) = q! L~_{q-p}^(p)(z).
double assoc_laguerre(int p, int q_minus_p, double z);

// --- bound states ----------------------------------------------------------------------

struct QuantumNumbers {
    int n = 1, l = 0, m = 0;
    QuantumNumbers() = default;
    QuantumNumbers(int n_, int l_, int m_);
};

// kappa used by the radial eigenfunctions; fixed by the Hamiltonian
// -h^2/(8 pi^2) Lap - 1/r (the printed 2 pi/(n h^2) is reported in the
// discrepancy output, not used).
double coulomb_kappa(int n, double h);

// Bound-state energy of level n for that Hamiltonian: -2 pi^2 / (n^2 h^2).
double coulomb_energy(int n, double h);

// Printed eigenvalue -omega/n^2 with omega = 4 pi^2/h^2 (reported only).
double coulomb_energy_printed(int n, double h);

// Normalised radial factor R_nl(r).
double coulomb_radial(const QuantumNumbers& qn, double h, double r);

struct RadialGrid {
    double r_max = 60.0;
    int N = 2000;

    RadialGrid() = default;
    RadialGrid(double rmax, int n);
    double dr() const { return r_max / N; }
    double r(int i) const { return dr() * (i + 1); }  // interior nodes 1..N-1
    int interior() const { return N - 1; }
};

// Samples of R_nl on the interior grid nodes.
std::vector<double> coulomb_eigenfunction_radial(const QuantumNumbers& qn, double h,
                                                 const RadialGrid& grid);

// Full bound-state value R_nl(r) Y_l^m at a chart point.
Cplx coulomb_eigenfunction_eval(const QuantumNumbers& qn, double h, const SphericalPoint& pt);

// Represented angular momentum component L_i = (h / 2 pi i)(xi_j d_k - xi_k d_j)
// acting exactly on a function over R^3; i, j, k cyclic.
PGFun angular_momentum_apply(int i, double h, const PGFun& psi);

// --- finite-difference radial oracle ------------------------------------------------------

struct Tridiag {
    std::vector<double> diag, off;
};

// Reduced radial operator on u = r R with Dirichlet ends:
// -(h^2 / 8 pi^2)(u'' - l(l+1) u / r^2) - u / r.
Tridiag coulomb_hamiltonian_fd(int l, double h, const RadialGrid& grid);

// Lowest `count` eigenvalues by Sturm-sequence bisection.
std::vector<double> tridiag_lowest_eigenvalues(const Tridiag& T, int count);

// Eigenvalues at the grid and at a doubled grid, Richardson-extrapolated;
// throws if the two disagree by more than 1e-3 relative.
std::vector<double> fd_spectrum(int l, double h, const RadialGrid& grid, int count);

struct SpectrumRow {
    int n = 1, l = 0;
    double E_fd = 0.0, E_extrapolated = 0.0, E_paper_formula = 0.0, rel_discrepancy = 0.0;
};

// Rows for principal levels up to n_max at fixed h (all l < n).
std::vector<SpectrumRow> coulomb_spectrum_report(double h, int n_max, const RadialGrid& grid);

// --- spherical-polar representations --------------------------------------------------------

using SphFn = std::function<Cplx(const SphericalPoint&)>;

SphFn sphfn_from_pgfun(const PGFun& eta);  // eta over R^3 pulled back through the chart

// rho_h^P(g): the pulled-back Schrodinger action in spherical coordinates.
SphFn rho_hP_apply(const GroupElement& g, double h, SphFn psi);

// L_3 on the spherical chart: (h / 2 pi i) d/d(azimuth), by central differences.
SphFn rho_hP_L3_apply(double h, SphFn psi, double step = 1e-5);

// --- general position-space transforms ------------------------------------------------------

struct PositionTransform {
    int n = 3;
    std::function<std::vector<double>(const std::vector<double>&)> forward;   // M
    std::function<std::vector<double>(const std::vector<double>&)> inverse;   // M^{-1}
    std::function<RealMat(const std::vector<double>&)> jacobian;              // DM at xi
};

// Printed keeps the sign-flipped convention (without the 1/(2 pi i) factor
// in the momentum operator); Physical matches the Schrodinger operators at
// M = identity and is the default.
enum class TransformSign { Physical, Printed };

// Position observable: multiplication by +-(M^{-1} zeta)_j.
Cplx position_multiplier(const PositionTransform& T, int j, const std::vector<double>& zeta,
                         TransformSign sign = TransformSign::Physical);

// Momentum observable: sum_k coeff_k d psi / d zeta_k; returns the coefficients.
std::vector<Cplx> momentum_coefficients(const PositionTransform& T, int j, double h,
                                        const std::vector<double>& zeta,
                                        TransformSign sign = TransformSign::Physical);

// max |{q_i, p_j} - delta_ij| over sample points, by central differences in
// the transformed coordinates.
double canonical_check(const PositionTransform& T, const std::vector<std::vector<double>>& zeta_pts,
                       const std::vector<std::vector<double>>& pzeta_pts, double step = 1e-5);

// --- Klauder coherent states and the Kepler/Coulomb space ------------------------------------

struct KlauderLabel {
    double sigma = 0.0, gamma = 0.0;
    double theta_bar = 0.0, phi_bar = 0.0, psi_bar = 0.0;
};

// Coefficients over the angular block 0 <= l <= level, |m| <= l; value at
// (l, m) is c[l][m + l]. Printed weights: squared norm (level+1)^2.
struct AMCoeffs {
    int level = 0;
    std::vector<std::vector<Cplx>> c;
};

AMCoeffs klauder_am_state(int level, double theta_bar, double phi_bar, double psi_bar);

// Coefficient table over the bound-state eigenbasis psi_(n+1, l, m); entry
// at (level n, l, m) is c[n][l][m + l].
struct BSCoeffs {
    double h = 1.0;
    std::vector<std::vector<std::vector<Cplx>>> c;

    int levels() const { return static_cast<int>(c.size()); }
    double norm() const;
};

Cplx bs_inner(const BSCoeffs& x, const BSCoeffs& y);

// Normalised Kepler/Coulomb coherent state, truncated at N_max levels with
// the e^{-sigma^2} sum tail below 1e-12 (throws if unreachable).
BSCoeffs klauder_cs(const KlauderLabel& lbl, double h, int N_max);

// f(sigma, gamma, Omega) = <psi, psi_(sigma,gamma,Omega)>.
Cplx kc_transform_eval(const BSCoeffs& psi, const KlauderLabel& lbl, int N_max);

// Per-level phase evolution e^{-(2 pi / i h) E_n t} with E_n = -omega/(n+1)^2,
// omega = 4 pi^2/h^2; identical to the shift gamma -> gamma + omega t.
BSCoeffs kc_time_evolve(const BSCoeffs& psi, double t);
double kc_shift_rate(double h);  // omega

// Resolution-of-identity defect on the angular block: max-norm deviation of
// the quadrature Gram matrix from the identity. Quadrature sizes double-checked.
double am_resolution_check(int level, int n_theta, int n_angle);

}  // namespace pmech
