#include "pmech/dynamics.hpp"

#include <cmath>

#include "pmech/oracles.hpp"

namespace pmech {

namespace {

// Shared body of left/right convolution; phase_sign +1 for left (x.y' - x'.y),
// -1 for right.
HState convolve_impl(const PMechObservable& B, const HState& v, double phase_sign) {
    int n = v.dof();
    if (B.dof() != n) throw DimensionMismatch("convolve: dof mismatch");
    double h = v.h;
    int m = 4 * n;  // (x, y, x', y')

    // f(x - x', y - y')
    std::vector<double> L(static_cast<std::size_t>(2 * n) * m, 0.0);
    for (int j = 0; j < n; ++j) {
        L[static_cast<std::size_t>(j) * m + j] = 1.0;
        L[static_cast<std::size_t>(j) * m + 2 * n + j] = -1.0;
        L[static_cast<std::size_t>(n + j) * m + n + j] = 1.0;
        L[static_cast<std::size_t>(n + j) * m + 3 * n + j] = -1.0;
    }
    PGFun shifted = pg_affine_sub(v.f, L, m, std::vector<Cplx>(static_cast<std::size_t>(2 * n), Cplx{}));

    QuadExp ph(m);
    for (int j = 0; j < n; ++j) {
        ph.add_quad(j, 3 * n + j, Cplx{0.0, phase_sign * kPi * h});
        ph.add_quad(2 * n + j, n + j, Cplx{0.0, -phase_sign * kPi * h});
    }
    PGFun w = shifted * PGFun::gaussian(ph);

    // restriction x' = y' = 0
    std::vector<double> R(static_cast<std::size_t>(m) * (2 * n), 0.0);
    for (int i = 0; i < 2 * n; ++i) R[static_cast<std::size_t>(i) * (2 * n) + i] = 1.0;
    std::vector<Cplx> zero_t(static_cast<std::size_t>(m), Cplx{});

    PGFun result(2 * n);
    Cplx base = Cplx{-1.0, 0.0} / (2.0 * kPi * kI);
    for (const auto& [key, c] : B.poly.terms()) {
        PGFun d = w;
        int order = 0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < key.first.e[static_cast<std::size_t>(j)]; ++i) {
                d = pg_diff(d, 2 * n + j);
                ++order;
            }
            for (int i = 0; i < key.second.e[static_cast<std::size_t>(j)]; ++i) {
                d = pg_diff(d, 3 * n + j);
                ++order;
            }
        }
        result = result + (c * std::pow(base, order)) * pg_affine_sub(d, R, 2 * n, zero_t);
    }
    if (B.central_weight) result = Cplx{B.central_weight(h), 0.0} * result;
    return {h, result};
}

}  // namespace

HState convolve_left(const PMechObservable& B, const HState& v) { return convolve_impl(B, v, 1.0); }

HState convolve_right(const HState& v, const PMechObservable& B) { return convolve_impl(B, v, -1.0); }

HState antiderivative_apply(const HState& v) {
    if (v.h == 0.0) throw std::invalid_argument("antiderivative_apply: h must be nonzero");
    Cplx factor = 2.0 * kPi / (kI * v.h);
    return {v.h, factor * v.f};
}

HState universal_bracket_apply(const PMechObservable& B1, const PMechObservable& B2, const HState& v) {
    HState u = antiderivative_apply(v);
    HState lhs = convolve_left(B1, convolve_left(B2, u));
    HState rhs = convolve_left(B2, convolve_left(B1, u));
    return {v.h, lhs.f - rhs.f};
}

double ForceSpec::eval(double t) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Periodic:
            return Z0 * std::cos(Omega * t);
        case Kind::Tabulated:
            return z(t);
    }
    return 0.0;
}

std::pair<double, double> resonance_psi(double omega, double Omega, double t) {
    if (std::abs(Omega - omega) <= 1e-9) {
        double w = omega;
        double psi1 = (1.0 - std::cos(2.0 * w * t)) / (4.0 * w);
        double psi2 = 0.5 * t + std::sin(2.0 * w * t) / (4.0 * w);
        return {psi1, psi2};
    }
    double den = omega * omega - Omega * Omega;
    double cw = std::cos(omega * t), sw = std::sin(omega * t);
    double cW = std::cos(Omega * t), sW = std::sin(Omega * t);
    double psi1 = (omega - omega * cw * cW - Omega * sw * sW) / den;
    double psi2 = (omega * sw * cW - Omega * cw * sW) / den;
    return {psi1, psi2};
}

double z_sin_integral(const ForceSpec& force, double omega, double t) {
    switch (force.kind) {
        case ForceSpec::Kind::Zero:
            return 0.0;
        case ForceSpec::Kind::Periodic:
            return force.Z0 * resonance_psi(omega, force.Omega, t).first;
        case ForceSpec::Kind::Tabulated:
            return oracles::simpson([&](double tau) { return force.z(tau) * std::sin(omega * tau); }, 0.0,
                                    t, force.quad_tol);
    }
    return 0.0;
}

double z_cos_integral(const ForceSpec& force, double omega, double t) {
    switch (force.kind) {
        case ForceSpec::Kind::Zero:
            return 0.0;
        case ForceSpec::Kind::Periodic:
            return force.Z0 * resonance_psi(omega, force.Omega, t).second;
        case ForceSpec::Kind::Tabulated:
            return oracles::simpson([&](double tau) { return force.z(tau) * std::cos(omega * tau); }, 0.0,
                                    t, force.quad_tol);
    }
    return 0.0;
}

PolyQP harmonic_hamiltonian(const OscParams& pr) {
    PolyQP q = PolyQP::q(1, 0), p = PolyQP::p(1, 0);
    return Cplx{0.5 * pr.mass * pr.omega * pr.omega, 0.0} * (q * q) +
           Cplx{0.5 / pr.mass, 0.0} * (p * p);
}

PolyQP forced_hamiltonian(const OscParams& pr, double z_at_t) {
    return harmonic_hamiltonian(pr) - Cplx{z_at_t, 0.0} * PolyQP::q(1, 0);
}

PMechObservable creation_obs(int n, int j, double mass, double omega) {
    PolyQP f = Cplx{mass * omega, 0.0} * PolyQP::q(n, j) - kI * PolyQP::p(n, j);
    return p_mechanise(f);
}

PMechObservable annihilation_obs(int n, int j, double mass, double omega) {
    PolyQP f = Cplx{mass * omega, 0.0} * PolyQP::q(n, j) + kI * PolyQP::p(n, j);
    return p_mechanise(f);
}

PMechObservable harmonic_evolve_obs(const PMechObservable& B0, double t, const OscParams& pr) {
    int n = B0.dof();
    int m = 2 * n;
    double c = std::cos(pr.omega * t), s = std::sin(pr.omega * t);
    std::vector<double> M(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < n; ++j) {
        M[static_cast<std::size_t>(j) * m + j] = c;
        M[static_cast<std::size_t>(j) * m + n + j] = s / (pr.mass * pr.omega);
        M[static_cast<std::size_t>(n + j) * m + j] = -pr.mass * pr.omega * s;
        M[static_cast<std::size_t>(n + j) * m + n + j] = c;
    }
    PMechObservable r = B0;
    r.poly = B0.poly.linear_substitute(M, std::vector<double>(static_cast<std::size_t>(m), 0.0));
    return r;
}

Cplx forced_solution_eval(const PGFun& B0, double t, const OscParams& pr, const ForceSpec& force,
                          double /*s*/, double x, double y) {
    double mw = pr.mass * pr.omega;
    double X = x * std::cos(pr.omega * t) + mw * y * std::sin(pr.omega * t);
    double Y = -x * std::sin(pr.omega * t) / mw + y * std::cos(pr.omega * t);
    double zs = z_sin_integral(force, pr.omega, t);
    double zc = z_cos_integral(force, pr.omega, t);
    Cplx prefactor = std::exp(Cplx{0.0, -2.0 * kPi * (zs * X / mw + zc * Y)});
    return prefactor * pg_eval(B0, {X, Y});
}

std::pair<double, double> classical_forced_flow(double q, double p, double t, const OscParams& pr,
                                                const ForceSpec& force) {
    double mw = pr.mass * pr.omega;
    double c = std::cos(pr.omega * t), s = std::sin(pr.omega * t);
    double zs = z_sin_integral(force, pr.omega, t);
    double zc = z_cos_integral(force, pr.omega, t);
    return {q * c + p * s / mw + zs / mw, -q * mw * s + p * c + zc};
}

CoherentTrajectoryPoint interaction_forced_trajectory(const CoherentLabel& start,
                                                      const ForceSpec& force, double t) {
    if (start.dof() != 1)
        throw std::invalid_argument("interaction_forced_trajectory: one degree of freedom");
    double S = z_sin_integral(force, 1.0, t);
    double C = z_cos_integral(force, 1.0, t);
    // f1 = -pi i Int_0^t Int_0^tau z(tau) z(tau') sin(tau - tau') dtau' dtau;
    // the inner integral collapses to sin(tau) C(tau) - cos(tau) S(tau).
    double tol = force.kind == ForceSpec::Kind::Tabulated ? force.quad_tol : 1e-10;
    double dbl = oracles::simpson(
        [&](double tau) {
            double inner = std::sin(tau) * z_cos_integral(force, 1.0, tau) -
                           std::cos(tau) * z_sin_integral(force, 1.0, tau);
            return force.eval(tau) * inner;
        },
        0.0, t, tol);
    double a = start.a[0], b = start.b[0];
    Cplx f1{0.0, -kPi * dbl};
    Cplx f2{0.0, kPi * (a * C - b * S) / start.h};
    CoherentLabel moved = start;
    moved.a[0] = a + S;
    moved.b[0] = b - C;
    return {moved, std::exp(f1 + f2)};
}

CoherentTrajectoryPoint harmonic_coherent_evolution(const CoherentLabel& start, double t,
                                                    const OscParams& pr) {
    if (start.dof() != 1)
        throw std::invalid_argument("harmonic_coherent_evolution: one degree of freedom");
    double c = std::cos(pr.omega * t), s = std::sin(pr.omega * t);
    double a = start.a[0], b = start.b[0];
    CoherentLabel moved = start;
    moved.a[0] = a * c + b * s;
    moved.b[0] = -a * s + b * c;
    return {moved, std::exp(Cplx{0.0, -0.5 * pr.omega * t})};
}

HState harmonic_eigenfunction(int k, double h, const OscParams& pr) {
    if (k < 0 || k > kMaxMonomialDegree)
        throw DegreeCapExceeded("harmonic_eigenfunction: level exceeds cap");
    HState v = vacuum_hstate(h, 1, pr.mass, pr.omega);
    PMechObservable ap = creation_obs(1, 0, pr.mass, pr.omega);
    double fact = 1.0;
    for (int i = 1; i <= k; ++i) {
        v = antiderivative_apply(convolve_left(ap, v));
        fact *= static_cast<double>(i);
    }
    return {h, Cplx{1.0 / std::sqrt(fact), 0.0} * v.f};
}

double eigen_check(const PMechObservable& B, const HState& v, Cplx lambda, Rng& rng, int n_tests) {
    HState Bv = convolve_left(B, v);
    double nv = hh_norm(v);
    double worst = 0.0;
    for (int i = 0; i < n_tests; ++i) {
        std::vector<double> a(static_cast<std::size_t>(v.dof())), b(static_cast<std::size_t>(v.dof()));
        for (auto& x : a) x = rng.uniform(-1.5, 1.5);
        for (auto& x : b) x = rng.uniform(-1.5, 1.5);
        HState w = coherent_v(CoherentLabel{v.h, a, b});
        Cplx lhs = hh_inner(Bv, w);
        Cplx rhs = lambda * hh_inner(v, w);
        worst = std::max(worst, std::abs(lhs - rhs) / (nv * hh_norm(w)));
    }
    return worst;
}

}  // namespace pmech
