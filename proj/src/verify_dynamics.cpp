#include <chrono>
#include <cmath>

#include "pmech/cantrans.hpp"
#include "pmech/dynamics.hpp"
#include "pmech/kepler.hpp"
#include "pmech/oracles.hpp"
#include "pmech/verify.hpp"

namespace pmech::verify {

namespace {

using Clock = std::chrono::steady_clock;

struct Checker {
    const RunConfig& cfg;
    Report rep;
    Rng rng;

    Checker(const RunConfig& c, const std::string& suite, std::uint64_t salt)
        : cfg(c), rng(Rng(c.seed).fork(salt)) {
        rep.suite = suite;
    }
    double tol_for(const std::string& id, double def) const {
        auto it = cfg.tolerances.find(id);
        return it != cfg.tolerances.end() ? it->second : def;
    }
    void residual(const std::string& id, const std::string& tag, int crit, double measured,
                  double def_tol) {
        double tol = tol_for(id, def_tol);
        rep.cases.push_back({id, tag, crit, measured <= tol, measured, 0.0, tol});
    }
    void equals(const std::string& id, const std::string& tag, int crit, double measured,
                double expected, double def_tol) {
        double tol = tol_for(id, def_tol);
        rep.cases.push_back({id, tag, crit, std::abs(measured - expected) <= tol, measured, expected, tol});
    }
    void boolean(const std::string& id, const std::string& tag, int crit, bool ok) {
        rep.cases.push_back({id, tag, crit, ok, ok ? 1.0 : 0.0, 1.0, 0.0});
    }
};

std::vector<std::vector<double>> random_points(Rng& rng, int count, int dim, double extent) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < count; ++i) pts.push_back(rng.uniform_vector(dim, -extent, extent));
    return pts;
}

CoherentLabel random_label(Rng& rng, double h, double extent = 1.2) {
    return CoherentLabel::one_dof(h, rng.uniform(-extent, extent), rng.uniform(-extent, extent));
}

HState random_coherent_combo(Rng& rng, double h, int pieces = 2) {
    CoherentCombo combo;
    for (int i = 0; i < pieces; ++i)
        combo.push_back({Cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, random_label(rng, h)});
    return combo_to_hstate(combo);
}

PolyQP random_poly_deg2(Rng& rng) {
    PolyQP f(1);
    PolyQP q = PolyQP::q(1, 0), p = PolyQP::p(1, 0);
    f = PolyQP::constant(1, Cplx{rng.uniform(-1, 1), 0.0}) + Cplx{rng.uniform(-1, 1), 0.0} * q +
        Cplx{rng.uniform(-1, 1), 0.0} * p + Cplx{rng.uniform(-1, 1), 0.0} * (q * q) +
        Cplx{rng.uniform(-1, 1), 0.0} * (p * p) + Cplx{rng.uniform(-1, 1), 0.0} * (q * p);
    return f;
}

double state_rel_diff(const HState& a, const HState& b, const std::vector<std::vector<double>>& pts) {
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, std::abs(pg_eval(a.f, p)));
    return pg_max_abs_diff(a.f, b.f, pts) / scale;
}

}  // namespace

// --------------------------------------------------------------- dynamics ---

Report run_dynamics_suite(const RunConfig& cfg) {
    Checker ck(cfg, "dynamics", 0x64796e61);
    auto t0 = Clock::now();
    double h = cfg.h;
    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    PMechObservable Pp = p_mechanise(PolyQP::p(1, 0));

    // convolution reproduces the printed first-order operators
    {
        auto pts = random_points(ck.rng, 8, 2, 1.3);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            HState v = random_coherent_combo(ck.rng, h);
            // (1/2 pi i)(d_x + pi i h y) v
            MultiIndex my(2), mx(2);
            my.e[1] = 1;
            mx.e[0] = 1;
            PGFun expect_q = Cplx{1.0, 0.0} / (2.0 * kPi * kI) *
                             (pg_diff(v.f, 0) + PGFun::monomial(2, my, kPi * kI * h) * v.f);
            PGFun expect_p = Cplx{1.0, 0.0} / (2.0 * kPi * kI) *
                             (pg_diff(v.f, 1) - PGFun::monomial(2, mx, kPi * kI * h) * v.f);
            worst = std::max(worst, pg_max_abs_diff(convolve_left(Pq, v).f, expect_q, pts));
            worst = std::max(worst, pg_max_abs_diff(convolve_left(Pp, v).f, expect_p, pts));
        }
        ck.residual("dynamics.convolution_fields", "convolution-reproduces-invariant-fields", 0, worst,
                    1e-11);
    }

    // acceptance 4: annihilation eigen-relation
    {
        double worst = 0.0;
        PMechObservable am = annihilation_obs(1, 0);
        auto pts = random_points(ck.rng, 8, 2, 1.3);
        for (int i = 0; i < 10; ++i) {
            CoherentLabel l = random_label(ck.rng, h);
            HState v = coherent_v(l);
            HState av = convolve_left(am, v);
            Cplx lam{l.a[0], l.b[0]};
            worst = std::max(worst, pg_max_abs_diff(av.f, lam * v.f, pts));
        }
        ck.residual("dynamics.annihilation_eigen", "coherent-annihilation-eigenrelation", 4, worst, 1e-10);
    }

    // acceptance 4: universal bracket of position and momentum is the identity
    {
        double worst = 0.0;
        auto pts = random_points(ck.rng, 8, 2, 1.3);
        for (int i = 0; i < 6; ++i) {
            HState v = random_coherent_combo(ck.rng, h);
            HState ub = universal_bracket_apply(Pq, Pp, v);
            worst = std::max(worst, state_rel_diff(ub, v, pts));
        }
        ck.residual("dynamics.ub_qp", "position-momentum-bracket-identity", 4, worst, 1e-9);
    }

    // acceptance 4: oscillator levels are mutually orthogonal
    {
        OscParams pr;
        std::vector<HState> levels;
        for (int k = 0; k <= 4; ++k) levels.push_back(harmonic_eigenfunction(k, h, pr));
        double worst = 0.0;
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j < i; ++j) {
                Cplx ip = hh_inner(levels[static_cast<std::size_t>(i)], levels[static_cast<std::size_t>(j)]);
                worst = std::max(worst, std::abs(ip) / (hh_norm(levels[static_cast<std::size_t>(i)]) *
                                                        hh_norm(levels[static_cast<std::size_t>(j)])));
            }
        ck.residual("dynamics.harmonic_orthogonal", "oscillator-levels-orthogonal", 4, worst, 1e-8);

        // ladder proportionality; the measured constants are reported through
        // the `measured` field of the two cases below
        PMechObservable ap = creation_obs(1, 0);
        PMechObservable am = annihilation_obs(1, 0);
        auto pts = random_points(ck.rng, 8, 2, 1.2);
        double up_res = 0.0, down_res = 0.0;
        double up_const = 0.0, down_const = 0.0;
        for (int k = 0; k <= 3; ++k) {
            HState raised = convolve_left(ap, levels[static_cast<std::size_t>(k)]);
            Cplx c = hh_inner(raised, levels[static_cast<std::size_t>(k + 1)]) /
                     hh_inner(levels[static_cast<std::size_t>(k + 1)], levels[static_cast<std::size_t>(k + 1)]);
            up_res = std::max(up_res, pg_max_abs_diff(raised.f, c * levels[static_cast<std::size_t>(k + 1)].f, pts));
            if (k == 0) up_const = std::abs(c);
            if (k >= 1) {
                HState lowered = convolve_left(am, levels[static_cast<std::size_t>(k)]);
                Cplx d = hh_inner(lowered, levels[static_cast<std::size_t>(k - 1)]) /
                         hh_inner(levels[static_cast<std::size_t>(k - 1)], levels[static_cast<std::size_t>(k - 1)]);
                down_res = std::max(down_res, pg_max_abs_diff(lowered.f, d * levels[static_cast<std::size_t>(k - 1)].f, pts));
                if (k == 1) down_const = std::abs(d);
            }
        }
        ck.residual("dynamics.ladder_up", "creation-raises-levels", 4, up_res, 1e-9);
        ck.residual("dynamics.ladder_down", "annihilation-lowers-levels", 4, down_res, 1e-9);
        // measured first-step ladder constants, reported (not asserted against
        // any printed value: the printed normalisations are inconsistent)
        ck.equals("dynamics.ladder_constant_up", "measured-raising-constant", 0, up_const,
                  h / (2.0 * kPi), 1e-9);
        ck.equals("dynamics.ladder_constant_down", "measured-lowering-constant", 0, down_const, 2.0,
                  1e-9);
    }

    // antiderivative: right inverse of d/ds, skew-adjoint, commutes with convolution
    {
        HState v = random_coherent_combo(ck.rng, h);
        HState av = antiderivative_apply(v);
        HState dsav = vector_field_apply(VectorField::SLeft, 0, av);
        auto pts = random_points(ck.rng, 8, 2, 1.3);
        double worst = pg_max_abs_diff(dsav.f, Cplx{4.0 * kPi * kPi, 0.0} * v.f, pts);
        HState w = random_coherent_combo(ck.rng, h);
        Cplx adj = hh_inner(antiderivative_apply(v), w) + hh_inner(v, antiderivative_apply(w));
        worst = std::max(worst, std::abs(adj));
        HState c1 = convolve_left(Pq, antiderivative_apply(v));
        HState c2 = antiderivative_apply(convolve_left(Pq, v));
        worst = std::max(worst, pg_max_abs_diff(c1.f, c2.f, pts));
        ck.residual("dynamics.antiderivative", "antiderivative-operator-identities", 0, worst, 1e-10);
    }

    // Poisson brackets
    {
        PolyQP q = PolyQP::q(1, 0), p = PolyQP::p(1, 0);
        bool ok = approx_equal(poisson_bracket(q, p), PolyQP::constant(1, 1.0), 1e-14);
        PolyQP f = random_poly_deg2(ck.rng);
        ok = ok && approx_equal(poisson_bracket(f, f), PolyQP(1), 1e-12);
        ok = ok && approx_equal(poisson_bracket(q * q, p), Cplx{2.0, 0.0} * q, 1e-14);
        ck.boolean("dynamics.poisson", "poisson-bracket-identities", 4, ok);
    }

    // bracket algebra on states: antisymmetry, bilinearity, Leibniz, Jacobi
    {
        auto pts = random_points(ck.rng, 6, 2, 1.2);
        double anti_w = 0.0, leib_w = 0.0, jac_w = 0.0, lin_w = 0.0;
        for (int i = 0; i < 3; ++i) {
            PMechObservable B1 = p_mechanise(random_poly_deg2(ck.rng));
            PMechObservable B2 = p_mechanise(random_poly_deg2(ck.rng));
            PMechObservable B3 = p_mechanise(random_poly_deg2(ck.rng));
            HState v = random_coherent_combo(ck.rng, h);
            HState anti = universal_bracket_apply(B1, B2, v);
            HState anti2 = universal_bracket_apply(B2, B1, v);
            anti_w = std::max(anti_w, pg_max_abs_diff(anti.f, Cplx{-1.0, 0.0} * anti2.f, pts));

            Cplx al{0.7, -0.4};
            PMechObservable Bsum = p_mechanise(al * B1.poly + B3.poly);
            HState lin_lhs = universal_bracket_apply(Bsum, B2, v);
            HState lin_rhs{h, al * universal_bracket_apply(B1, B2, v).f +
                                  universal_bracket_apply(B3, B2, v).f};
            lin_w = std::max(lin_w, pg_max_abs_diff(lin_lhs.f, lin_rhs.f, pts));

            // Leibniz in the convolution algebra:
            // {B1 conv B2, B3} v = B1 * {B2,B3} v + {B1,B3} (B2 * v)
            HState Av = antiderivative_apply(v);
            HState leib_lhs{h, convolve_left(B1, convolve_left(B2, convolve_left(B3, Av))).f -
                                   convolve_left(B3, convolve_left(B1, convolve_left(B2, Av))).f};
            HState leib_rhs{h, convolve_left(B1, universal_bracket_apply(B2, B3, v)).f +
                                   universal_bracket_apply(B1, B3, convolve_left(B2, v)).f};
            leib_w = std::max(leib_w, pg_max_abs_diff(leib_lhs.f, leib_rhs.f, pts));

            // Jacobi for the operator bracket (U, V) -> (U V - V U) A
            auto conv = [&](const PMechObservable& B, const HState& u) { return convolve_left(B, u); };
            auto ubop = [&](const PMechObservable& Ba, const PMechObservable& Bb, const HState& u) {
                HState Au = antiderivative_apply(u);
                return HState{h, conv(Ba, conv(Bb, Au)).f - conv(Bb, conv(Ba, Au)).f};
            };
            auto nested = [&](const PMechObservable& Ba, const PMechObservable& Bb,
                              const PMechObservable& Bc, const HState& u) {
                // {Ba, {Bb, Bc}} u = (Ba {Bb,Bc} - {Bb,Bc} Ba) A u
                HState Au = antiderivative_apply(u);
                HState t1 = conv(Ba, ubop(Bb, Bc, Au));
                HState t2 = ubop(Bb, Bc, conv(Ba, Au));
                return HState{h, t1.f - t2.f};
            };
            HState j1 = nested(B1, B2, B3, v);
            HState j2 = nested(B2, B3, B1, v);
            HState j3 = nested(B3, B1, B2, v);
            PGFun jac = j1.f + j2.f + j3.f;
            double scale = 1.0;
            for (const auto& p : pts) scale = std::max(scale, std::abs(pg_eval(j1.f, p)));
            jac_w = std::max(jac_w, pg_max_abs_diff(jac, PGFun::zero(2), pts) / scale);
        }
        ck.residual("dynamics.bracket_antisymmetry", "universal-bracket-antisymmetry", 0, anti_w, 1e-10);
        ck.residual("dynamics.bracket_bilinear", "universal-bracket-bilinearity", 0, lin_w, 1e-10);
        ck.residual("dynamics.bracket_leibniz", "universal-bracket-leibniz", 0, leib_w, 1e-8);
        ck.residual("dynamics.bracket_jacobi", "universal-bracket-jacobi", 0, jac_w, 1e-8);
    }

    // quantum/classical correspondence of the bracket
    {
        double op_w = 0.0, cls_w = 0.0;
        auto pts = random_points(ck.rng, 6, 2, 1.2);
        for (int i = 0; i < 4; ++i) {
            PolyQP f1 = random_poly_deg2(ck.rng);
            PolyQP f2 = random_poly_deg2(ck.rng);
            PolyQP pb = poisson_bracket(f1, f2);
            // on every fiber the degree-<=2 bracket is convolution by the
            // p-mechanised Poisson bracket
            HState v = random_coherent_combo(ck.rng, h);
            HState lhs = universal_bracket_apply(p_mechanise(f1), p_mechanise(f2), v);
            HState rhs = convolve_left(p_mechanise(pb), v);
            op_w = std::max(op_w, pg_max_abs_diff(lhs.f, rhs.f, pts));
            // and the h = 0 pairing returns the classical bracket value
            for (int gpt = 0; gpt < 4; ++gpt) {
                std::vector<double> a{ck.rng.uniform(-1.2, 1.2)}, b{ck.rng.uniform(-1.2, 1.2)};
                Cplx paired = kernel_pairing(p_mechanise(pb), kernel_pure_state(a, b));
                cls_w = std::max(cls_w, std::abs(paired - pb.eval(a, b)));
            }
        }
        ck.residual("dynamics.bracket_is_poisson", "bracket-equals-poisson-convolution", 0, op_w, 1e-8);
        ck.residual("dynamics.bracket_correspondence", "bracket-poisson-correspondence", 0, cls_w, 1e-8);
    }

    // eigen_check behaviour
    {
        CoherentLabel l = random_label(ck.rng, h);
        HState v = coherent_v(l);
        PMechObservable am = annihilation_obs(1, 0);
        Cplx lam{l.a[0], l.b[0]};
        double good = eigen_check(am, v, lam, ck.rng);
        double bad = eigen_check(am, v, lam + Cplx{0.3, 0.0}, ck.rng);
        ck.residual("dynamics.eigen_check_true", "eigen-check-accepts-eigenpairs", 4, good, 1e-10);
        ck.boolean("dynamics.eigen_check_detects", "eigen-check-rejects-wrong-values", 0, bad > 1e-3);

        OscParams pr;
        PolyQP H = harmonic_hamiltonian(pr);
        HState vac = vacuum_hstate(h, 1);
        double ground = h / (4.0 * kPi);
        double at_ground = eigen_check(p_mechanise(H), vac, Cplx{ground, 0.0}, ck.rng);
        double off_ground = eigen_check(p_mechanise(H), vac, Cplx{ground * 1.5, 0.0}, ck.rng);
        ck.boolean("dynamics.ground_scan", "vacuum-ground-eigenvalue-scan", 0,
                   at_ground < 1e-9 && off_ground > 1e-3);
    }

    // kernel functional equals the state functional
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            PMechObservable B = p_mechanise(random_poly_deg2(ck.rng));
            HState v = random_coherent_combo(ck.rng, h);
            Cplx lhs = kernel_pairing(B, kernel_from_state(v));
            Cplx rhs = hh_inner(convolve_left(B, v), v);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        ck.residual("dynamics.kernel_functional", "kernel-states-evaluate-functionals", 0, worst, 1e-8);
    }

    // acceptance 6: classical limit of the energy observable
    {
        PMechObservable B = p_mechanise(parse_polyqp("q^2+p^2", 1));
        std::vector<double> a{1.0}, b{2.0};
        double prev = 1e300;
        bool monotone = true;
        double last = 0.0;
        for (double hh : {1.0, 0.5, 0.25, 0.125}) {
            CoherentLabel l{hh, a, b};
            Cplx val = kernel_pairing(B, kernel_coherent(l));
            double err = std::abs(val - Cplx{5.0, 0.0});
            if (err >= prev) monotone = false;
            prev = err;
            last = err;
        }
        ck.boolean("dynamics.classical_limit_monotone", "kernel-limit-monotone-in-h", 6, monotone);
        ck.residual("dynamics.classical_limit_small", "kernel-limit-final-error", 6, last, 0.05);
        // frozen regression value h/(4 pi) + h/(4 pi) = h/(2 pi) at h = 1/8
        ck.equals("dynamics.classical_limit_frozen", "kernel-limit-regression-value", 6, last,
                  0.125 / (2.0 * kPi), 1e-12);
    }

    // harmonic observable flow
    {
        OscParams pr{1.0, 1.0};
        PMechObservable B = p_mechanise(random_poly_deg2(ck.rng));
        PMechObservable b0 = harmonic_evolve_obs(B, 0.0, pr);
        bool ok = approx_equal(b0.poly, B.poly, 1e-14);
        PMechObservable bT = harmonic_evolve_obs(B, 2.0 * kPi / pr.omega, pr);
        ok = ok && approx_equal(bT.poly, B.poly, 1e-12);
        PMechObservable qq = harmonic_evolve_obs(Pq, 0.5 * kPi, pr);
        ok = ok && approx_equal(qq.poly, Pp.poly, 1e-12);
        ck.boolean("dynamics.harmonic_flow", "harmonic-substitution-flow", 0, ok);
    }

    // acceptance 5: forced-oscillator checks
    {
        OscParams pr{1.3, 0.9};
        ForceSpec force = ForceSpec::periodic(0.8, 1.7);
        QuadExp e(2);
        e.a(0, 0) = Cplx{1.0, 0.0};
        e.a(1, 1) = Cplx{1.2, 0.0};
        e.b[0] = Cplx{0.2, 0.1};
        PGFun B0 = PGFun::gaussian(e);
        MultiIndex mx(2);
        mx.e[0] = 1;
        B0 = B0 + PGFun::monomial(2, mx, Cplx{0.4, 0.0}) * B0;

        double worst = 0.0;
        double dt = 1e-4;
        for (double t : {0.2, 0.5, 0.8, 1.1, 1.4})
            for (double x : {-1.0, -0.2, 0.4, 0.9, 1.3})
                for (double y : {-1.2, -0.5, 0.1, 0.7, 1.2}) {
                    auto val = [&](double tt, double xx, double yy) {
                        return forced_solution_eval(B0, tt, pr, force, 0.0, xx, yy);
                    };
                    Cplx ddt = (val(t + dt, x, y) - val(t - dt, x, y)) / (2.0 * dt);
                    Cplx ddx = (val(t, x + dt, y) - val(t, x - dt, y)) / (2.0 * dt);
                    Cplx ddy = (val(t, x, y + dt) - val(t, x, y - dt)) / (2.0 * dt);
                    Cplx rhs = pr.omega * pr.omega * pr.mass * y * ddx - x / pr.mass * ddy -
                               2.0 * kPi * kI * y * force.eval(t) * val(t, x, y);
                    worst = std::max(worst, std::abs(ddt - rhs));
                }
        ck.residual("dynamics.forced_pde", "forced-solution-pde-residual", 5, worst, 1e-6);

        // trivial specialisations
        double triv = 0.0;
        triv = std::max(triv, std::abs(forced_solution_eval(B0, 0.0, pr, force, 0.0, 0.4, -0.3) -
                                       pg_eval(B0, {0.4, -0.3})));
        ForceSpec zero = ForceSpec::zero();
        double X = 0.4 * std::cos(pr.omega * 0.7) + pr.mass * pr.omega * (-0.3) * std::sin(pr.omega * 0.7);
        double Y = -0.4 * std::sin(pr.omega * 0.7) / (pr.mass * pr.omega) + (-0.3) * std::cos(pr.omega * 0.7);
        triv = std::max(triv, std::abs(forced_solution_eval(B0, 0.7, pr, zero, 0.0, 0.4, -0.3) -
                                       pg_eval(B0, {X, Y})));
        ck.residual("dynamics.forced_trivial", "forced-solution-specialisations", 5, triv, 1e-12);
    }

    // acceptance 5: substitution flow vs the RK4 characteristics
    {
        OscParams pr{1.0, 1.0};
        ForceSpec force = ForceSpec::periodic(1.0, 2.0);
        double t = 1.0;
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            double q0 = ck.rng.uniform(-1, 1), p0 = ck.rng.uniform(-1, 1);
            auto flow = classical_forced_flow(q0, p0, t, pr, force);
            // The substitution flow transports observables, so its
            // characteristics integrate Hamilton's equations with the force
            // schedule reversed in time: y'(tau) = X_H(t - tau)(y).
            auto deriv = [&](double tau, const std::vector<double>& y) {
                double z = force.eval(t - tau);
                return std::vector<double>{y[1] / pr.mass,
                                           -pr.mass * pr.omega * pr.omega * y[0] + z};
            };
            auto y = oracles::rk4(deriv, {q0, p0}, 0.0, t, 1e-4);
            worst = std::max(worst, std::abs(flow.first - y[0]));
            worst = std::max(worst, std::abs(flow.second - y[1]));
        }
        ck.residual("dynamics.flow_rk4", "substitution-flow-vs-characteristics", 5, worst, 1e-6);
    }

    // acceptance 5: resonance integrals and growth
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            double w = ck.rng.uniform(0.3, 2.5);
            double W = (i % 4 == 0) ? w : ck.rng.uniform(0.3, 2.5);
            double t = ck.rng.uniform(0.2, 6.0);
            auto [p1, p2] = resonance_psi(w, W, t);
            double q1 = oracles::simpson([&](double tau) { return std::cos(W * tau) * std::sin(w * tau); },
                                         0.0, t, 1e-12);
            double q2 = oracles::simpson([&](double tau) { return std::cos(W * tau) * std::cos(w * tau); },
                                         0.0, t, 1e-12);
            worst = std::max({worst, std::abs(p1 - q1), std::abs(p2 - q2)});
        }
        ck.residual("dynamics.resonance_psi", "periodic-force-integrals", 5, worst, 1e-9);
        ck.equals("dynamics.resonance_pi", "resonant-cosine-integral-value", 5,
                  resonance_psi(1.0, 1.0, kPi).second, 0.5 * kPi, 1e-12);

        OscParams pr{1.0, 1.0};
        ForceSpec res = ForceSpec::periodic(1.0, 1.0);
        double prev = 0.0;
        bool growing = true;
        for (double t : {10.0, 20.0, 40.0}) {
            auto [q, p] = classical_forced_flow(0.3, -0.2, t, pr, res);
            double amp = std::hypot(q, p);
            if (amp <= prev) growing = false;
            prev = amp;
        }
        ck.boolean("dynamics.resonance_growth", "resonant-amplitude-growth", 5, growing);
    }

    // acceptance 5: interaction-picture coherent trajectory
    {
        ForceSpec force = ForceSpec::periodic(0.7, 1.9);
        double phase_mod = 0.0, shift_err = 0.0, oracle_err = 0.0;
        for (int i = 0; i < 4; ++i) {
            CoherentLabel start = random_label(ck.rng, h, 0.9);
            double t = ck.rng.uniform(0.3, 2.0);
            auto traj = interaction_forced_trajectory(start, force, t);
            phase_mod = std::max(phase_mod, std::abs(std::abs(traj.phase) - 1.0));
            double S = z_sin_integral(force, 1.0, t), C = z_cos_integral(force, 1.0, t);
            shift_err = std::max({shift_err, std::abs(traj.label.a[0] - (start.a[0] + S)),
                                  std::abs(traj.label.b[0] - (start.b[0] - C))});

            // direct evaluation of the closed-form evolved state
            HState target = coherent_v(traj.label);
            double A = 0.5 * (start.a[0] * C - start.b[0] * S) / (h * h);
            GroupElement g0{A, {(start.b[0] - C) / h}, {-(start.a[0] + S) / h}};
            HState vac = vacuum_hstate(h, 1);
            Cplx f1 = traj.phase / std::exp(Cplx{0.0, kPi * (start.a[0] * C - start.b[0] * S) / h});
            for (const auto& pt : random_points(ck.rng, 6, 2, 1.2)) {
                GroupElement gpt{0.0, {pt[0]}, {pt[1]}};
                GroupElement moved = hg_multiply(g0, gpt);
                Cplx lhs = f1 * std::exp(Cplx{0.0, 2.0 * kPi * h * moved.s}) *
                           pg_eval(vac.f, {moved.x[0], moved.y[0]});
                Cplx rhs = traj.phase * pg_eval(target.f, pt);
                oracle_err = std::max(oracle_err, std::abs(lhs - rhs));
            }
        }
        ck.residual("dynamics.interaction_phase", "interaction-phase-unimodular", 5, phase_mod, 1e-10);
        ck.residual("dynamics.interaction_shift", "interaction-label-shift", 5, shift_err, 1e-12);
        ck.residual("dynamics.interaction_oracle", "interaction-direct-formula", 5, oracle_err, 1e-8);
    }

    // Schrodinger/Heisenberg consistency under the harmonic flow
    {
        OscParams pr{1.0, 1.0};
        PolyQP H = harmonic_hamiltonian(pr);
        PMechObservable B = p_mechanise(random_poly_deg2(ck.rng));
        CoherentLabel l0 = random_label(ck.rng, h, 0.8);
        auto state_at = [&](double t) {
            auto ev = harmonic_coherent_evolution(l0, t, pr);
            HState v = coherent_v(ev.label);
            return HState{h, ev.phase * v.f};
        };
        auto expect_at = [&](double t) {
            HState v = state_at(t);
            return hh_inner(convolve_left(B, v), v);
        };
        double t0v = 0.3, dt = 1e-4;
        Cplx deriv = (expect_at(t0v + dt) - expect_at(t0v - dt)) / (2.0 * dt);
        HState vt = state_at(t0v);
        Cplx rhs = hh_inner(universal_bracket_apply(B, p_mechanise(H), vt), vt);
        ck.residual("dynamics.schrodinger_heisenberg", "pictures-agree-on-expectations", 0,
                    std::abs(deriv - rhs), 1e-6);
    }

    // forced oscillator through the one-dimensional representation
    {
        OscParams pr{1.0, 1.0};
        ForceSpec force = ForceSpec::periodic(0.6, 2.3);
        PolyQP f0 = random_poly_deg2(ck.rng);
        double t = 0.9;
        double zs = z_sin_integral(force, pr.omega, t);
        double zc = z_cos_integral(force, pr.omega, t);
        double c = std::cos(pr.omega * t), s = std::sin(pr.omega * t);
        double worst = 0.0;
        for (int i = 0; i < 9; ++i) {
            double q = ck.rng.uniform(-1, 1), p = ck.rng.uniform(-1, 1);
            // pairing of the evolved observable against the pure-state kernel,
            // written in the rotated integration variables (u, v)
            QuadExp e(2);
            e.add_lin(0, Cplx{0.0, -2.0 * kPi * (zs + q * c + p * s)});
            e.add_lin(1, Cplx{0.0, -2.0 * kPi * (zc - q * s + p * c)});
            KernelState keff{0.0, pg_conj(PGFun::gaussian(e))};
            Cplx paired = kernel_pairing(p_mechanise(f0), keff);
            auto flow = classical_forced_flow(q, p, t, pr, force);
            Cplx direct = f0.eval({flow.first}, {flow.second});
            worst = std::max(worst, std::abs(paired - direct));
        }
        ck.residual("dynamics.forced_1d_rep", "evolved-observable-pairs-to-flow", 5, worst, 1e-6);
    }

    ck.rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return ck.rep;
}

// --------------------------------------------------------------- cantrans ---

namespace {

RealMat random_sp2(Rng& rng, double min_det_a) {
    for (int tries = 0; tries < 200; ++tries) {
        double th = rng.uniform(0.0, 2.0 * kPi);
        double lm = rng.uniform(-0.8, 0.8);
        double c1 = rng.uniform(-1.0, 1.0), c2 = rng.uniform(-1.0, 1.0);
        RealMat R(2, 2), D(2, 2), S1(2, 2), S2(2, 2);
        R.at(0, 0) = std::cos(th);
        R.at(0, 1) = std::sin(th);
        R.at(1, 0) = -std::sin(th);
        R.at(1, 1) = std::cos(th);
        D.at(0, 0) = std::exp(lm);
        D.at(1, 1) = std::exp(-lm);
        S1 = RealMat::identity(2);
        S1.at(1, 0) = c1;
        S2 = RealMat::identity(2);
        S2.at(0, 1) = c2;
        RealMat M = R * D * S1 * S2;
        if (std::abs(M.at(0, 0)) >= min_det_a) return M;
    }
    throw std::runtime_error("random_sp2: could not draw |A| away from zero");
}

}  // namespace

Report run_cantrans_suite(const RunConfig& cfg) {
    Checker ck(cfg, "cantrans", 0x63616e74);
    auto t0 = Clock::now();
    double h = cfg.h;

    // symplectic checks and the factorisation
    {
        double worst = symplectic_defect(RealMat::identity(2));
        RealMat rot(2, 2);
        rot.at(0, 0) = std::cos(0.7);
        rot.at(0, 1) = std::sin(0.7);
        rot.at(1, 0) = -std::sin(0.7);
        rot.at(1, 1) = std::cos(0.7);
        worst = std::max(worst, symplectic_defect(rot));
        RealMat bad = RealMat::identity(2);
        bad.at(0, 0) = 2.0;
        bool detects = symplectic_defect(bad) > 0.5;
        ck.residual("cantrans.symplectic_defect", "symplectic-defect-zero-on-sp", 0, worst, 1e-12);
        ck.boolean("cantrans.symplectic_detects", "defect-detects-non-symplectic", 0, detects);

        double prod = 0.0;
        for (int i = 0; i < 8; ++i) {
            RealMat M = random_sp2(ck.rng, 0.05);
            auto factors = sp_decompose(SymplecticMatrix(M));
            RealMat acc = RealMat::identity(2);
            for (const auto& f : factors) acc = acc * f.matrix();
            RealMat diff = acc - M;
            for (double v : diff.a) prod = std::max(prod, std::abs(v));
        }
        // the shear factor: [[1,0],[c,1]] must decompose and recombine
        RealMat shear = RealMat::identity(2);
        shear.at(1, 0) = 0.8;
        auto sf = sp_decompose(SymplecticMatrix(shear));
        RealMat acc = RealMat::identity(2);
        for (const auto& f : sf) acc = acc * f.matrix();
        RealMat d2 = acc - shear;
        for (double v : d2.a) prod = std::max(prod, std::abs(v));
        // singular top-left block goes through the J pre-composition
        auto jf = sp_decompose(SymplecticMatrix(symplectic_J(1)));
        RealMat accj = RealMat::identity(2);
        for (const auto& f : jf) accj = accj * f.matrix();
        RealMat dj = accj - symplectic_J(1);
        for (double v : dj.a) prod = std::max(prod, std::abs(v));
        ck.residual("cantrans.decompose", "five-factor-decomposition", 7, prod, 1e-10);
    }

    // vacuum is a fixed point of the Fourier factor up to the i^{n/2} phase
    {
        FockState f00 = fock_ground_state(h, 1);
        FockState jf = metaplectic_apply(MetaplecticFactor::j(1), f00);
        Cplx want = std::pow(kI, 0.5);
        auto pts = random_points(ck.rng, 8, 2, 1.2);
        double worst = pg_max_abs_diff(jf.f, want * f00.f, pts);
        FockState idf = metaplectic_apply(MetaplecticFactor::diag_block(RealMat::identity(1)), f00);
        worst = std::max(worst, pg_max_abs_diff(idf.f, f00.f, pts));
        ck.residual("cantrans.metaplectic_vacuum", "fourier-factor-fixes-the-vacuum", 7, worst, 1e-10);
    }

    // acceptance 7: factor-wise and composed covariance
    {
        auto pts = random_points(ck.rng, 6, 2, 1.2);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            RealMat M = random_sp2(ck.rng, 0.1);
            auto factors = sp_decompose(SymplecticMatrix(M));
            FockState f = fock_coherent_state(h, {ck.rng.uniform(-0.6, 0.6)}, {ck.rng.uniform(-0.6, 0.6)});
            FockState g2 = fock_coherent_state(h, {ck.rng.uniform(-0.6, 0.6)}, {ck.rng.uniform(-0.6, 0.6)});
            f.f = f.f + Cplx{0.7, 0.2} * g2.f;

            for (int gi = 0; gi < 2; ++gi) {
                GroupElement g = GroupElement::one_dof(ck.rng.uniform(-0.5, 0.5), ck.rng.uniform(-0.7, 0.7),
                                                       ck.rng.uniform(-0.7, 0.7));
                // factor-wise
                for (const auto& fac : factors) {
                    RealMat Mf = fac.matrix();
                    GroupElement gm = GroupElement::one_dof(
                        g.s, Mf.at(0, 0) * g.x[0] + Mf.at(0, 1) * g.y[0],
                        Mf.at(1, 0) * g.x[0] + Mf.at(1, 1) * g.y[0]);
                    FockState lhs = rho_h_apply(gm, metaplectic_apply(fac, f));
                    FockState rhs = metaplectic_apply(fac, rho_h_apply(g, f));
                    double scale = 1.0;
                    for (const auto& p : pts) scale = std::max(scale, std::abs(pg_eval(rhs.f, p)));
                    worst = std::max(worst, pg_max_abs_diff(lhs.f, rhs.f, pts) / scale);
                }
                // composed
                GroupElement gm = GroupElement::one_dof(g.s, M.at(0, 0) * g.x[0] + M.at(0, 1) * g.y[0],
                                                        M.at(1, 0) * g.x[0] + M.at(1, 1) * g.y[0]);
                FockState lhs = rho_h_apply(gm, metaplectic_apply(factors, f));
                FockState rhs = metaplectic_apply(factors, rho_h_apply(g, f));
                double scale = 1.0;
                for (const auto& p : pts) scale = std::max(scale, std::abs(pg_eval(rhs.f, p)));
                worst = std::max(worst, pg_max_abs_diff(lhs.f, rhs.f, pts) / scale);
            }
        }
        ck.residual("cantrans.metaplectic_covariance", "metaplectic-covariance", 7, worst, 1e-6);

        FockState f = fock_coherent_state(h, {0.4}, {-0.3});
        FockState out = metaplectic_apply(sp_decompose(SymplecticMatrix(random_sp2(ck.rng, 0.1))), f);
        ck.residual("cantrans.metaplectic_polarized", "metaplectic-image-polarized", 7,
                    fock_polarization_residual(out, pts), 1e-7);
    }

    // linear transformation of observables and kernels
    {
        SymplecticMatrix I2(RealMat::identity(2));
        PMechObservable B = p_mechanise(random_poly_deg2(ck.rng));
        bool ok = approx_equal(observable_transform_linear(B, I2).poly, B.poly, 1e-14);
        // the flip q -> p under the substitution matrix [[0,1],[-1,0]]
        RealMat flip(2, 2);
        flip.at(0, 1) = 1.0;
        flip.at(1, 0) = -1.0;
        PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
        PMechObservable fq = observable_transform_linear(Pq, SymplecticMatrix(flip));
        ok = ok && approx_equal(fq.poly, PolyQP::p(1, 0), 1e-14);
        ck.boolean("cantrans.observable_transform", "observable-substitution", 0, ok);

        // bracket preservation as an operator identity on states:
        // ub{B1 o M, B2 o M} v = (ub{B1,B2} o M) v (degree <= 2, where the
        // bracket itself is the p-mechanised Poisson bracket)
        double worst = 0.0;
        auto pts = random_points(ck.rng, 6, 2, 1.2);
        for (int i = 0; i < 3; ++i) {
            RealMat M = random_sp2(ck.rng, 0.05);
            SymplecticMatrix SM(M);
            PMechObservable B1 = p_mechanise(random_poly_deg2(ck.rng));
            PMechObservable B2 = p_mechanise(random_poly_deg2(ck.rng));
            HState v = random_coherent_combo(ck.rng, h);
            PMechObservable tb1 = observable_transform_linear(B1, SM);
            PMechObservable tb2 = observable_transform_linear(B2, SM);
            HState lhs = universal_bracket_apply(tb1, tb2, v);
            PMechObservable moved_bracket =
                observable_transform_linear(p_mechanise(poisson_bracket(B1.poly, B2.poly)), SM);
            HState rhs = convolve_left(moved_bracket, v);
            worst = std::max(worst, pg_max_abs_diff(lhs.f, rhs.f, pts));
            ok = ok && approx_equal(poisson_bracket(tb1.poly, tb2.poly), moved_bracket.poly, 1e-10);
        }
        ck.boolean("cantrans.bracket_preserved", "substitution-preserves-brackets", 0, ok);
        ck.residual("cantrans.bracket_preserved_states", "substitution-preserves-bracket-action", 0,
                    worst, 1e-8);

        // kernel transforms pair correctly against transformed observables:
        // pairing(B o M, l) = pairing(B, l o M^T), a unit-Jacobian change of
        // variables in the distributional pairing
        double kworst = 0.0;
        for (int i = 0; i < 3; ++i) {
            RealMat M = random_sp2(ck.rng, 0.05);
            SymplecticMatrix SM(M);
            PMechObservable B = p_mechanise(random_poly_deg2(ck.rng));
            CoherentLabel l = random_label(ck.rng, h, 0.8);
            KernelState kern = kernel_coherent(l);
            Cplx lhs = kernel_pairing(observable_transform_linear(B, SM), kern);
            Cplx rhs = kernel_pairing(B, kernel_transform_linear(kern, SM));
            kworst = std::max(kworst, std::abs(lhs - rhs));
        }
        ck.residual("cantrans.kernel_transform", "kernel-substitution-pairing", 0, kworst, 1e-9);
    }

    // acceptance 9: coupled oscillators
    {
        auto dec = coupled_decouple(1.0, 1.0, 1.0);
        double worst = std::abs(dec.alpha - 0.5 * kPi) + std::abs(dec.W1 - 0.5) + std::abs(dec.W2 - 1.5);
        auto dec0 = coupled_decouple(0.7, 1.9, 0.0);
        worst += std::abs(dec0.alpha) + std::abs(dec0.W1 - 0.7) + std::abs(dec0.W2 - 1.9);
        ck.residual("cantrans.decouple_values", "decoupling-angle-and-frequencies", 9, worst, 1e-12);

        double cross = 0.0;
        for (int i = 0; i < 50; ++i) {
            double A = ck.rng.uniform(0.2, 3.0), B = ck.rng.uniform(0.2, 3.0);
            double C = ck.rng.uniform(-0.95, 0.95) * 2.0 * std::sqrt(A * B);
            auto d = coupled_decouple(A, B, C);
            PMechObservable H = p_mechanise(coupled_hamiltonian(A, B, C));
            PMechObservable Ht = observable_transform_linear(H, coupled_rotation_matrix(d.alpha));
            // coefficient of q1 q2 in the transformed Hamiltonian
            MultiIndex a(2), b(2);
            a.e[0] = 1;
            a.e[1] = 1;
            Cplx coeff{};
            for (const auto& [key, c] : Ht.poly.terms())
                if (key.first == a && key.second == b) coeff = c;
            cross = std::max(cross, std::abs(coeff));
            // and the diagonal coefficients are W1/2, W2/2
            MultiIndex q1(2), q2(2);
            q1.e[0] = 2;
            q2.e[1] = 2;
            for (const auto& [key, c] : Ht.poly.terms()) {
                if (key.first == q1 && key.second == b) cross = std::max(cross, std::abs(c - 0.5 * d.W1));
                if (key.first == q2 && key.second == b) cross = std::max(cross, std::abs(c - 0.5 * d.W2));
            }
        }
        ck.residual("cantrans.decouple_cross", "cross-term-cancellation", 9, cross, 1e-12);

        // flow against RK4 of the coupled system
        double A = 1.4, B = 0.8, C = 0.6;
        auto d = coupled_decouple(A, B, C);
        SymplecticMatrix M = coupled_rotation_matrix(d.alpha);
        RealMat Minv = M.M.inverse();
        std::vector<double> z0{0.3, -0.2, 0.5, 0.1};
        // new coordinates Z = M^{-1} z0
        std::vector<double> Z(4, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) Z[static_cast<std::size_t>(i)] += Minv.at(i, j) * z0[static_cast<std::size_t>(j)];
        double t = 1.0;
        std::vector<double> Zt(4, 0.0);
        std::vector<PolyQP> coords{PolyQP::q(2, 0), PolyQP::q(2, 1), PolyQP::p(2, 0), PolyQP::p(2, 1)};
        for (int i = 0; i < 4; ++i) {
            PMechObservable ci = p_mechanise(coords[static_cast<std::size_t>(i)]);
            PMechObservable moved = coupled_flow(ci, t, d.W1, d.W2);
            Zt[static_cast<std::size_t>(i)] = moved.poly.eval({Z[0], Z[1]}, {Z[2], Z[3]}).real();
        }
        std::vector<double> zt(4, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) zt[static_cast<std::size_t>(i)] += M.M.at(i, j) * Zt[static_cast<std::size_t>(j)];
        auto deriv = [&](double, const std::vector<double>& y) {
            return std::vector<double>{y[2], y[3], -(A * y[0] + 0.5 * C * y[1]),
                                       -(B * y[1] + 0.5 * C * y[0])};
        };
        auto ref = oracles::rk4(deriv, z0, 0.0, t, 1e-4);
        double ferr = 0.0;
        for (int i = 0; i < 4; ++i) ferr = std::max(ferr, std::abs(zt[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]));
        ck.residual("cantrans.coupled_flow_rk4", "decoupled-flow-vs-integrator", 9, ferr, 1e-6);

        // mode periodicity
        PMechObservable probe = p_mechanise(PolyQP::q(2, 0) + PolyQP::p(2, 1));
        PMechObservable back = coupled_flow(probe, 2.0 * kPi / std::sqrt(d.W1), d.W1, d.W1);
        ck.boolean("cantrans.coupled_periodic", "decoupled-modes-are-periodic", 9,
                   approx_equal(back.poly, probe.poly, 1e-10));
    }

    // implicit-relation specs
    {
        ck.boolean("cantrans.spec_flip_valid", "flip-relations-bracket-condition", 8,
                   ct_spec_valid(ct_flip()));
        ck.boolean("cantrans.spec_rotshift_valid", "shifted-rotation-bracket-condition", 8,
                   ct_spec_valid(ct_rotshift(0.3, 1.0)));
    }

    // matrix elements: closed label forms against the convolution route
    {
        double worst = 0.0;
        std::vector<double> grid{-0.6, -0.2, 0.2, 0.6};
        PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
        PMechObservable Pp = p_mechanise(PolyQP::p(1, 0));
        for (double a : grid)
            for (double b : grid)
                for (double ap : grid)
                    for (double bp : grid) {
                        CoherentLabel l1 = CoherentLabel::one_dof(h, a, b);
                        CoherentLabel l2 = CoherentLabel::one_dof(h, ap, bp);
                        Cplx K = repker_hh(l1, l2);
                        Cplx mq = ct_matrix_element(Pq, l1, l2);
                        Cplx expect_q = 0.5 * (Cplx{a, b} + Cplx{ap, -bp}) * K;
                        worst = std::max(worst, std::abs(mq - expect_q));
                        Cplx mp = ct_matrix_element(Pp, l1, l2);
                        Cplx expect_p = 0.5 * (Cplx{b, -a} + Cplx{bp, ap}) * K;
                        worst = std::max(worst, std::abs(mp - expect_p));
                        HState v1 = coherent_v(l1), v2 = coherent_v(l2);
                        Cplx conv = hh_inner(convolve_left(Pq, v1), v2);
                        worst = std::max(worst, std::abs(mq - conv));
                    }
        ck.residual("cantrans.matrix_elements", "first-order-matrix-elements", 8, worst, 1e-10);

        // a degree-2 element against the convolution route
        double w2 = 0.0;
        PMechObservable Pqq = p_mechanise(PolyQP::q(1, 0) * PolyQP::q(1, 0));
        PMechObservable Pqp = p_mechanise(PolyQP::q(1, 0) * PolyQP::p(1, 0));
        for (int i = 0; i < 6; ++i) {
            CoherentLabel l1 = random_label(ck.rng, h, 0.8), l2 = random_label(ck.rng, h, 0.8);
            HState v1 = coherent_v(l1), v2 = coherent_v(l2);
            w2 = std::max(w2, std::abs(ct_matrix_element(Pqq, l1, l2) -
                                       hh_inner(convolve_left(Pqq, v1), v2)));
            w2 = std::max(w2, std::abs(ct_matrix_element(Pqp, l1, l2) -
                                       hh_inner(convolve_left(Pqp, v1), v2)));
        }
        ck.residual("cantrans.matrix_elements_deg2", "second-order-matrix-elements", 8, w2, 1e-10);
    }

    // acceptance 8: the integral equations for the two worked solutions
    {
        std::vector<std::vector<double>> grid;
        for (double a : {-0.6, 0.0, 0.6})
            for (double b : {-0.6, 0.0, 0.6})
                for (double ap : {-0.6, 0.0, 0.6})
                    for (double bp : {-0.6, 0.0, 0.6}) grid.push_back({a, b, ap, bp});

        double rflip = ct_residual(ct_flip(), ct_matrix_element_flip(1.0), grid);
        ck.residual("cantrans.residual_flip", "flip-solution-residual", 8, rflip, 1e-8);

        double rrot = 0.0;
        for (double t : {0.3, 0.5 * kPi})
            for (double C : {0.0, 1.0})
                rrot = std::max(rrot, ct_residual(ct_rotshift(t, C), ct_matrix_element_rotshift(1.0, t, C), grid));
        ck.residual("cantrans.residual_rotshift", "shifted-rotation-solution-residual", 8, rrot, 1e-8);

        // the printed expression passes only in the unshifted case; its C != 0
        // defect is surfaced here as a measured residual
        double printed0 = ct_residual(ct_rotshift(0.3, 0.0), ct_matrix_element_rotshift_printed(1.0, 0.3, 0.0), grid);
        ck.residual("cantrans.residual_rotshift_printed_c0", "printed-solution-unshifted-case", 8,
                    printed0, 1e-8);
        double printed1 = ct_residual(ct_rotshift(0.3, 1.0), ct_matrix_element_rotshift_printed(1.0, 0.3, 1.0), grid);
        ck.boolean("cantrans.residual_rotshift_printed_defect", "printed-solution-shift-defect-detected", 0,
                   printed1 > 1e-3);

        // the t = pi/2, C = 0 reduction coincides with the flip solution
        MatrixElementFn mf = ct_matrix_element_flip(1.0);
        MatrixElementFn mr = ct_matrix_element_rotshift(1.0, 0.5 * kPi, 0.0);
        double red = pg_max_abs_diff(mf.m, mr.m, grid);
        ck.residual("cantrans.rotshift_reduction", "quarter-turn-reduces-to-flip", 8, red, 1e-12);
    }

    // the coherent-state integral operator
    {
        // m = reproducing kernel: the identity on coherent combinations
        QuadExp e(4);
        Cplx w = kPi / h;
        e.add_quad(0, 2, w);
        e.add_quad(0, 3, -kI * w);
        e.add_quad(1, 2, kI * w);
        e.add_quad(1, 3, w);
        for (int j = 0; j < 4; ++j) e.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
        MatrixElementFn mid{h, PGFun::gaussian(e)};
        CoherentCombo combo{{Cplx{0.8, 0.1}, random_label(ck.rng, h, 0.7)},
                            {Cplx{-0.3, 0.5}, random_label(ck.rng, h, 0.7)}};
        HState straight = combo_to_hstate(combo);
        HState through = ct_operator_apply(mid, combo);
        auto pts = random_points(ck.rng, 8, 2, 1.2);
        ck.residual("cantrans.operator_identity", "kernel-expansion-resolves-identity", 8,
                    state_rel_diff(through, straight, pts), 1e-7);

        // linearity
        CoherentCombo half{{combo[0]}};
        CoherentCombo other{{combo[1]}};
        HState u1 = ct_operator_apply(mid, half);
        HState u2 = ct_operator_apply(mid, other);
        HState sum{h, u1.f + u2.f};
        ck.residual("cantrans.operator_linearity", "operator-linearity", 8,
                    state_rel_diff(sum, through, pts), 1e-8);

        // shifted rotation on the vacuum: a coherent state at the image label
        double t = 0.7, C = 0.8;
        MatrixElementFn mrot = ct_matrix_element_rotshift(h, t, C);
        CoherentCombo vac{{Cplx{1.0, 0.0}, CoherentLabel::one_dof(h, 0.0, 0.0)}};
        HState img = ct_operator_apply(mrot, vac);
        HState target = coherent_v(CoherentLabel::one_dof(h, -C, -C));
        Cplx scale = hh_inner(img, target) / hh_inner(target, target);
        double prop = pg_max_abs_diff(img.f, scale * target.f, pts);
        ck.residual("cantrans.operator_rotshift_vacuum", "image-of-the-vacuum-is-coherent", 8, prop, 1e-7);
        ck.equals("cantrans.operator_rotshift_unitary", "image-phase-is-unimodular", 8, std::abs(scale),
                  1.0, 1e-7);

        // direct integration-kernel oracle at C = 0 (where the printed
        // corollary kernel and the corrected solution coincide)
        MatrixElementFn mrot0 = ct_matrix_element_rotshift(h, t, 0.0);
        HState img0 = ct_operator_apply(mrot0, vac);
        QuadExp ko(4);  // (x, y, x', y')
        Cplx wr = std::exp(Cplx{0.0, -t});
        ko.add_quad(0, 3, kPi * h * wr * kI);
        ko.add_quad(0, 2, kPi * h * wr);
        ko.add_quad(1, 3, kPi * h * wr);
        ko.add_quad(1, 2, -kPi * h * wr * kI);
        for (int j = 0; j < 4; ++j) ko.add_quad(j, j, Cplx{-0.5 * kPi * h, 0.0});
        PGFun kernel = PGFun::gaussian(ko, Cplx{h, 0.0});  // derived measure constant h^n
        // (U v)(x,y) = Int kernel(x,y,x',y') v(x',y') dx' dy'
        HState v0 = combo_to_hstate(vac);
        std::vector<double> L(static_cast<std::size_t>(2) * 4, 0.0);
        L[0 * 4 + 2] = 1.0;
        L[1 * 4 + 3] = 1.0;
        PGFun vemb = pg_affine_sub(v0.f, L, 4, std::vector<Cplx>(2, Cplx{}));
        PGFun prod = kernel * vemb;
        PGFun uval = pg_integrate_out(prod, {2, 3});
        ck.residual("cantrans.operator_kernel_oracle", "operator-matches-integration-kernel", 8,
                    pg_max_abs_diff(img0.f, uval, pts), 1e-7);
    }

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    ck.residual("cantrans.runtime", "metaplectic-runtime-budget", 7, secs, 60.0);
    ck.rep.wall_seconds = secs;
    return ck.rep;
}

// ----------------------------------------------------------------- kepler ---

Report run_kepler_suite(const RunConfig& cfg) {
    Checker ck(cfg, "kepler", 0x6b65706c);
    auto t0 = Clock::now();

    // chart round trips and printed branch cases
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            std::array<double, 3> xi{ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2)};
            if (xi[0] * xi[0] + xi[1] * xi[1] < 1e-4) xi[0] += 0.5;
            auto back = cartesian_from_sph(sph_from_cartesian(xi));
            for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(back[static_cast<std::size_t>(j)] - xi[static_cast<std::size_t>(j)]));
        }
        SphericalPoint e1 = sph_from_cartesian({1.0, 0.0, 0.0});
        worst = std::max({worst, std::abs(e1.r - 1.0), std::abs(e1.theta), std::abs(e1.phi - 0.5 * kPi)});
        SphericalPoint e2 = sph_from_cartesian({0.0, 1.0, 0.0});
        worst = std::max(worst, std::abs(e2.theta - 0.5 * kPi));
        ck.residual("kepler.chart_roundtrip", "spherical-chart-branches", 0, worst, 1e-10);
    }

    // canonical momenta in the chart
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            std::array<double, 3> q{ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2)};
            if (q[0] * q[0] + q[1] * q[1] < 0.3) q[0] += 1.0;
            std::array<double, 3> p{ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2)};
            auto pt = sph_from_cartesian(q);
            auto m = spherical_momenta(q, p);
            auto back = cartesian_momenta(pt, m);
            for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(back[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(j)]));
            // the azimuthal momentum is the third angular momentum component
            double l3 = q[0] * p[1] - q[1] * p[0];
            worst = std::max(worst, std::abs(m.p_azim - l3));
        }
        ck.residual("kepler.momenta_roundtrip", "spherical-momenta-inversion", 0, worst, 1e-10);

        // {q_i, p_j} = delta_ij by finite differences through the chart
        PositionTransform T;
        T.n = 3;
        T.forward = [](const std::vector<double>& xi) {
            auto s = sph_from_cartesian({xi[0], xi[1], xi[2]});
            return std::vector<double>{s.r, s.theta, s.phi};
        };
        T.inverse = [](const std::vector<double>& z) {
            auto c = cartesian_from_sph({z[0], z[1], z[2]});
            return std::vector<double>{c[0], c[1], c[2]};
        };
        T.jacobian = [](const std::vector<double>& xi) {
            RealMat D(3, 3);
            double step = 1e-6;
            for (int j = 0; j < 3; ++j) {
                auto xp = xi, xm = xi;
                xp[static_cast<std::size_t>(j)] += step;
                xm[static_cast<std::size_t>(j)] -= step;
                auto sp = sph_from_cartesian({xp[0], xp[1], xp[2]});
                auto sm = sph_from_cartesian({xm[0], xm[1], xm[2]});
                D.at(0, j) = (sp.r - sm.r) / (2 * step);
                D.at(1, j) = (sp.theta - sm.theta) / (2 * step);
                D.at(2, j) = (sp.phi - sm.phi) / (2 * step);
            }
            return D;
        };
        std::vector<std::vector<double>> zpts, ppts;
        for (int i = 0; i < 6; ++i) {
            zpts.push_back({ck.rng.uniform(0.8, 2.0), ck.rng.uniform(0.4, 5.8), ck.rng.uniform(0.4, 2.6)});
            ppts.push_back(ck.rng.uniform_vector(3, -1.5, 1.5));
        }
        ck.residual("kepler.chart_canonical", "chart-momenta-are-canonical", 0,
                    canonical_check(T, zpts, ppts), 1e-6);
    }

    // special functions against their defining forms
    {
        double worst = std::abs(sph_harmonic(0, 0, 0.7, 1.1) - Cplx{1.0 / std::sqrt(4.0 * kPi), 0.0});
        worst = std::max(worst, std::abs(assoc_laguerre(0, 1, 0.37) - (1.0 - 0.37)));

        // orthonormality of the harmonics by product quadrature
        std::vector<double> xs, ws;
        oracles::gauss_legendre(24, xs, ws);
        int nphi = 24;
        for (int l = 0; l <= 4; ++l)
            for (int m = -l; m <= l; ++m)
                for (int l2 = l; l2 <= 4; ++l2)
                    for (int m2 = -l2; m2 <= l2; ++m2) {
                        Cplx acc{};
                        for (int i = 0; i < 24; ++i)
                            for (int k = 0; k < nphi; ++k) {
                                double ct = xs[static_cast<std::size_t>(i)];
                                double th = std::acos(ct);
                                double ph = 2.0 * kPi * k / nphi;
                                double w = ws[static_cast<std::size_t>(i)] * (2.0 * kPi / nphi);
                                acc += w * sph_harmonic(l, m, th, ph) * std::conj(sph_harmonic(l2, m2, th, ph));
                            }
                        Cplx want = (l == l2 && m == m2) ? Cplx{1.0, 0.0} : Cplx{};
                        worst = std::max(worst, std::abs(acc - want));
                    }
        ck.residual("kepler.harmonics_orthonormal", "spherical-harmonic-orthonormality", 0, worst, 1e-8);
    }

    // bound-state radial functions on the grid
    {
        double h = 2.0 * kPi;
        RadialGrid grid(60.0, cfg.kp_N);
        auto r100 = coulomb_eigenfunction_radial(QuantumNumbers(1, 0, 0), h, grid);
        auto r200 = coulomb_eigenfunction_radial(QuantumNumbers(2, 0, 0), h, grid);
        double dr = grid.dr();
        double n1 = 0.0, n2 = 0.0, ip = 0.0;
        for (int i = 0; i < grid.interior(); ++i) {
            double r = grid.r(i);
            n1 += r100[static_cast<std::size_t>(i)] * r100[static_cast<std::size_t>(i)] * r * r * dr;
            n2 += r200[static_cast<std::size_t>(i)] * r200[static_cast<std::size_t>(i)] * r * r * dr;
            ip += r100[static_cast<std::size_t>(i)] * r200[static_cast<std::size_t>(i)] * r * r * dr;
        }
        double worst = std::max({std::abs(n1 - 1.0), std::abs(n2 - 1.0), std::abs(ip)});
        ck.residual("kepler.eigenfunction_norms", "radial-normalisation-and-orthogonality", 10, worst,
                    1e-6);

        // the ground radial function is a pure exponential
        double kap = coulomb_kappa(1, h);
        double shape = 0.0;
        for (int i = 0; i < 50; ++i) {
            double r = grid.r(i * 20);
            double expct = 2.0 * std::pow(kap, 1.5) * std::exp(-kap * r);
            shape = std::max(shape, std::abs(r100[static_cast<std::size_t>(i * 20)] - expct));
        }
        ck.residual("kepler.ground_shape", "ground-state-exponential-form", 10, shape, 1e-10);

        // applying the discrete operator to the sampled eigenfunction
        Tridiag T = coulomb_hamiltonian_fd(0, h, grid);
        std::vector<double> u(static_cast<std::size_t>(grid.interior()));
        for (int i = 0; i < grid.interior(); ++i) u[static_cast<std::size_t>(i)] = grid.r(i) * r100[static_cast<std::size_t>(i)];
        double num = 0.0, den = 0.0;
        for (int i = 1; i + 1 < grid.interior(); ++i) {
            double hu = T.diag[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)] +
                        T.off[static_cast<std::size_t>(i) - 1] * u[static_cast<std::size_t>(i) - 1] +
                        T.off[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i) + 1];
            num += hu * u[static_cast<std::size_t>(i)];
            den += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        }
        double rayleigh = num / den;
        double E1 = coulomb_energy(1, h);
        ck.residual("kepler.fd_apply", "discrete-operator-on-sampled-state", 10,
                    std::abs(rayleigh - E1) / std::abs(E1), 1e-3);
    }

    // acceptance 10: spectrum by finite differences
    {
        double h = 2.0 * kPi;
        RadialGrid grid(cfg.kp_rmax, cfg.kp_N);
        auto eigs = fd_spectrum(0, h, grid, 3);
        ck.equals("kepler.fd_ground", "atomic-units-ground-state", 10, eigs[0], -0.5, 0.005);
        double ratio = 0.0;
        for (int n = 1; n <= 3; ++n)
            ratio = std::max(ratio, std::abs(eigs[static_cast<std::size_t>(n - 1)] * n * n / eigs[0] - 1.0));
        ck.residual("kepler.fd_ratios_h1", "inverse-square-level-ratios", 10, ratio, 0.01);

        double h2 = cfg.kp_h2;
        // the length scale goes like (h / 2 pi)^2; shrink the box accordingly
        RadialGrid grid2(cfg.kp_rmax * std::pow(h2 / (2.0 * kPi), 2.0), cfg.kp_N);
        auto eigs2 = fd_spectrum(0, h2, grid2, 3);
        double ratio2 = 0.0;
        for (int n = 1; n <= 3; ++n)
            ratio2 = std::max(ratio2, std::abs(eigs2[static_cast<std::size_t>(n - 1)] * n * n / eigs2[0] - 1.0));
        ck.residual("kepler.fd_ratios_h2", "inverse-square-ratios-second-h", 10, ratio2, 0.01);

        // degeneracy across angular momentum
        RadialGrid dgrid(cfg.kp_rmax, cfg.kp_N / 2);
        double deg = 0.0;
        for (int n = 2; n <= 3; ++n) {
            std::vector<double> per_l;
            for (int l = 0; l < n; ++l) {
                auto e = fd_spectrum(l, h, dgrid, n - l);
                per_l.push_back(e[static_cast<std::size_t>(n - l - 1)]);
            }
            for (double v : per_l) deg = std::max(deg, std::abs(v - per_l[0]) / std::abs(per_l[0]));
        }
        ck.residual("kepler.fd_degeneracy", "level-degeneracy-across-l", 10, deg, 1e-3);

        auto rows = coulomb_spectrum_report(h, 3, dgrid);
        ck.boolean("kepler.discrepancy_report", "printed-constant-discrepancy-reported", 10,
                   rows.size() == 6 && rows[0].rel_discrepancy > 0.1);
    }

    // spherical representation equals the pulled-back Schrodinger action
    {
        double h = cfg.h;
        QuadExp e(3);
        e.a(0, 0) = Cplx{0.8, 0.0};
        e.a(1, 1) = Cplx{1.1, 0.0};
        e.a(2, 2) = Cplx{0.9, 0.0};
        e.b[0] = Cplx{0.2, 0.3};
        PGFun eta = PGFun::gaussian(e);
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            GroupElement g = GroupElement::identity(3);
            g.s = ck.rng.uniform(-0.5, 0.5);
            for (auto& v : g.x) v = ck.rng.uniform(-0.5, 0.5);
            for (auto& v : g.y) v = ck.rng.uniform(-0.5, 0.5);
            SphFn psi = sphfn_from_pgfun(eta);
            SphFn moved = rho_hP_apply(g, h, psi);
            std::array<double, 3> xi{ck.rng.uniform(-1.5, 1.5), ck.rng.uniform(-1.5, 1.5),
                                     ck.rng.uniform(-1.5, 1.5)};
            if (xi[0] * xi[0] + xi[1] * xi[1] < 0.3) xi[0] += 1.0;
            std::array<double, 3> shifted{xi[0] + h * g.y[0], xi[1] + h * g.y[1], xi[2] + h * g.y[2]};
            if (shifted[0] * shifted[0] + shifted[1] * shifted[1] < 1e-3) continue;
            SphericalPoint pt = sph_from_cartesian(xi);
            // Schrodinger action evaluated in cartesian coordinates
            double xy = g.x[0] * g.y[0] + g.x[1] * g.y[1] + g.x[2] * g.y[2];
            double xxi = g.x[0] * xi[0] + g.x[1] * xi[1] + g.x[2] * xi[2];
            Cplx phase = std::exp(Cplx{0.0, -2.0 * kPi * h * g.s + kPi * h * xy + 2.0 * kPi * xxi});
            Cplx want = phase * pg_eval(eta, {shifted[0], shifted[1], shifted[2]});
            worst = std::max(worst, std::abs(moved(pt) - want));
            GroupElement id = GroupElement::identity(3);
            worst = std::max(worst, std::abs(rho_hP_apply(id, h, psi)(pt) - psi(pt)));
        }
        ck.residual("kepler.rho_hp", "spherical-representation-pullback", 0, worst, 1e-8);

        // L3 eigenvalue on a harmonic with azimuthal index 1
        SphFn y21 = [](const SphericalPoint& pt) { return sph_harmonic(2, 1, pt.phi, pt.theta); };
        SphFn l3y = rho_hP_L3_apply(h, y21);
        double l3err = 0.0;
        for (int i = 0; i < 5; ++i) {
            SphericalPoint pt{1.0, ck.rng.uniform(0.3, 5.9), ck.rng.uniform(0.4, 2.7)};
            Cplx want = h / (2.0 * kPi) * y21(pt);
            l3err = std::max(l3err, std::abs(l3y(pt) - want));
        }
        ck.residual("kepler.L3", "third-angular-momentum-eigenvalue", 0, l3err, 1e-8);
    }

    // general position transforms
    {
        double h = cfg.h;
        PositionTransform ident;
        ident.n = 1;
        ident.forward = [](const std::vector<double>& x) { return x; };
        ident.inverse = [](const std::vector<double>& x) { return x; };
        ident.jacobian = [](const std::vector<double>&) { return RealMat::identity(1); };
        Cplx pos_phys = position_multiplier(ident, 0, {0.7});
        Cplx pos_printed = position_multiplier(ident, 0, {0.7}, TransformSign::Printed);
        auto mom_phys = momentum_coefficients(ident, 0, h, {0.7});
        auto mom_printed = momentum_coefficients(ident, 0, h, {0.7}, TransformSign::Printed);
        bool ok = std::abs(pos_phys - Cplx{0.7, 0.0}) < 1e-14 &&
                  std::abs(pos_printed - Cplx{-0.7, 0.0}) < 1e-14 &&
                  std::abs(mom_phys[0] - Cplx{h, 0.0} / (2.0 * kPi * kI)) < 1e-14 &&
                  std::abs(mom_printed[0] - Cplx{-h, 0.0}) < 1e-14;
        ck.boolean("kepler.transform_signs", "position-transform-sign-conventions", 0, ok);

        PositionTransform cubic;
        cubic.n = 3;
        cubic.forward = [](const std::vector<double>& x) {
            return std::vector<double>{x[0] * x[0] * x[0] + x[0], x[1], x[2]};
        };
        cubic.inverse = [](const std::vector<double>& z) {
            double lo = -3.0, hi = 3.0;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                (mid * mid * mid + mid < z[0] ? lo : hi) = mid;
            }
            return std::vector<double>{0.5 * (lo + hi), z[1], z[2]};
        };
        cubic.jacobian = [](const std::vector<double>& x) {
            RealMat D = RealMat::identity(3);
            D.at(0, 0) = 3.0 * x[0] * x[0] + 1.0;
            return D;
        };
        std::vector<std::vector<double>> zp, pp;
        for (int i = 0; i < 5; ++i) {
            double x0 = ck.rng.uniform(-1.2, 1.2);
            zp.push_back({x0 * x0 * x0 + x0, ck.rng.uniform(-1, 1), ck.rng.uniform(-1, 1)});
            pp.push_back(ck.rng.uniform_vector(3, -1, 1));
        }
        ck.residual("kepler.transform_canonical", "monotone-map-is-canonical", 0,
                    canonical_check(cubic, zp, pp), 1e-6);
    }

    // Klauder states and the shift-dynamics space
    {
        double h = cfg.h;
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            KlauderLabel lbl{ck.rng.uniform(0.3, 1.2), ck.rng.uniform(-2, 2), ck.rng.uniform(0.2, 2.9),
                             ck.rng.uniform(0, 6.2), ck.rng.uniform(0, 6.2)};
            BSCoeffs cs = klauder_cs(lbl, h, 24);
            worst = std::max(worst, std::abs(cs.norm() - 1.0));
        }
        ck.residual("kepler.klauder_norm", "coherent-state-normalisation", 11, worst, 1e-10);

        KlauderLabel zero{0.0, 0.5, 1.0, 0.7, 0.3};
        BSCoeffs cs0 = klauder_cs(zero, h, 8);
        double outside = 0.0;
        for (int n = 1; n < cs0.levels(); ++n)
            for (const auto& ll : cs0.c[static_cast<std::size_t>(n)])
                for (const auto& v : ll) outside = std::max(outside, std::abs(v));
        ck.residual("kepler.klauder_sigma0", "zero-width-keeps-one-level", 11, outside, 1e-14);

        // theta_bar = 0 collapses the angular block to the m = l corner
        AMCoeffs corner = klauder_am_state(2, 0.0, 0.0, 0.0);
        double offc = 0.0;
        for (int l = 0; l <= 2; ++l)
            for (int m = -l; m <= l; ++m) {
                Cplx v = corner.c[static_cast<std::size_t>(l)][static_cast<std::size_t>(m + l)];
                if (m != l) offc = std::max(offc, std::abs(v));
            }
        ck.residual("kepler.klauder_corner", "aligned-label-hits-top-weight", 11, offc, 1e-14);

        // acceptance 11: resolution of identity on the angular blocks
        double d0 = am_resolution_check(0, 16, 8);
        double d1 = am_resolution_check(1, 32, 16);
        ck.residual("kepler.am_resolution_0", "angular-resolution-level-0", 11, d0, 1e-10);
        ck.residual("kepler.am_resolution_1", "angular-resolution-level-1", 11, d1, 1e-6);

        // a state outside the block pairs to zero through the radial overlap
        RadialGrid grid(60.0, 1500);
        double hk = 2.0 * kPi;
        auto r10 = coulomb_eigenfunction_radial(QuantumNumbers(1, 0, 0), hk, grid);
        auto r20 = coulomb_eigenfunction_radial(QuantumNumbers(2, 0, 0), hk, grid);
        double overlap = 0.0;
        for (int i = 0; i < grid.interior(); ++i)
            overlap += r10[static_cast<std::size_t>(i)] * r20[static_cast<std::size_t>(i)] * grid.r(i) * grid.r(i) * grid.dr();
        ck.residual("kepler.am_outside", "outside-states-project-to-zero", 11, std::abs(overlap), 1e-6);

        // acceptance 11: shift dynamics equals per-level phases
        KlauderLabel lbl{0.8, 0.4, 1.1, 0.8, 0.2};
        BSCoeffs psi = klauder_cs(lbl, h, 24);
        // mix two coherent states so the test state is not itself stationary
        KlauderLabel lbl2{0.5, -0.3, 0.9, 1.3, 0.5};
        BSCoeffs psi2 = klauder_cs(lbl2, h, 24);
        for (int n = 0; n < psi.levels() && n < psi2.levels(); ++n)
            for (std::size_t l = 0; l < psi2.c[static_cast<std::size_t>(n)].size(); ++l)
                for (std::size_t m = 0; m < psi2.c[static_cast<std::size_t>(n)][l].size(); ++m)
                    psi.c[static_cast<std::size_t>(n)][l][m] += Cplx{0.4, -0.2} * psi2.c[static_cast<std::size_t>(n)][l][m];

        double shift_err = 0.0;
        for (double t : {0.3, 1.1}) {
            BSCoeffs evolved = kc_time_evolve(psi, t);
            for (int i = 0; i < 5; ++i) {
                KlauderLabel probe{ck.rng.uniform(0.3, 1.0), ck.rng.uniform(-1.5, 1.5),
                                   ck.rng.uniform(0.3, 2.8), ck.rng.uniform(0, 6.2), ck.rng.uniform(0, 6.2)};
                Cplx lhs = kc_transform_eval(evolved, probe, 24);
                KlauderLabel shifted = probe;
                shifted.gamma += kc_shift_rate(h) * t;
                Cplx rhs = kc_transform_eval(psi, shifted, 24);
                shift_err = std::max(shift_err, std::abs(lhs - rhs));
            }
        }
        ck.residual("kepler.kc_shift", "dynamics-is-a-shift", 11, shift_err, 1e-12);

        // stationary states keep |f| constant in time
        BSCoeffs stat;
        stat.h = h;
        stat.c.assign(3, {});
        stat.c[1] = klauder_am_state(1, 0.4, 0.6, 0.8).c;
        KlauderLabel probe{0.6, 0.2, 1.0, 0.5, 0.9};
        double mod0 = std::abs(kc_transform_eval(stat, probe, 16));
        double mod1 = std::abs(kc_transform_eval(kc_time_evolve(stat, 0.9), probe, 16));
        ck.residual("kepler.kc_stationary", "stationary-modulus-constant", 11, std::abs(mod1 - mod0),
                    1e-12);

        // degeneracy count: level n hosts n^2 eigenfunctions
        bool counts = true;
        for (int n = 1; n <= 3; ++n) {
            int cnt = 0;
            for (int l = 0; l < n; ++l) cnt += 2 * l + 1;
            counts = counts && (cnt == n * n);
        }
        ck.boolean("kepler.kc_degeneracy", "level-degeneracy-count", 11, counts);
    }

    // angular-momentum commutators on the quantum side: the three (L, L)
    // relations [L_i, L_j] = i (h/2 pi) L_k, checked exactly on
    // polynomial-times-Gaussian states, and the azimuthal eigenvalue on
    // solid-harmonic states
    {
        double h = cfg.h;
        Cplx ihbar = kI * h / (2.0 * kPi);
        QuadExp g(3);
        for (int j = 0; j < 3; ++j) g.a(j, j) = Cplx{1.0, 0.0};
        MultiIndex m1(3);
        m1.e[0] = 1;
        m1.e[2] = 1;
        PGFun psi = PGFun::term(Cplx{0.8, -0.3}, m1, g) + PGFun::gaussian(g, Cplx{0.5, 0.2});
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 6; ++i) pts.push_back(ck.rng.uniform_vector(3, -1.3, 1.3));
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            int j = (i + 1) % 3, k = (i + 2) % 3;
            PGFun comm = angular_momentum_apply(i, h, angular_momentum_apply(j, h, psi)) -
                         angular_momentum_apply(j, h, angular_momentum_apply(i, h, psi));
            PGFun want = ihbar * angular_momentum_apply(k, h, psi);
            worst = std::max(worst, pg_max_abs_diff(comm, want, pts));
        }
        ck.residual("kepler.o4_brackets", "angular-momentum-commutators", 0, worst, 1e-12);

        // solid harmonic (xi1 + i xi2)^l e^{-r^2}: azimuthal eigenvalue l hbar
        for (int l : {1, 2}) {
            PolyMap lin;
            MultiIndex ex(3), ey(3);
            ex.e[0] = 1;
            ey.e[1] = 1;
            lin[ex] = Cplx{1.0, 0.0};
            lin[ey] = kI;
            PolyMap pw = poly_pow(lin, l);
            PGFun solid(3);
            for (const auto& [mi, c] : pw) {
                PGTerm t{c, mi, g};
                solid.add_term(t);
            }
            solid.canonicalize();
            PGFun l3 = angular_momentum_apply(2, h, solid);
            PGFun want = Cplx{l * h / (2.0 * kPi), 0.0} * solid;
            worst = std::max(worst, pg_max_abs_diff(l3, want, pts));
        }
        ck.residual("kepler.L3_solid_harmonics", "azimuthal-eigenvalues-on-solid-harmonics", 0, worst,
                    1e-12);
    }

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    ck.residual("kepler.runtime", "spectrum-runtime-budget", 10, secs, 30.0);
    ck.rep.wall_seconds = secs;
    return ck.rep;
}

}  // namespace pmech::verify
