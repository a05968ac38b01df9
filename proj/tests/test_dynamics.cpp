#include <doctest.h>

#include <cmath>

#include "pmech/dynamics.hpp"
#include "pmech/oracles.hpp"
#include "pmech/rng.hpp"

using namespace pmech;

namespace {

std::vector<std::vector<double>> pts2(Rng& rng, int n = 8) {
    std::vector<std::vector<double>> p;
    for (int i = 0; i < n; ++i) p.push_back({rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3)});
    return p;
}

}  // namespace

TEST_CASE("p-mechanisation round-trips through the one-dimensional representation") {
    Rng rng(51);
    PolyQP f = parse_polyqp("2q^2 - 0.5*q*p + p - 3", 1);
    PMechObservable B = p_mechanise(f);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> a{rng.uniform(-1.5, 1.5)}, b{rng.uniform(-1.5, 1.5)};
        CHECK(std::abs(pure_state_eval(a, b, B) - f.eval(a, b)) < 1e-12);
    }
}

TEST_CASE("annihilation eigen-relation and the vacuum ladder") {
    double h = 1.0;
    Rng rng(3);
    auto pts = pts2(rng);
    CoherentLabel l = CoherentLabel::one_dof(h, 0.7, -1.1);
    HState v = coherent_v(l);
    HState av = convolve_left(annihilation_obs(1, 0), v);
    CHECK(pg_max_abs_diff(av.f, Cplx{0.7, -1.1} * v.f, pts) < 1e-12);

    // k = 0 of the eigenfunction family is the vacuum
    OscParams pr;
    CHECK(pg_max_abs_diff(harmonic_eigenfunction(0, h, pr).f, vacuum_hstate(h, 1).f, pts) < 1e-15);

    // lowering the vacuum annihilates it
    HState a0 = convolve_left(annihilation_obs(1, 0), vacuum_hstate(h, 1));
    CHECK(pg_max_abs_diff(a0.f, PGFun::zero(2), pts) < 1e-14);
}

TEST_CASE("antiderivative operator identities") {
    double h = 0.75;
    HState v = coherent_v(CoherentLabel::one_dof(h, 0.4, 0.2));
    HState av = antiderivative_apply(v);
    Rng rng(6);
    auto pts = pts2(rng);
    // multiplication by 2 pi / (i h)
    CHECK(pg_max_abs_diff(av.f, 2.0 * kPi / (kI * h) * v.f, pts) < 1e-14);
    CHECK_THROWS(antiderivative_apply(HState{0.0, PGFun::zero(2)}));
}

TEST_CASE("universal bracket: antisymmetry and the canonical pair") {
    double h = 1.0;
    Rng rng(12);
    auto pts = pts2(rng);
    PMechObservable B = p_mechanise(parse_polyqp("q^2+0.3*p", 1));
    HState v = coherent_v(CoherentLabel::one_dof(h, -0.4, 0.8));
    HState self = universal_bracket_apply(B, B, v);
    CHECK(pg_max_abs_diff(self.f, PGFun::zero(2), pts) < 1e-13);

    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    PMechObservable Pp = p_mechanise(PolyQP::p(1, 0));
    HState ub = universal_bracket_apply(Pq, Pp, v);
    CHECK(pg_max_abs_diff(ub.f, v.f, pts) < 1e-12);
}

TEST_CASE("poisson bracket identities") {
    PolyQP q = PolyQP::q(1, 0), p = PolyQP::p(1, 0);
    CHECK(approx_equal(poisson_bracket(q, p), PolyQP::constant(1, 1.0), 1e-15));
    CHECK(approx_equal(poisson_bracket(q * q, p), Cplx{2.0, 0.0} * q, 1e-15));
    PolyQP f = parse_polyqp("q^2*p - 0.7*p^2 + q", 1);
    CHECK(approx_equal(poisson_bracket(f, f), PolyQP(1), 1e-13));
    // two degrees of freedom: {q_i, p_j} = delta_ij
    CHECK(approx_equal(poisson_bracket(PolyQP::q(2, 0), PolyQP::p(2, 1)), PolyQP(2), 1e-15));
    CHECK(approx_equal(poisson_bracket(PolyQP::q(2, 1), PolyQP::p(2, 1)), PolyQP::constant(2, 1.0),
                       1e-15));
}

TEST_CASE("harmonic flow of observables") {
    OscParams pr{1.0, 1.0};
    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    PMechObservable quarter = harmonic_evolve_obs(Pq, 0.5 * kPi, pr);
    CHECK(approx_equal(quarter.poly, PolyQP::p(1, 0), 1e-14));

    OscParams pr2{1.7, 0.6};
    PMechObservable B = p_mechanise(parse_polyqp("q^2 - p + 0.4", 1));
    PMechObservable full = harmonic_evolve_obs(B, 2.0 * kPi / pr2.omega, pr2);
    CHECK(approx_equal(full.poly, B.poly, 1e-12));
}

TEST_CASE("resonance integrals against quadrature, both branches") {
    auto z0 = resonance_psi(1.3, 0.4, 0.0);
    CHECK(z0.first == 0.0);
    CHECK(z0.second == 0.0);

    auto res = resonance_psi(1.0, 1.0, kPi);
    CHECK(res.second == doctest::Approx(0.5 * kPi).epsilon(1e-14));

    Rng rng(1);
    for (int i = 0; i < 8; ++i) {
        double w = rng.uniform(0.4, 2.0);
        double W = (i % 2 == 0) ? w : rng.uniform(0.4, 2.0);
        double t = rng.uniform(0.1, 5.0);
        auto [p1, p2] = resonance_psi(w, W, t);
        double q1 = oracles::simpson([&](double tau) { return std::cos(W * tau) * std::sin(w * tau); },
                                     0.0, t, 1e-12);
        double q2 = oracles::simpson([&](double tau) { return std::cos(W * tau) * std::cos(w * tau); },
                                     0.0, t, 1e-12);
        CHECK(std::abs(p1 - q1) < 1e-10);
        CHECK(std::abs(p2 - q2) < 1e-10);
    }

    // near-resonant continuity across the branch switch
    auto near = resonance_psi(1.0, 1.0 + 0.9e-9, 2.3);
    auto at = resonance_psi(1.0, 1.0, 2.3);
    CHECK(std::abs(near.first - at.first) < 1e-7);
    CHECK(std::abs(near.second - at.second) < 1e-7);
}

TEST_CASE("classical flow: free rotation and forced specialisations") {
    OscParams pr{1.0, 1.0};
    auto [q, p] = classical_forced_flow(1.0, 0.0, 0.5 * kPi, pr, ForceSpec::zero());
    CHECK(q == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p == doctest::Approx(-1.0).epsilon(1e-12));

    ForceSpec force = ForceSpec::periodic(0.9, 1.4);
    auto [q0, p0] = classical_forced_flow(0.3, -0.8, 0.0, pr, force);
    CHECK(q0 == 0.3);
    CHECK(p0 == -0.8);
}

TEST_CASE("interaction picture: zero force fixes the label") {
    CoherentLabel start = CoherentLabel::one_dof(1.0, 0.5, -0.2);
    auto traj = interaction_forced_trajectory(start, ForceSpec::zero(), 1.7);
    CHECK(traj.label.a[0] == 0.5);
    CHECK(traj.label.b[0] == -0.2);
    CHECK(std::abs(traj.phase - Cplx{1.0, 0.0}) < 1e-14);

    auto forced = interaction_forced_trajectory(start, ForceSpec::periodic(0.8, 1.3), 1.1);
    CHECK(std::abs(std::abs(forced.phase) - 1.0) < 1e-12);
}

TEST_CASE("tabulated forces integrate through adaptive quadrature") {
    ForceSpec tab = ForceSpec::tabulated([](double t) { return 0.8 * std::cos(1.3 * t); }, 1e-11);
    ForceSpec per = ForceSpec::periodic(0.8, 1.3);
    for (double t : {0.4, 1.9}) {
        CHECK(std::abs(z_sin_integral(tab, 1.0, t) - z_sin_integral(per, 1.0, t)) < 1e-9);
        CHECK(std::abs(z_cos_integral(tab, 1.0, t) - z_cos_integral(per, 1.0, t)) < 1e-9);
    }
}

TEST_CASE("eigen check distinguishes true from false eigenvalues") {
    double h = 1.0;
    Rng rng(40);
    CoherentLabel l = CoherentLabel::one_dof(h, 1.0, 0.3);
    HState v = coherent_v(l);
    PMechObservable am = annihilation_obs(1, 0);
    CHECK(eigen_check(am, v, Cplx{1.0, 0.3}, rng) < 1e-10);
    CHECK(eigen_check(am, v, Cplx{1.0, 0.5}, rng) > 1e-3);
}

TEST_CASE("kernel pairing: position value and state functional") {
    double h = 1.0;
    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    Cplx a_val = kernel_pairing(Pq, kernel_pure_state({1.7}, {0.4}));
    CHECK(std::abs(a_val - Cplx{1.7, 0.0}) < 1e-13);

    Rng rng(60);
    HState v = coherent_v(CoherentLabel::one_dof(h, -0.6, 0.9));
    PMechObservable B = p_mechanise(parse_polyqp("q^2 + q*p - p", 1));
    Cplx via_kernel = kernel_pairing(B, kernel_from_state(v));
    Cplx direct = hh_inner(convolve_left(B, v), v);
    CHECK(std::abs(via_kernel - direct) < 1e-10);
}

TEST_CASE("two degrees of freedom: brackets and eigen-relations per coordinate") {
    double h = 1.2;
    Rng rng(29);
    CoherentLabel l{h, {0.6, -0.4}, {-0.2, 0.8}};
    HState v = coherent_v(l);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(rng.uniform_vector(4, -1.0, 1.0));

    // annihilation along each coordinate picks out its own label
    for (int j = 0; j < 2; ++j) {
        HState av = convolve_left(annihilation_obs(2, j), v);
        Cplx lam{l.a[static_cast<std::size_t>(j)], l.b[static_cast<std::size_t>(j)]};
        CHECK(pg_max_abs_diff(av.f, lam * v.f, pts) < 1e-11);
    }

    // canonical pairs: same-coordinate bracket is the identity, mixed is zero
    PMechObservable q1 = p_mechanise(PolyQP::q(2, 0));
    PMechObservable p1 = p_mechanise(PolyQP::p(2, 0));
    PMechObservable p2 = p_mechanise(PolyQP::p(2, 1));
    HState same = universal_bracket_apply(q1, p1, v);
    CHECK(pg_max_abs_diff(same.f, v.f, pts) < 1e-11);
    HState mixed = universal_bracket_apply(q1, p2, v);
    CHECK(pg_max_abs_diff(mixed.f, PGFun::zero(4), pts) < 1e-12);

    // pure-state evaluation of a genuinely two-coordinate observable
    PolyQP cross = PolyQP::q(2, 0) * PolyQP::p(2, 1) + PolyQP::q(2, 1);
    Cplx val = pure_state_eval({0.3, -1.1}, {0.9, 0.5}, p_mechanise(cross));
    CHECK(std::abs(val - Cplx{0.3 * 0.5 - 1.1, 0.0}) < 1e-12);
}

TEST_CASE("right convolution gives the left-invariant fields on the fiber") {
    double h = 1.1;
    Rng rng(9);
    auto pts = pts2(rng, 6);
    HState v = coherent_v(CoherentLabel::one_dof(h, 0.5, -0.4));
    // v * P(q) = (1/2 pi i)(d_x - pi i h y) v
    MultiIndex my(2), mx(2);
    my.e[1] = 1;
    mx.e[0] = 1;
    PGFun expect_q = Cplx{1.0, 0.0} / (2.0 * kPi * kI) *
                     (pg_diff(v.f, 0) - PGFun::monomial(2, my, kPi * kI * h) * v.f);
    PGFun expect_p = Cplx{1.0, 0.0} / (2.0 * kPi * kI) *
                     (pg_diff(v.f, 1) + PGFun::monomial(2, mx, kPi * kI * h) * v.f);
    CHECK(pg_max_abs_diff(convolve_right(v, p_mechanise(PolyQP::q(1, 0))).f, expect_q, pts) < 1e-12);
    CHECK(pg_max_abs_diff(convolve_right(v, p_mechanise(PolyQP::p(1, 0))).f, expect_p, pts) < 1e-12);
}

TEST_CASE("central factor hook scales the convolution") {
    double h = 1.0;
    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    PMechObservable scaled = Pq;
    scaled.central_weight = [](double) { return 2.0; };
    HState v = coherent_v(CoherentLabel::one_dof(h, 0.3, 0.1));
    Rng rng(71);
    auto pts = pts2(rng, 5);
    CHECK(pg_max_abs_diff(convolve_left(scaled, v).f, Cplx{2.0, 0.0} * convolve_left(Pq, v).f, pts) <
          1e-13);
}
