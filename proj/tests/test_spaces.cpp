#include <doctest.h>

#include <cmath>

#include "pmech/dynamics.hpp"
#include "pmech/rng.hpp"
#include "pmech/spaces.hpp"

using namespace pmech;

namespace {

std::vector<std::vector<double>> pts2(Rng& rng, int n = 8) {
    std::vector<std::vector<double>> p;
    for (int i = 0; i < n; ++i) p.push_back({rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4)});
    return p;
}

}  // namespace

TEST_CASE("inner products reject mixed Planck parameters") {
    FockState a = fock_ground_state(1.0, 1);
    FockState b = fock_ground_state(2.0, 1);
    CHECK_THROWS(fock_inner(a, b));
    HState va = vacuum_hstate(1.0, 1), vb = vacuum_hstate(0.5, 1);
    CHECK_THROWS(hh_inner(va, vb));
}

TEST_CASE("T inverse returns the orbit ground state to the oscillator vacuum") {
    double h = 1.0;
    // T^{-1} of the orbit ground state is proportional to e^{-pi xi^2 / h}
    SchrodingerState back = T_inverse_apply(fock_ground_state(h, 1));
    QuadExp e(1);
    e.a(0, 0) = Cplx{kPi / h, 0.0};
    PGFun phi0 = PGFun::gaussian(e);
    Cplx ratio = pg_eval(back.psi, {0.0});
    Rng rng(17);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> x{rng.uniform(-1.5, 1.5)};
        CHECK(std::abs(pg_eval(back.psi, x) - ratio * pg_eval(phi0, x)) < 1e-12);
    }
}

TEST_CASE("coherent states: vacuum case, unit norm, reproducing kernel") {
    double h = 0.9;
    CoherentLabel origin = CoherentLabel::one_dof(h, 0.0, 0.0);
    Rng rng(2);
    auto pts = pts2(rng);
    CHECK(pg_max_abs_diff(coherent_v(origin).f, vacuum_hstate(h, 1).f, pts) < 1e-15);

    for (int i = 0; i < 6; ++i) {
        CoherentLabel l = CoherentLabel::one_dof(h, rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        CHECK(std::abs(hh_norm(coherent_v(l)) - 1.0) < 1e-11);
        CHECK(repker_hh(l, l) == Cplx{1.0, 0.0});  // diagonal exactly one
        CoherentLabel l2 = CoherentLabel::one_dof(h, rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        Cplx inner = hh_inner(coherent_v(l), coherent_v(l2));
        CHECK(std::abs(inner - repker_hh(l, l2)) < 1e-12);
        CHECK(std::abs(repker_hh(l, l2) - std::conj(repker_hh(l2, l))) < 1e-15);
    }

    // orbit-side kernel diagonal
    CHECK(std::abs(repker_fock({0.4}, {-0.2}, {0.4}, {-0.2}, h) - Cplx{1.0 / h, 0.0}) < 1e-15);
}

TEST_CASE("kernel states and their classical limit") {
    double h = 1.0;
    Rng rng(21);
    auto pts = pts2(rng);
    CoherentLabel l = CoherentLabel::one_dof(h, 0.8, -0.5);

    KernelState built = kernel_from_state(coherent_v(l));
    CHECK(pg_max_abs_diff(built.l, kernel_coherent(l).l, pts) < 1e-11);

    // pointwise limit toward the pure phase at fixed (x, y)
    KernelState pure = kernel_pure_state(l.a, l.b);
    double prev = 1e9;
    for (double hh : {1.0, 0.5, 0.25, 0.125}) {
        CoherentLabel lh{hh, l.a, l.b};
        double err = pg_max_abs_diff(kernel_coherent(lh).l, pure.l, pts);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("pure states evaluate classical polynomials") {
    CHECK(std::abs(pure_state_eval({3.0}, {5.0}, p_mechanise(parse_polyqp("q", 1))) - Cplx{3.0, 0.0}) <
          1e-13);
    CHECK(std::abs(pure_state_eval({1.0}, {2.0}, p_mechanise(parse_polyqp("q^2+p^2", 1))) -
                   Cplx{5.0, 0.0}) < 1e-13);
    CHECK(std::abs(pure_state_eval({0.3}, {0.4}, p_mechanise(parse_polyqp("1", 1))) - Cplx{1.0, 0.0}) <
          1e-15);
    // a complex-coefficient observable pairs linearly
    PolyQP f = parse_polyqp("q", 1) + kI * parse_polyqp("p", 1);
    Cplx v = pure_state_eval({0.6}, {-1.1}, p_mechanise(f));
    CHECK(std::abs(v - Cplx{0.6, -1.1}) < 1e-13);
}

TEST_CASE("generalized eigenfunctions take the printed zero-argument form") {
    double h = 1.2;
    HState u0 = generalized_eigenfunction(GeneralizedKind::Position, 0.0, h);
    // exp(-pi h y^2 - pi i h x y)
    Rng rng(9);
    for (const auto& pt : pts2(rng, 6)) {
        Cplx expo{-kPi * h * pt[1] * pt[1], -kPi * h * pt[0] * pt[1]};
        CHECK(std::abs(pg_eval(u0.f, pt) - std::exp(expo)) < 1e-14);
    }
    // both kinds satisfy their strong eigen relation under convolution
    HState um = generalized_eigenfunction(GeneralizedKind::Momentum, 0.45, h);
    HState up = generalized_eigenfunction(GeneralizedKind::Position, 0.45, h);
    PMechObservable Pq = p_mechanise(parse_polyqp("q", 1));
    PMechObservable Pp = p_mechanise(parse_polyqp("p", 1));
    HState xu = convolve_left(Pq, up);
    HState yu = convolve_left(Pp, um);
    for (const auto& pt : pts2(rng, 6)) {
        CHECK(std::abs(pg_eval(xu.f, pt) - 0.45 * pg_eval(up.f, pt)) < 1e-12);
        CHECK(std::abs(pg_eval(yu.f, pt) - 0.45 * pg_eval(um.f, pt)) < 1e-12);
        // the momentum kind is the x <-> y image of the position kind up to
        // the orientation of the cross phase
        Cplx swapped = pg_eval(up.f, {pt[1], pt[0]});
        Cplx cross = std::exp(Cplx{0.0, 2.0 * kPi * h * pt[0] * pt[1]});
        CHECK(std::abs(pg_eval(um.f, pt) - swapped * cross) < 1e-12);
    }
}

TEST_CASE("trivial action and linearity cases") {
    double h = 1.0;
    Rng rng(71);
    auto pts = pts2(rng, 5);
    // identity group element acts trivially on the orbit and fiber spaces
    FockState f = fock_coherent_state(h, {0.3}, {-0.8});
    CHECK(pg_max_abs_diff(rho_h_apply(GroupElement::identity(1), f).f, f.f, pts) < 1e-15);
    HState v = coherent_v(CoherentLabel::one_dof(h, 0.3, -0.8));
    CHECK(pg_max_abs_diff(left_shift_apply(GroupElement::identity(1), v).f, v.f, pts) < 1e-15);

    // the direct kernel map into the fiber space is linear
    QuadExp e1(1), e2(1);
    e1.a(0, 0) = Cplx{kPi / h, 0.0};
    e2.a(0, 0) = Cplx{1.7, 0.2};
    e2.b[0] = Cplx{0.3, -0.1};
    SchrodingerState a{h, PGFun::gaussian(e1)};
    SchrodingerState b{h, PGFun::gaussian(e2)};
    SchrodingerState sum{h, a.psi + Cplx{0.4, 0.6} * b.psi};
    PGFun lhs = ltwo_to_hh_kernel_apply(sum).f;
    PGFun rhs = ltwo_to_hh_kernel_apply(a).f + Cplx{0.4, 0.6} * ltwo_to_hh_kernel_apply(b).f;
    CHECK(pg_max_abs_diff(lhs, rhs, pts) < 1e-12);
}

TEST_CASE("two degrees of freedom: norms, kernels and intertwiners") {
    double h = 0.8;
    Rng rng(83);
    CoherentLabel l1{h, {0.4, -0.7}, {0.2, 0.9}};
    CoherentLabel l2{h, {-0.3, 0.5}, {0.8, -0.1}};
    CHECK(std::abs(hh_norm(coherent_v(l1)) - 1.0) < 1e-10);
    CHECK(repker_hh(l1, l1) == Cplx{1.0, 0.0});
    Cplx inner = hh_inner(coherent_v(l1), coherent_v(l2));
    CHECK(std::abs(inner - repker_hh(l1, l2)) < 1e-11);

    // vacuum and ground state match through the fiber Fourier map
    FockState f0 = fock_ground_state(h, 2);
    CHECK(std::abs(fock_inner(f0, f0) - Cplx{1.0, 0.0}) < 1e-12);
    HState v = S_h_apply(f0);
    HState vac = vacuum_hstate(h, 2);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(rng.uniform_vector(4, -1.0, 1.0));
    CHECK(pg_max_abs_diff(v.f, vac.f, pts) < 1e-11);

    // intertwining of left shifts at two degrees of freedom
    GroupElement g{0.3, {0.5, -0.2}, {-0.4, 0.6}};
    FockState fc = fock_coherent_state(h, {0.2, -0.5}, {0.7, 0.1});
    HState lhs = left_shift_apply(g, S_h_apply(fc));
    HState rhs = S_h_apply(rho_h_apply(g, fc));
    CHECK(pg_max_abs_diff(lhs.f, rhs.f, pts) < 1e-10);

    // kernel of a coherent state keeps the closed form per coordinate
    KernelState built = kernel_from_state(coherent_v(l1));
    KernelState closed = kernel_coherent(l1);
    CHECK(pg_max_abs_diff(built.l, closed.l, pts) < 1e-10);
}

TEST_CASE("polarization residuals detect non-members") {
    double h = 1.0;
    Rng rng(14);
    auto pts = pts2(rng, 12);
    CHECK(fock_polarization_residual(fock_ground_state(h, 1), pts) < 1e-12);
    CHECK(hh_polarization_residual(vacuum_hstate(h, 1), pts) < 1e-12);

    // a squeezed Gaussian violates the polarization
    QuadExp e(2);
    e.a(0, 0) = Cplx{3.0 * kPi / h, 0.0};
    e.a(1, 1) = Cplx{kPi / h, 0.0};
    FockState off{h, PGFun::gaussian(e)};
    CHECK(fock_polarization_residual(off, pts) > 1e-2);
}
