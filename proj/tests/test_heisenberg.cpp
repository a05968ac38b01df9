#include <doctest.h>

#include <cmath>

#include "pmech/heisenberg.hpp"
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

TEST_CASE("group law hand values") {
    GroupElement a = GroupElement::one_dof(0.0, 1.0, 0.0);
    GroupElement b = GroupElement::one_dof(0.0, 0.0, 1.0);
    GroupElement ab = hg_multiply(a, b);
    CHECK(ab.s == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ab.x[0] == 1.0);
    CHECK(ab.y[0] == 1.0);

    GroupElement g = GroupElement::one_dof(0.3, 0.7, -0.2);
    GroupElement gi = hg_multiply(g, GroupElement::identity(1));
    CHECK(gi.s == g.s);

    GroupElement sq = hg_multiply(GroupElement::one_dof(0.0, 0.4, 0.9), GroupElement::one_dof(0.0, 0.4, 0.9));
    CHECK(sq.s == 0.0);  // x.y - x.y cancels exactly
    CHECK(sq.x[0] == 0.8);

    GroupElement inv = hg_inverse(ab);
    CHECK(inv.s == -0.5);
    GroupElement e = hg_multiply(ab, inv);
    CHECK(std::abs(e.s) < 1e-15);
    CHECK(hg_inverse(hg_inverse(g)).s == g.s);
}

TEST_CASE("schrodinger representation is unitary and a homomorphism") {
    Rng rng(31);
    double h = 0.8;
    QuadExp e(1);
    e.a(0, 0) = Cplx{kPi / h, 0.0};
    SchrodingerState phi{h, PGFun::gaussian(e)};
    GroupElement id = GroupElement::identity(1);
    CHECK(pg_max_abs_diff(schrodinger_apply(id, phi).psi, phi.psi, {{0.4}, {-1.0}}) < 1e-15);

    double n0 = pg_norm(phi.psi);
    for (int i = 0; i < 10; ++i) {
        GroupElement g{rng.uniform(-1, 1), {rng.uniform(-1, 1)}, {rng.uniform(-1, 1)}};
        CHECK(std::abs(pg_norm(schrodinger_apply(g, phi).psi) - n0) < 1e-12 * n0);
    }
}

TEST_CASE("rho_h maps the ground state onto the printed coherent family") {
    double h = 1.3;
    Rng rng(77);
    for (int i = 0; i < 4; ++i) {
        double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
        FockState moved = rho_h_apply(GroupElement::one_dof(0.0, x, y), fock_ground_state(h, 1));
        // exp(-2 pi i (qx + py) - 2 pi/h ((q - hy/2)^2 + (p + hx/2)^2))
        for (const auto& pt : pts2(rng, 5)) {
            double q = pt[0], p = pt[1];
            Cplx expo{-2.0 * kPi / h *
                          ((q - 0.5 * h * y) * (q - 0.5 * h * y) + (p + 0.5 * h * x) * (p + 0.5 * h * x)),
                      -2.0 * kPi * (q * x + p * y)};
            CHECK(std::abs(pg_eval(moved.f, pt) - std::exp(expo)) < 1e-13);
        }
    }
}

TEST_CASE("representation labels: one variant, nonzero Planck value") {
    RepLabel pl = RepLabel::planck(0.5);
    CHECK(pl.kind == RepLabel::Kind::Planck);
    CHECK(pl.q.empty());
    CHECK_THROWS(RepLabel::planck(0.0));  // h = 0 lives in the phase-point family
    RepLabel pp = RepLabel::phase_point({1.0}, {2.0});
    CHECK(pp.kind == RepLabel::Kind::PhasePoint);
    CHECK(pp.h == 0.0);
}

TEST_CASE("one-dimensional representation values") {
    std::vector<double> q{0.7}, p{-0.4};
    CHECK(std::abs(rho_qp_apply(q, p, GroupElement::identity(1)) - Cplx{1.0, 0.0}) < 1e-16);
    CHECK(std::abs(rho_qp_apply(q, p, GroupElement::one_dof(2.7, 0.0, 0.0)) - Cplx{1.0, 0.0}) < 1e-16);
    Cplx v = rho_qp_apply(q, p, GroupElement::one_dof(0.1, 0.5, -0.9));
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
}

TEST_CASE("left shifts intertwine with rho_h through the fiber Fourier map") {
    Rng rng(11);
    double h = 1.0;
    for (int i = 0; i < 10; ++i) {
        FockState f = fock_coherent_state(h, {rng.uniform(-0.7, 0.7)}, {rng.uniform(-0.7, 0.7)});
        GroupElement g{rng.uniform(-0.8, 0.8), {rng.uniform(-0.8, 0.8)}, {rng.uniform(-0.8, 0.8)}};
        HState lhs = left_shift_apply(g, S_h_apply(f));
        HState rhs = S_h_apply(rho_h_apply(g, f));
        CHECK(pg_max_abs_diff(lhs.f, rhs.f, pts2(rng, 6)) < 1e-11);
    }
}

TEST_CASE("zeta representation: center, identity, coherent generation") {
    double h = 0.7;
    HState vac = vacuum_hstate(h, 1);
    Rng rng(4);
    auto pts = pts2(rng);

    HState center = zeta_apply(0.42, {0.0}, {0.0}, vac);
    Cplx expected_phase = std::exp(Cplx{0.0, 2.0 * kPi * 0.42 / h});
    CHECK(pg_max_abs_diff(center.f, expected_phase * vac.f, pts) < 1e-14);

    HState same = zeta_apply(0.0, {0.0}, {0.0}, vac);
    CHECK(pg_max_abs_diff(same.f, vac.f, pts) < 1e-15);

    CoherentLabel lbl = CoherentLabel::one_dof(h, 0.6, -0.9);
    HState gen = zeta_apply(0.0, lbl.a, lbl.b, vac);
    CHECK(pg_max_abs_diff(gen.f, coherent_v(lbl).f, pts) < 1e-13);

    CHECK_THROWS(zeta_apply(0.0, {1.0}, {1.0}, HState{0.0, PGFun::zero(2)}));
}

TEST_CASE("invariant vector fields satisfy the commutator table") {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        QuadExp e(3);
        for (int i = 0; i < 3; ++i) e.a(i, i) = Cplx{rng.uniform(0.4, 1.2), rng.uniform(-0.2, 0.2)};
        e.a(0, 1) = e.a(1, 0) = Cplx{rng.uniform(-0.2, 0.2), 0.0};
        e.b[2] = Cplx{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        MultiIndex m(3);
        m.e[1] = rng.uniform_int(0, 2);
        PGFun B = PGFun::term(Cplx{1.0, 0.4}, m, e);

        auto comm = [&](VectorField X, VectorField Y) {
            return vector_field_apply(X, 0, vector_field_apply(Y, 0, B)) -
                   vector_field_apply(Y, 0, vector_field_apply(X, 0, B));
        };
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 5; ++i) pts.push_back(rng.uniform_vector(3, -1.2, 1.2));

        PGFun c1 = comm(VectorField::XLeft, VectorField::YLeft) - vector_field_apply(VectorField::SLeft, 0, B);
        PGFun c2 = comm(VectorField::XRight, VectorField::YRight) - vector_field_apply(VectorField::SRight, 0, B);
        PGFun c3 = comm(VectorField::YLeft, VectorField::XRight);
        for (const auto& p : pts) {
            CHECK(std::abs(pg_eval(c1, p)) < 1e-12);
            CHECK(std::abs(pg_eval(c2, p)) < 1e-12);
            CHECK(std::abs(pg_eval(c3, p)) < 1e-12);
        }
    }

    // on the fiber the s-derivative is multiplication by 2 pi i h
    double h = 1.1;
    HState vac = vacuum_hstate(h, 1);
    HState sv = vector_field_apply(VectorField::SLeft, 0, vac);
    Rng rng2(3);
    CHECK(pg_max_abs_diff(sv.f, Cplx{0.0, 2.0 * kPi * h} * vac.f, pts2(rng2, 5)) < 1e-14);
}
