#include <doctest.h>

#include <cmath>

#include "pmech/cantrans.hpp"
#include "pmech/dynamics.hpp"
#include "pmech/rng.hpp"

using namespace pmech;

TEST_CASE("symplectic defect distinguishes Sp(2) from scalings") {
    CHECK(symplectic_defect(RealMat::identity(2)) == 0.0);
    RealMat rot(2, 2);
    rot.at(0, 0) = std::cos(1.1);
    rot.at(0, 1) = std::sin(1.1);
    rot.at(1, 0) = -std::sin(1.1);
    rot.at(1, 1) = std::cos(1.1);
    CHECK(is_symplectic(rot));
    RealMat stretch = RealMat::identity(2);
    stretch.at(0, 0) = 2.0;
    CHECK_FALSE(is_symplectic(stretch));
    CHECK(symplectic_defect(stretch) == doctest::Approx(1.0));
    CHECK_THROWS(SymplecticMatrix(stretch));
}

TEST_CASE("five-factor decomposition recombines, including the singular-A path") {
    auto recombine = [](const std::vector<MetaplecticFactor>& fs) {
        RealMat acc = RealMat::identity(2 * fs.front().dof());
        for (const auto& f : fs) acc = acc * f.matrix();
        return acc;
    };
    SymplecticMatrix I(RealMat::identity(2));
    RealMat ri = recombine(sp_decompose(I));
    RealMat di = ri - RealMat::identity(2);
    for (double v : di.a) CHECK(std::abs(v) < 1e-14);

    RealMat shear = RealMat::identity(2);
    shear.at(1, 0) = 0.65;
    RealMat rs = recombine(sp_decompose(SymplecticMatrix(shear))) - shear;
    for (double v : rs.a) CHECK(std::abs(v) < 1e-13);

    // |A| = 0: the standard form J goes through the pre-composition branch
    RealMat J = symplectic_J(1);
    auto jf = sp_decompose(SymplecticMatrix(J));
    RealMat rj = recombine(jf) - J;
    for (double v : rj.a) CHECK(std::abs(v) < 1e-13);

    CHECK_THROWS(MetaplecticFactor::lower_shear([] {
        RealMat C(2, 2);
        C.at(0, 1) = 1.0;  // not symmetric
        return C;
    }()));
}

TEST_CASE("metaplectic operators: unitarity and the double cover") {
    double h = 1.0;
    Rng rng(41);
    FockState f = fock_coherent_state(h, {0.4}, {-0.2});
    FockState g = fock_coherent_state(h, {-0.3}, {0.6});
    f.f = f.f + Cplx{0.5, 0.3} * g.f;

    // a full five-factor sequence preserves inner products
    RealMat rot(2, 2);
    rot.at(0, 0) = std::cos(0.9);
    rot.at(0, 1) = std::sin(0.9);
    rot.at(1, 0) = -std::sin(0.9);
    rot.at(1, 1) = std::cos(0.9);
    RealMat sh = RealMat::identity(2);
    sh.at(1, 0) = 0.7;
    auto factors = sp_decompose(SymplecticMatrix(rot * sh));
    FockState nf = metaplectic_apply(factors, f);
    FockState ng = metaplectic_apply(factors, g);
    CHECK(std::abs(fock_inner(nf, ng) - fock_inner(f, g)) < 1e-10);
    CHECK(std::abs(fock_norm(nf) - fock_norm(f)) < 1e-10);

    // the double-valuedness is concrete: J^4 = I but nu(J)^4 = -I
    FockState four = f;
    for (int i = 0; i < 4; ++i) four = metaplectic_apply(MetaplecticFactor::j(1), four);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    CHECK(pg_max_abs_diff(four.f, Cplx{-1.0, 0.0} * f.f, pts) < 1e-10);

    // J composed with its inverse is the identity on states
    FockState jj = metaplectic_apply(MetaplecticFactor::j_inv(1),
                                     metaplectic_apply(MetaplecticFactor::j(1), f));
    CHECK(pg_max_abs_diff(jj.f, f.f, pts) < 1e-10);
}

TEST_CASE("observable substitution: identity and the flip") {
    SymplecticMatrix I(RealMat::identity(2));
    PMechObservable B = p_mechanise(parse_polyqp("q^2 - 0.4*p + 1", 1));
    CHECK(approx_equal(observable_transform_linear(B, I).poly, B.poly, 1e-15));

    RealMat flip(2, 2);
    flip.at(0, 1) = 1.0;
    flip.at(1, 0) = -1.0;
    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    CHECK(approx_equal(observable_transform_linear(Pq, SymplecticMatrix(flip)).poly, PolyQP::p(1, 0),
                       1e-15));
}

TEST_CASE("kernel substitution rotates pure-state phases") {
    double th = 0.8;
    RealMat rot(2, 2);
    rot.at(0, 0) = std::cos(th);
    rot.at(0, 1) = std::sin(th);
    rot.at(1, 0) = -std::sin(th);
    rot.at(1, 1) = std::cos(th);
    SymplecticMatrix R(rot);
    KernelState l = kernel_pure_state({0.7}, {-0.3});
    KernelState moved = kernel_transform_linear(l, R);
    // l(R^T (x,y)) is the pure phase at the rotated label R (a,b)
    double a2 = rot.at(0, 0) * 0.7 + rot.at(0, 1) * (-0.3);
    double b2 = rot.at(1, 0) * 0.7 + rot.at(1, 1) * (-0.3);
    KernelState expect = kernel_pure_state({a2}, {b2});
    Rng rng(13);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> pt{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(std::abs(pg_eval(moved.l, pt) - pg_eval(expect.l, pt)) < 1e-13);
    }
}

TEST_CASE("coupled oscillator decoupling closed forms") {
    auto d0 = coupled_decouple(0.9, 1.7, 0.0);
    CHECK(d0.alpha == 0.0);
    CHECK(d0.W1 == doctest::Approx(0.9));
    CHECK(d0.W2 == doctest::Approx(1.7));

    auto d = coupled_decouple(1.0, 1.0, 1.0);
    CHECK(d.alpha == doctest::Approx(0.5 * kPi));
    CHECK(d.W1 == doctest::Approx(0.5));
    CHECK(d.W2 == doctest::Approx(1.5));

    CHECK_THROWS(coupled_decouple(1.0, 1.0, 2.5));  // violates 4AB > C^2
    CHECK_THROWS(coupled_decouple(-1.0, 1.0, 0.0));

    // flow is the identity at t = 0
    PMechObservable B = p_mechanise(PolyQP::q(2, 0) * PolyQP::p(2, 1));
    CHECK(approx_equal(coupled_flow(B, 0.0, d.W1, d.W2).poly, B.poly, 1e-15));
}

TEST_CASE("implicit relations: validity and a failing custom pair") {
    CHECK(ct_spec_valid(ct_flip()));
    CHECK(ct_spec_valid(ct_rotshift(0.7, 0.4)));

    CTSpec bad;
    bad.n = 1;
    bad.f = {PolyQP::q(1, 0)};
    bad.g = {PolyQP::p(1, 0)};
    bad.F = {PolyQP::q(1, 0)};
    bad.G = {Cplx{2.0, 0.0} * PolyQP::p(1, 0)};  // {F,G} = 2 != 1
    CHECK_FALSE(ct_spec_valid(bad));
}

TEST_CASE("matrix elements agree with the printed label formulas") {
    double h = 1.0;
    CoherentLabel l1 = CoherentLabel::one_dof(h, 0.4, -0.7);
    CoherentLabel l2 = CoherentLabel::one_dof(h, -0.2, 0.5);
    Cplx K = repker_hh(l1, l2);
    PMechObservable Pq = p_mechanise(PolyQP::q(1, 0));
    PMechObservable Pp = p_mechanise(PolyQP::p(1, 0));
    Cplx mq = ct_matrix_element(Pq, l1, l2);
    CHECK(std::abs(mq - 0.5 * (Cplx{0.4, -0.7} + Cplx{-0.2, -0.5}) * K) < 1e-13);
    Cplx mp = ct_matrix_element(Pp, l1, l2);
    CHECK(std::abs(mp - 0.5 * (Cplx{-0.7, -0.4} + Cplx{0.5, -0.2}) * K) < 1e-13);

    // degree cap enforced
    PMechObservable cubic = p_mechanise(parse_polyqp("q^3", 1));
    CHECK_THROWS(ct_matrix_element(cubic, l1, l2));
}

TEST_CASE("flip residual and the quarter-turn reduction") {
    std::vector<std::vector<double>> grid;
    for (double a : {-0.5, 0.5})
        for (double b : {-0.5, 0.5})
            for (double ap : {-0.5, 0.5})
                for (double bp : {-0.5, 0.5}) grid.push_back({a, b, ap, bp});
    double r = ct_residual(ct_flip(), ct_matrix_element_flip(1.0), grid);
    CHECK(r < 1e-9);

    MatrixElementFn mflip = ct_matrix_element_flip(1.0);
    MatrixElementFn mrot = ct_matrix_element_rotshift(1.0, 0.5 * kPi, 0.0);
    CHECK(pg_max_abs_diff(mflip.m, mrot.m, grid) < 1e-13);
}

TEST_CASE("shifted-rotation solution works at non-unit h; printed form fails when shifted") {
    std::vector<std::vector<double>> grid;
    for (double a : {-0.5, 0.5})
        for (double b : {-0.5, 0.5})
            for (double ap : {-0.5, 0.5})
                for (double bp : {-0.5, 0.5}) grid.push_back({a, b, ap, bp});

    double h = 0.7, t = 0.9, C = 0.6;
    CHECK(ct_residual(ct_rotshift(t, C), ct_matrix_element_rotshift(h, t, C), grid) < 1e-10);
    // the printed expression coincides with the corrected one only at C = 0
    CHECK(ct_residual(ct_rotshift(t, 0.0), ct_matrix_element_rotshift_printed(h, t, 0.0), grid) < 1e-10);
    CHECK(ct_residual(ct_rotshift(t, C), ct_matrix_element_rotshift_printed(h, t, C), grid) > 1e-2);

    // the operator carries the vacuum to the image of the origin
    MatrixElementFn m = ct_matrix_element_rotshift(h, t, C);
    CoherentCombo vac{{Cplx{1.0, 0.0}, CoherentLabel::one_dof(h, 0.0, 0.0)}};
    HState img = ct_operator_apply(m, vac);
    HState target = coherent_v(CoherentLabel::one_dof(h, -C, -C));
    Cplx scale = hh_inner(img, target) / hh_inner(target, target);
    CHECK(std::abs(std::abs(scale) - 1.0) < 1e-9);
    Rng rng(27);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> pt{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(std::abs(pg_eval(img.f, pt) - scale * pg_eval(target.f, pt)) < 1e-9);
    }
}

TEST_CASE("coherent-state operator: reproducing kernel gives the identity") {
    double h = 1.0;
    QuadExp e(4);
    Cplx w = kPi / h;
    e.add_quad(0, 2, w);
    e.add_quad(0, 3, -kI * w);
    e.add_quad(1, 2, kI * w);
    e.add_quad(1, 3, w);
    for (int j = 0; j < 4; ++j) e.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
    MatrixElementFn mid{h, PGFun::gaussian(e)};

    CoherentCombo combo{{Cplx{1.0, 0.0}, CoherentLabel::one_dof(h, 0.4, -0.2)}};
    HState direct = combo_to_hstate(combo);
    HState through = ct_operator_apply(mid, combo);
    Rng rng(19);
    for (int i = 0; i < 6; ++i) {
        std::vector<double> pt{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(std::abs(pg_eval(through.f, pt) - pg_eval(direct.f, pt)) < 1e-9);
    }
}
