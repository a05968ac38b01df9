#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pmech/oracles.hpp"
#include "pmech/pgfun.hpp"
#include "pmech/rng.hpp"
#include "pmech/serialize.hpp"

using namespace pmech;

namespace {

PGFun gauss1(double a_re, double a_im = 0.0, Cplx b = {}, Cplx c = {}, Cplx coeff = {1.0, 0.0},
             int mono_deg = 0) {
    QuadExp e(1);
    e.a(0, 0) = Cplx{a_re, a_im};
    e.b[0] = b;
    e.c = c;
    MultiIndex m(1);
    m.e[0] = mono_deg;
    return PGFun::term(coeff, m, e);
}

}  // namespace

TEST_CASE("addition: identity, cancellation and like-term merge") {
    PGFun f = gauss1(1.0);  // e^{-x^2}
    PGFun zero = PGFun::zero(1);
    CHECK((f + zero).size() == 1);
    CHECK(pg_eval(f + zero, {0.3}) == pg_eval(f, {0.3}));

    PGFun cancel = f + Cplx{-1.0, 0.0} * f;
    CHECK(cancel.is_zero());

    PGFun doubled = f + f;
    REQUIRE(doubled.size() == 1);
    CHECK(doubled.terms()[0].coeff == Cplx{2.0, 0.0});
}

TEST_CASE("multiplication adds exponents and monomials") {
    PGFun f = gauss1(1.0);
    PGFun ff = f * f;
    REQUIRE(ff.size() == 1);
    CHECK(ff.terms()[0].exp.a(0, 0) == Cplx{2.0, 0.0});

    PGFun xf = gauss1(1.0, 0.0, {}, {}, {1.0, 0.0}, 1);  // x e^{-x^2}
    MultiIndex m1(1);
    m1.e[0] = 1;
    PGFun x = PGFun::monomial(1, m1, 1.0);
    PGFun xxf = xf * x;
    REQUIRE(xxf.size() == 1);
    CHECK(xxf.terms()[0].mono.e[0] == 2);

    // e^{2 pi i x} e^{-2 pi i x} = 1
    QuadExp plus(1), minus(1);
    plus.add_lin(0, Cplx{0.0, 2.0 * kPi});
    minus.add_lin(0, Cplx{0.0, -2.0 * kPi});
    PGFun one = PGFun::gaussian(plus) * PGFun::gaussian(minus);
    REQUIRE(one.size() == 1);
    CHECK(one.terms()[0].exp.b[0] == Cplx{});
    CHECK(std::abs(pg_eval(one, {0.77}) - Cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("conjugation is an involution and flips phases") {
    QuadExp plus(1);
    plus.add_lin(0, Cplx{0.0, 2.0 * kPi});
    PGFun phase = PGFun::gaussian(plus);
    PGFun conj_phase = pg_conj(phase);
    CHECK(conj_phase.terms()[0].exp.b[0] == Cplx{0.0, -kPi});
    PGFun real_g = gauss1(1.0);
    CHECK(pg_max_abs_diff(pg_conj(real_g), real_g, {{0.3}, {-0.9}}) == 0.0);
    CHECK(pg_max_abs_diff(pg_conj(pg_conj(phase)), phase, {{0.2}, {1.4}}) == 0.0);
}

TEST_CASE("differentiation: closed forms and a finite-difference oracle") {
    PGFun f = gauss1(1.0);
    PGFun df = pg_diff(f, 0);  // -2 x e^{-x^2}
    REQUIRE(df.size() == 1);
    CHECK(df.terms()[0].mono.e[0] == 1);
    CHECK(df.terms()[0].coeff == Cplx{-2.0, 0.0});

    PGFun xf = gauss1(1.0, 0.0, {}, {}, {1.0, 0.0}, 1);
    PGFun dxf = pg_diff(xf, 0);  // (1 - 2x^2) e^{-x^2}
    double at0 = std::abs(pg_eval(dxf, {0.0}) - Cplx{1.0, 0.0});
    double at1 = std::abs(pg_eval(dxf, {1.0}) - Cplx{-std::exp(-1.0), 0.0});
    CHECK(at0 < 1e-15);
    CHECK(at1 < 1e-15);

    Rng rng(123);
    QuadExp e(2);
    e.a(0, 0) = Cplx{0.8, 0.2};
    e.a(1, 1) = Cplx{1.1, -0.1};
    e.a(0, 1) = e.a(1, 0) = Cplx{0.2, 0.05};
    e.b[0] = Cplx{0.3, -0.4};
    MultiIndex m(2);
    m.e[0] = 2;
    m.e[1] = 1;
    PGFun g = PGFun::term(Cplx{0.7, 0.3}, m, e);
    PGFun dg = pg_diff(g, 1);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        auto xp = x, xm = x;
        xp[1] += 1e-5;
        xm[1] -= 1e-5;
        Cplx fd = (pg_eval(g, xp) - pg_eval(g, xm)) / 2e-5;
        CHECK(std::abs(fd - pg_eval(dg, x)) / std::max(1.0, std::abs(fd)) < 1e-6);
    }
}

TEST_CASE("affine substitution: shift, rotation invariance, scaling") {
    PGFun f = gauss1(1.0);
    PGFun shifted = pg_affine_sub(f, {1.0}, 1, {Cplx{1.0, 0.0}});  // e^{-(x+1)^2}
    CHECK(std::abs(pg_eval(shifted, {0.0}) - Cplx{std::exp(-1.0), 0.0}) < 1e-15);
    CHECK(std::abs(pg_eval(shifted, {-1.0}) - Cplx{1.0, 0.0}) < 1e-15);

    QuadExp e2(2);
    e2.a(0, 0) = e2.a(1, 1) = Cplx{1.0, 0.0};
    PGFun radial = PGFun::gaussian(e2);
    double c = std::cos(0.5 * kPi), s = std::sin(0.5 * kPi);
    PGFun rotated = pg_affine_sub(radial, {c, s, -s, c}, 2, {Cplx{}, Cplx{}});
    CHECK(pg_max_abs_diff(rotated, radial, {{0.3, -0.8}, {1.1, 0.4}}) < 1e-15);

    MultiIndex m1(1);
    m1.e[0] = 1;
    PGFun x = PGFun::monomial(1, m1, 1.0);
    PGFun two_x = pg_affine_sub(x, {2.0}, 1, {Cplx{}});
    REQUIRE(two_x.size() == 1);
    CHECK(two_x.terms()[0].coeff == Cplx{2.0, 0.0});
}

TEST_CASE("integration: normalisation, completed square, odd vanishing") {
    CHECK(std::abs(pg_integrate_all(gauss1(kPi)) - Cplx{1.0, 0.0}) < 1e-14);

    // Int e^{-x^2 + 2x} = sqrt(pi) e; cross-checked by the quadrature oracle
    PGFun g = gauss1(1.0, 0.0, Cplx{1.0, 0.0});
    Cplx exact = pg_integrate_all(g);
    CHECK(std::abs(exact - Cplx{std::sqrt(kPi) * std::exp(1.0), 0.0}) < 1e-13);
    CHECK(std::abs(exact - oracles::quad_integrate(g, 1e-12)) / std::abs(exact) < 1e-10);

    PGFun odd = gauss1(1.0, 0.0, {}, {}, {1.0, 0.0}, 1);
    CHECK(std::abs(pg_integrate_all(odd)) < 1e-16);
}

TEST_CASE("partial integration marginals") {
    QuadExp e(2);
    e.a(0, 0) = e.a(1, 1) = Cplx{1.0, 0.0};
    PGFun f = PGFun::gaussian(e);
    PGFun marg = pg_integrate_out(f, {1});
    REQUIRE(marg.dim() == 1);
    CHECK(std::abs(pg_eval(marg, {0.5}) - Cplx{std::sqrt(kPi) * std::exp(-0.25), 0.0}) < 1e-14);

    // coupling produces growth in the remaining variable
    QuadExp c(2);
    c.a(0, 0) = Cplx{1.0, 0.0};
    c.add_quad(0, 1, Cplx{2.0, 0.0});  // +2xy in the exponent
    PGFun fc = PGFun::gaussian(c);
    PGFun grown = pg_integrate_out(fc, {0});
    REQUIRE(grown.size() == 1);
    CHECK(std::abs(grown.terms()[0].exp.a(0, 0) - Cplx{-1.0, 0.0}) < 1e-14);  // e^{+y^2}

    CHECK(std::abs(pg_integrate_all(f) - pg_eval(pg_integrate_out(f, {0, 1}), {})) < 1e-14);
}

TEST_CASE("inner product: positivity, normalisation, symmetry") {
    Rng rng(99);
    for (int i = 0; i < 20; ++i) {
        QuadExp e(1);
        e.a(0, 0) = Cplx{rng.uniform(0.3, 2.0), rng.uniform(-0.5, 0.5)};
        e.b[0] = Cplx{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
        MultiIndex m(1);
        m.e[0] = rng.uniform_int(0, 2);
        PGFun f = PGFun::term(Cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)}, m, e);
        Cplx ff = pg_inner(f, f);
        CHECK(ff.real() >= -1e-14);
        CHECK(std::abs(ff.imag()) < 1e-12);
    }
    PGFun g = gauss1(kPi);
    CHECK(std::abs(pg_inner(g, g) - Cplx{1.0 / std::sqrt(2.0), 0.0}) < 1e-14);

    PGFun a = gauss1(1.0, 0.3, Cplx{0.2, -0.4});
    PGFun b = gauss1(0.7, -0.2, Cplx{-0.1, 0.5}, {}, {0.4, 0.9}, 1);
    CHECK(std::abs(pg_inner(a, b) - std::conj(pg_inner(b, a))) < 1e-13);
}

TEST_CASE("evaluation is linear over sums") {
    Rng rng(5);
    PGFun a = gauss1(0.9, 0.1, Cplx{0.2, 0.1}, {}, {0.5, -0.1}, 1);
    PGFun b = gauss1(1.4, -0.2, Cplx{-0.3, 0.2});
    PGFun s = a + b;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x{rng.uniform(-2, 2)};
        CHECK(std::abs(pg_eval(s, x) - pg_eval(a, x) - pg_eval(b, x)) < 1e-14);
    }
    CHECK(std::abs(pg_eval(gauss1(1.0), {0.0}) - Cplx{1.0, 0.0}) < 1e-16);
    CHECK(std::abs(pg_eval(gauss1(1.0, 0, {}, {}, {1, 0}, 1), {1.0}) - Cplx{std::exp(-1.0), 0.0}) <
          1e-16);
}

TEST_CASE("error paths: dimensions, integrability, degree cap") {
    CHECK_THROWS_AS(PGFun::zero(1) + PGFun::zero(2), DimensionMismatch);
    CHECK_THROWS_AS(pg_eval(PGFun::zero(2), {1.0}), DimensionMismatch);

    // a non-integrable second term is reported with its index
    PGFun ok = gauss1(1.0);
    PGFun bad = ok + Cplx{1.0, 0.0} * gauss1(-0.5, 0.0, {}, {}, Cplx{3.0, 0.0});
    try {
        pg_integrate_all(bad);
        CHECK(false);
    } catch (const NotIntegrable& e) {
        CHECK(e.term_index >= 0);
    }

    MultiIndex big(1);
    big.e[0] = 40;
    PGFun tall = PGFun::monomial(1, big, 1.0);
    CHECK_THROWS_AS(tall * tall, DegreeCapExceeded);

    QuadExp e(1);
    e.a(0, 0) = Cplx{0.0, 1.0};  // purely imaginary: not integrable
    CHECK_FALSE(e.integrable());
    QuadExp good(1);
    good.a(0, 0) = Cplx{0.2, 5.0};
    CHECK(good.integrable());
}

TEST_CASE("serialization round trip and golden file") {
    PGFun f = gauss1(2.0, 0.0, {}, {}, Cplx{2.0, 0.0});
    QuadExp e(1);
    e.a(0, 0) = Cplx{1.0, 0.0};
    e.b[0] = Cplx{0.0, 1.0};
    e.c = Cplx{0.5, 0.25};
    MultiIndex m(1);
    m.e[0] = 1;
    f = f + PGFun::term(Cplx{1.0, 0.0}, m, e);

    std::string text = pgfun_to_text(f);
    PGFun back = pgfun_from_text(text);
    CHECK(pgfun_to_text(back) == text);

    std::ifstream golden(std::string(PMECH_TEST_DATA_DIR) + "/golden_pgfun.txt");
    REQUIRE(golden.good());
    std::ostringstream os;
    os << golden.rdbuf();
    CHECK(text == os.str());

    // an irrational-valued function still round trips bit-exactly
    PGFun g = gauss1(kPi, std::sqrt(2.0), Cplx{1.0 / 3.0, std::exp(1.0)});
    CHECK(pgfun_to_text(pgfun_from_text(pgfun_to_text(g))) == pgfun_to_text(g));
}
