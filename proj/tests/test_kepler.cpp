#include <doctest.h>

#include <cmath>
#include <vector>

#include "pmech/kepler.hpp"
#include "pmech/rng.hpp"
#include "pmech/spaces.hpp"

using namespace pmech;

namespace {

// test-only Rodrigues evaluations with dense polynomial arithmetic
struct DensePoly {
    std::vector<double> c;  // c[k] x^k

    DensePoly deriv() const {
        DensePoly d;
        if (c.size() <= 1) return d;
        d.c.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = c[k] * static_cast<double>(k);
        return d;
    }
    double eval(double x) const {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return v;
    }
};

DensePoly poly_mul(const DensePoly& a, const DensePoly& b) {
    DensePoly r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

// P_l^m by the Rodrigues formula (1-x^2)^{m/2} d^{l+m}/dx^{l+m} (x^2-1)^l / (2^l l!)
double legendre_rodrigues(int l, int m, double x) {
    DensePoly base{{-1.0, 0.0, 1.0}};  // x^2 - 1
    DensePoly pw{{1.0}};
    for (int i = 0; i < l; ++i) pw = poly_mul(pw, base);
    for (int i = 0; i < l + m; ++i) pw = pw.deriv();
    double fact = 1.0;
    for (int i = 1; i <= l; ++i) fact *= 2.0 * i;
    return std::pow(1.0 - x * x, 0.5 * m) * pw.eval(x) / fact;
}

// e^z d^q/dz^q (e^{-z} z^q): (p e^{-z})' = (p' - p) e^{-z}
double laguerre_rodrigues_plain(int q, double z) {
    DensePoly p;
    p.c.assign(static_cast<std::size_t>(q) + 1, 0.0);
    p.c[static_cast<std::size_t>(q)] = 1.0;  // z^q
    for (int i = 0; i < q; ++i) {
        DensePoly d = p.deriv();
        d.c.resize(std::max(d.c.size(), p.c.size()), 0.0);
        for (std::size_t k = 0; k < p.c.size(); ++k) d.c[k] -= p.c[k];
        p = d;
    }
    return p.eval(z);
}

double laguerre_rodrigues_assoc(int pidx, int k, double z) {
    // L^p_{q-p}(z) = (-1)^p d^p/dz^p L_q(z) with q = p + k
    int q = pidx + k;
    DensePoly Lq;
    Lq.c.assign(static_cast<std::size_t>(q) + 1, 0.0);
    {
        // build L_q as a dense polynomial via the plain Rodrigues values is
        // awkward; differentiate the closed form sum instead:
        // L_q(z) = sum_j q!/(j!) C(q, j) (-z)^j  (Rodrigues expansion)
        double qfact = 1.0;
        for (int i = 2; i <= q; ++i) qfact *= i;
        for (int j = 0; j <= q; ++j) {
            double binom = 1.0;
            for (int i = 0; i < j; ++i) binom = binom * (q - i) / (i + 1);
            double jf = 1.0;
            for (int i = 2; i <= j; ++i) jf *= i;
            Lq.c[static_cast<std::size_t>(j)] = qfact * binom / jf * ((j % 2) ? -1.0 : 1.0);
        }
    }
    for (int i = 0; i < pidx; ++i) Lq = Lq.deriv();
    double sign = (pidx % 2) ? -1.0 : 1.0;
    return sign * Lq.eval(z);
}

}  // namespace

TEST_CASE("spherical chart branch table and round trips") {
    SphericalPoint e1 = sph_from_cartesian({1.0, 0.0, 0.0});
    CHECK(e1.r == doctest::Approx(1.0));
    CHECK(e1.theta == doctest::Approx(0.0));
    CHECK(e1.phi == doctest::Approx(0.5 * kPi));

    SphericalPoint e2 = sph_from_cartesian({0.0, 1.0, 0.0});
    CHECK(e2.theta == doctest::Approx(0.5 * kPi));
    SphericalPoint e3 = sph_from_cartesian({0.0, -1.0, 0.0});
    CHECK(e3.theta == doctest::Approx(1.5 * kPi));
    SphericalPoint e4 = sph_from_cartesian({-1.0, 0.0, 0.5});
    CHECK(e4.theta == doctest::Approx(kPi));

    CHECK_THROWS(sph_from_cartesian({0.0, 0.0, 1.0}));

    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        std::array<double, 3> xi{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (xi[0] * xi[0] + xi[1] * xi[1] < 1e-3) xi[1] += 1.0;
        auto rt = cartesian_from_sph(sph_from_cartesian(xi));
        for (int j = 0; j < 3; ++j) CHECK(std::abs(rt[static_cast<std::size_t>(j)] - xi[static_cast<std::size_t>(j)]) < 1e-12);
    }
}

TEST_CASE("special functions match their Rodrigues definitions") {
    CHECK(std::abs(sph_harmonic(0, 0, 1.1, 0.3) - Cplx{1.0 / std::sqrt(4.0 * kPi), 0.0}) < 1e-15);
    CHECK(assoc_laguerre(0, 1, 0.8) == doctest::Approx(1.0 - 0.8).epsilon(1e-14));

    Rng rng(33);
    for (int l = 0; l <= 6; ++l)
        for (int m = -l; m <= l; ++m)
            for (int i = 0; i < 4; ++i) {
                double x = rng.uniform(-0.95, 0.95);
                double want = legendre_rodrigues(l, m, x);
                CHECK(std::abs(assoc_legendre(l, m, x) - want) <=
                      1e-10 * std::max(1.0, std::abs(want)));
            }
    for (int p = 0; p <= 6; ++p)
        for (int k = 0; k + p <= 6; ++k)
            for (int i = 0; i < 4; ++i) {
                double z = rng.uniform(0.0, 4.0);
                double want = laguerre_rodrigues_assoc(p, k, z);
                CHECK(std::abs(assoc_laguerre(p, k, z) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
            }
    // the plain Rodrigues form agrees with the expansion used above
    for (int q = 0; q <= 5; ++q) CHECK(std::abs(laguerre_rodrigues_plain(q, 0.7) -
                                                laguerre_rodrigues_assoc(0, q, 0.7)) < 1e-10);

    CHECK_THROWS(assoc_legendre(2, 3, 0.1));
    CHECK_THROWS(assoc_legendre(2, 1, 1.5));
}

TEST_CASE("quantum number validation") {
    CHECK_NOTHROW(QuantumNumbers(3, 2, -2));
    CHECK_THROWS(QuantumNumbers(0, 0, 0));
    CHECK_THROWS(QuantumNumbers(2, 2, 0));
    CHECK_THROWS(QuantumNumbers(2, 1, 2));
}

TEST_CASE("ground radial function and quick spectrum smoke test") {
    double h = 2.0 * kPi;  // atomic units
    double kap = coulomb_kappa(1, h);
    CHECK(kap == doctest::Approx(1.0));
    CHECK(coulomb_radial(QuantumNumbers(1, 0, 0), h, 0.7) ==
          doctest::Approx(2.0 * std::exp(-0.7)).epsilon(1e-12));
    CHECK(coulomb_energy(1, h) == doctest::Approx(-0.5));

    RadialGrid grid(40.0, 800);
    auto eigs = fd_spectrum(0, h, grid, 2);
    CHECK(eigs[0] == doctest::Approx(-0.5).epsilon(0.01));
    CHECK(eigs[1] == doctest::Approx(-0.125).epsilon(0.01));

    // a grid far too coarse for the state size is flagged, not returned
    CHECK_THROWS(fd_spectrum(0, 1.0, RadialGrid(60.0, 64), 1));
}

TEST_CASE("spherical momenta invert and expose the angular momentum") {
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        std::array<double, 3> q{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (q[0] * q[0] + q[1] * q[1] < 0.2) q[0] += 1.0;
        std::array<double, 3> p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        auto sm = spherical_momenta(q, p);
        auto back = cartesian_momenta(sph_from_cartesian(q), sm);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(back[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(j)]) < 1e-11);
        CHECK(sm.p_azim == doctest::Approx(q[0] * p[1] - q[1] * p[0]).epsilon(1e-12));
        // radial momentum is the radial velocity component
        double r = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
        CHECK(sm.p_r == doctest::Approx((q[0] * p[0] + q[1] * p[1] + q[2] * p[2]) / r).epsilon(1e-12));

        // momentum through the chart Jacobian (the general position-transform
        // structure): p_cart,j = sum_k d(chart_k)/d(xi_j) * p_chart,k
        double step = 1e-6;
        for (int j = 0; j < 3; ++j) {
            auto qp = q, qm = q;
            qp[static_cast<std::size_t>(j)] += step;
            qm[static_cast<std::size_t>(j)] -= step;
            auto sp = sph_from_cartesian(qp);
            auto smn = sph_from_cartesian(qm);
            double via_jac = (sp.r - smn.r) / (2 * step) * sm.p_r +
                             (sp.theta - smn.theta) / (2 * step) * sm.p_azim +
                             (sp.phi - smn.phi) / (2 * step) * sm.p_polar;
            CHECK(std::abs(via_jac - p[static_cast<std::size_t>(j)]) < 1e-5);
        }
    }

    // the one-dimensional representation of the third angular momentum
    // evaluates to the azimuthal momentum
    PolyQP l3 = PolyQP::q(3, 0) * PolyQP::p(3, 1) - PolyQP::q(3, 1) * PolyQP::p(3, 0);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> q{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        if (q[0] * q[0] + q[1] * q[1] < 0.2) q[0] += 1.0;
        std::vector<double> p{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        Cplx rep = pure_state_eval(q, p, p_mechanise(l3));
        auto sm = spherical_momenta({q[0], q[1], q[2]}, {p[0], p[1], p[2]});
        CHECK(std::abs(rep - Cplx{sm.p_azim, 0.0}) < 1e-11);
    }
}

TEST_CASE("position transform conventions at the identity map") {
    PositionTransform ident;
    ident.n = 2;
    ident.forward = [](const std::vector<double>& x) { return x; };
    ident.inverse = [](const std::vector<double>& x) { return x; };
    ident.jacobian = [](const std::vector<double>&) { return RealMat::identity(2); };
    double h = 1.4;
    CHECK(position_multiplier(ident, 0, {0.6, -0.1}) == Cplx{0.6, 0.0});
    CHECK(position_multiplier(ident, 0, {0.6, -0.1}, TransformSign::Printed) == Cplx{-0.6, 0.0});
    auto mc = momentum_coefficients(ident, 1, h, {0.6, -0.1});
    CHECK(std::abs(mc[1] - Cplx{h, 0.0} / (2.0 * kPi * kI)) < 1e-15);
    CHECK(std::abs(mc[0]) == 0.0);
    auto mp = momentum_coefficients(ident, 1, h, {0.6, -0.1}, TransformSign::Printed);
    CHECK(mp[1] == Cplx{-h, 0.0});
}

TEST_CASE("klauder coefficients: degenerate labels") {
    AMCoeffs corner = klauder_am_state(2, 0.0, 0.0, 0.0);
    for (int l = 0; l <= 2; ++l)
        for (int m = -l; m < l; ++m)
            CHECK(std::abs(corner.c[static_cast<std::size_t>(l)][static_cast<std::size_t>(m + l)]) < 1e-15);
    // printed block norm is (level+1)^2
    AMCoeffs am = klauder_am_state(2, 0.7, 0.4, 1.1);
    double n2 = 0.0;
    for (const auto& row : am.c)
        for (const auto& v : row) n2 += std::norm(v);
    CHECK(n2 == doctest::Approx(9.0).epsilon(1e-12));

    BSCoeffs cs0 = klauder_cs({0.0, 0.3, 0.5, 0.7, 0.9}, 1.0, 6);
    CHECK(cs0.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 1; n < cs0.levels(); ++n)
        for (const auto& row : cs0.c[static_cast<std::size_t>(n)])
            for (const auto& v : row) CHECK(std::abs(v) < 1e-15);

    CHECK_THROWS(klauder_cs({3.0, 0.0, 0.5, 0.5, 0.5}, 1.0, 2));  // truncation bound unreachable
}

TEST_CASE("kc evolution is the gamma shift") {
    double h = 1.0;
    KlauderLabel lbl{0.7, 0.2, 0.9, 1.4, 0.6};
    BSCoeffs psi = klauder_cs(lbl, h, 20);
    double t = 0.42;
    BSCoeffs evolved = kc_time_evolve(psi, t);
    KlauderLabel probe{0.5, -0.8, 1.2, 0.5, 1.9};
    KlauderLabel shifted = probe;
    shifted.gamma += kc_shift_rate(h) * t;
    Cplx lhs = kc_transform_eval(evolved, probe, 20);
    Cplx rhs = kc_transform_eval(psi, shifted, 20);
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("angular resolution of identity at level zero") {
    CHECK(am_resolution_check(0, 12, 6) < 1e-12);
}

TEST_CASE("full bound-state values separate into radial and angular factors") {
    double h = 2.0 * kPi;
    SphericalPoint pt{1.3, 0.8, 1.1};
    QuantumNumbers qn(2, 1, -1);
    Cplx v = coulomb_eigenfunction_eval(qn, h, pt);
    CHECK(std::abs(v - coulomb_radial(qn, h, 1.3) * sph_harmonic(1, -1, 1.1, 0.8)) < 1e-15);
}

TEST_CASE("represented angular momentum annihilates radial states") {
    QuadExp g(3);
    for (int j = 0; j < 3; ++j) g.a(j, j) = Cplx{0.8, 0.0};
    PGFun radial = PGFun::gaussian(g);
    PGFun l2 = angular_momentum_apply(1, 1.0, radial);
    Rng rng(55);
    for (int i = 0; i < 5; ++i) {
        auto pt = rng.uniform_vector(3, -1.5, 1.5);
        CHECK(std::abs(pg_eval(l2, pt)) < 1e-15);
    }
}
