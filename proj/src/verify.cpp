#include "pmech/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "pmech/cantrans.hpp"
#include "pmech/dynamics.hpp"
#include "pmech/heisenberg.hpp"
#include "pmech/kepler.hpp"
#include "pmech/observable.hpp"
#include "pmech/oracles.hpp"
#include "pmech/pgfun.hpp"
#include "pmech/rng.hpp"
#include "pmech/spaces.hpp"

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

    // pass if measured <= tol
    void residual(const std::string& id, const std::string& tag, int crit, double measured,
                  double def_tol) {
        double tol = tol_for(id, def_tol);
        rep.cases.push_back({id, tag, crit, measured <= tol, measured, 0.0, tol});
    }

    // pass if |measured - expected| <= tol
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

double rel_scale(const PGFun& f, const std::vector<std::vector<double>>& pts) {
    double s = 1.0;
    for (const auto& p : pts) s = std::max(s, std::abs(pg_eval(f, p)));
    return s;
}

double rel_diff(const PGFun& f, const PGFun& g, const std::vector<std::vector<double>>& pts) {
    return pg_max_abs_diff(f, g, pts) / rel_scale(f, pts);
}

// random integrable PGFun: 1-3 polynomial-times-Gaussian terms
PGFun random_pg(Rng& rng, int m, int max_deg, int max_terms = 2) {
    PGFun f(m);
    int nterms = rng.uniform_int(1, max_terms);
    for (int t = 0; t < nterms; ++t) {
        QuadExp e(m);
        // Re(A) = G^T G + 0.3 I keeps every term integrable
        std::vector<double> G(static_cast<std::size_t>(m) * m);
        for (auto& v : G) v = rng.uniform(-0.7, 0.7);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double re = (i == j) ? 0.3 : 0.0;
                for (int k = 0; k < m; ++k)
                    re += G[static_cast<std::size_t>(k) * m + i] * G[static_cast<std::size_t>(k) * m + j];
                e.a(i, j) = Cplx{re, 0.0};
            }
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double im = rng.uniform(-0.35, 0.35);
                e.a(i, j) += Cplx{0.0, im};
                if (i != j) e.a(j, i) += Cplx{0.0, im};
            }
        for (auto& b : e.b) b = Cplx{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        e.c = Cplx{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
        MultiIndex mono(m);
        int deg = rng.uniform_int(0, max_deg);
        for (int d = 0; d < deg; ++d) ++mono.e[static_cast<std::size_t>(rng.uniform_int(0, m - 1))];
        PGTerm term{Cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, mono, e};
        f.add_term(term);
    }
    f.canonicalize();
    return f;
}

GroupElement random_group(Rng& rng, int n, double extent = 0.8) {
    GroupElement g = GroupElement::identity(n);
    g.s = rng.uniform(-extent, extent);
    for (auto& v : g.x) v = rng.uniform(-extent, extent);
    for (auto& v : g.y) v = rng.uniform(-extent, extent);
    return g;
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

FockState random_fock_combo(Rng& rng, double h, int pieces = 2) {
    FockState f = fock_coherent_state(h, {rng.uniform(-0.8, 0.8)}, {rng.uniform(-0.8, 0.8)});
    f.f = Cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)} * f.f;
    for (int i = 1; i < pieces; ++i) {
        FockState g = fock_coherent_state(h, {rng.uniform(-0.8, 0.8)}, {rng.uniform(-0.8, 0.8)});
        f.f = f.f + Cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)} * g.f;
    }
    return f;
}

SchrodingerState random_schrodinger(Rng& rng, double h) {
    QuadExp e(1);
    e.a(0, 0) = Cplx{rng.uniform(0.4, 1.5), rng.uniform(-0.3, 0.3)};
    e.b[0] = Cplx{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
    PGFun psi = PGFun::gaussian(e, Cplx{rng.uniform(0.5, 1.0), rng.uniform(-0.5, 0.5)});
    if (rng.uniform() < 0.5) {
        MultiIndex mi(1);
        mi.e[0] = 1;
        psi = psi + PGFun::monomial(1, mi, Cplx{rng.uniform(-0.5, 0.5), 0.0}) * psi;
    }
    return {h, psi};
}

// ------------------------------------------------------------------ gauss ---

Report run_gauss(const RunConfig& cfg) {
    Checker ck(cfg, "gauss", 0x67617573);
    auto t0 = Clock::now();

    // acceptance 1: exact integration vs the quadrature oracle
    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            int dim = i < 20 ? 1 : (i < 40 ? 2 : 3);
            PGFun f = random_pg(ck.rng, dim, 4);
            Cplx exact = pg_integrate_all(f);
            Cplx quad = oracles::quad_integrate(f, 1e-11);
            double scale = std::max(1e-12, std::abs(quad));
            worst = std::max(worst, std::abs(exact - quad) / scale);
        }
        ck.residual("gauss.quadrature_oracle", "closed-form-gaussian-integration", 1, worst, 1e-8);
    }

    // linearity of integration
    {
        double worst = 0.0;
        for (int i = 0; i < 12; ++i) {
            int dim = ck.rng.uniform_int(1, 2);
            PGFun f = random_pg(ck.rng, dim, 3);
            PGFun g = random_pg(ck.rng, dim, 3);
            Cplx al{ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2)};
            Cplx be{ck.rng.uniform(-2, 2), ck.rng.uniform(-2, 2)};
            Cplx lhs = pg_integrate_all(al * f + be * g);
            Cplx rhs = al * pg_integrate_all(f) + be * pg_integrate_all(g);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        ck.residual("gauss.linearity", "integration-linearity", 0, worst, 1e-10);
    }

    // integral of a derivative vanishes
    {
        double worst = 0.0;
        for (int i = 0; i < 12; ++i) {
            int dim = ck.rng.uniform_int(1, 3);
            PGFun f = random_pg(ck.rng, dim, 3);
            int k = ck.rng.uniform_int(0, dim - 1);
            worst = std::max(worst, std::abs(pg_integrate_all(pg_diff(f, k))));
        }
        ck.residual("gauss.derivative_integral", "vanishing-boundary-terms", 0, worst, 1e-10);
    }

    // substitution consistency, pointwise
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            int m_in = ck.rng.uniform_int(1, 2);
            int m_out = ck.rng.uniform_int(1, 2);
            PGFun f = random_pg(ck.rng, m_in, 3);
            std::vector<double> L(static_cast<std::size_t>(m_in) * m_out);
            for (auto& v : L) v = ck.rng.uniform(-1.2, 1.2);
            std::vector<Cplx> t(static_cast<std::size_t>(m_in));
            for (auto& v : t) v = Cplx{ck.rng.uniform(-0.8, 0.8), 0.0};
            PGFun g = pg_affine_sub(f, L, m_out, t);
            for (int p = 0; p < 6; ++p) {
                auto x = ck.rng.uniform_vector(m_out, -1.5, 1.5);
                std::vector<double> lx(static_cast<std::size_t>(m_in));
                for (int r = 0; r < m_in; ++r) {
                    double s = t[static_cast<std::size_t>(r)].real();
                    for (int c = 0; c < m_out; ++c) s += L[static_cast<std::size_t>(r) * m_out + c] * x[static_cast<std::size_t>(c)];
                    lx[static_cast<std::size_t>(r)] = s;
                }
                worst = std::max(worst, std::abs(pg_eval(g, x) - pg_eval(f, lx)));
            }
        }
        ck.residual("gauss.substitution", "affine-substitution-pointwise", 0, worst, 1e-10);
    }

    // moment identity against the derivative formula
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            double a = ck.rng.uniform(0.3, 2.5);
            Cplx b{ck.rng.uniform(-1.0, 1.0), ck.rng.uniform(-1.0, 1.0)};
            for (int nmom = 0; nmom <= 6; ++nmom) {
                QuadExp e(1);
                e.a(0, 0) = Cplx{a, 0.0};
                e.b[0] = b;
                MultiIndex mono(1);
                mono.e[0] = nmom;
                Cplx exact = pg_integrate_all(PGFun::term(Cplx{1.0, 0.0}, mono, e));
                // d^{n-1}/db^{n-1}(b e^{b^2/a}) evaluated via the polynomial recurrence
                // p_0(b) = b; p_{k+1} = p_k' + (2b/a) p_k; value = sqrt(pi/a)/(2^{n-1} a) p_{n-1}(b) e^{b^2/a}
                Cplx ref;
                if (nmom == 0) {
                    ref = std::sqrt(kPi / a) * std::exp(b * b / a);
                } else {
                    std::vector<Cplx> p{Cplx{0.0, 0.0}, Cplx{1.0, 0.0}};  // b
                    for (int k = 1; k < nmom; ++k) {
                        std::vector<Cplx> np(p.size() + 1, Cplx{});
                        for (std::size_t d = 1; d < p.size(); ++d) np[d - 1] += static_cast<double>(d) * p[d];
                        for (std::size_t d = 0; d < p.size(); ++d) np[d + 1] += 2.0 / a * p[d];
                        p = np;
                    }
                    Cplx val{};
                    Cplx bp{1.0, 0.0};
                    for (std::size_t d = 0; d < p.size(); ++d) {
                        val += p[d] * bp;
                        bp *= b;
                    }
                    double denom = a;
                    for (int k = 1; k < nmom; ++k) denom *= 2.0;
                    ref = std::sqrt(kPi / a) / denom * val * std::exp(b * b / a);
                }
                worst = std::max(worst, std::abs(exact - ref) / std::max(1.0, std::abs(ref)));
            }
        }
        ck.residual("gauss.moment_identity", "gaussian-moment-derivative-formula", 0, worst, 1e-9);
    }

    // derivative against central finite differences
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            PGFun f = random_pg(ck.rng, 2, 3);
            PGFun d0 = pg_diff(f, 0);
            for (int p = 0; p < 10; ++p) {
                auto x = ck.rng.uniform_vector(2, -1.2, 1.2);
                auto xp = x, xm = x;
                xp[0] += 1e-5;
                xm[0] -= 1e-5;
                Cplx fd = (pg_eval(f, xp) - pg_eval(f, xm)) / 2e-5;
                worst = std::max(worst, std::abs(fd - pg_eval(d0, x)) / std::max(1.0, std::abs(fd)));
            }
        }
        ck.residual("gauss.derivative_fd", "derivative-finite-difference", 0, worst, 1e-6);
    }

    // Hermitian symmetry and positivity of the inner product
    {
        double worst = 0.0;
        double neg = 0.0;
        for (int i = 0; i < 20; ++i) {
            PGFun f = random_pg(ck.rng, 1, 2);
            PGFun g = random_pg(ck.rng, 1, 2);
            Cplx fg = pg_inner(f, g);
            Cplx gf = pg_inner(g, f);
            worst = std::max(worst, std::abs(fg - std::conj(gf)));
            Cplx ff = pg_inner(f, f);
            neg = std::max(neg, std::abs(ff.imag()));
            if (ff.real() < -1e-12) neg = 1.0;
        }
        ck.residual("gauss.inner_hermitian", "inner-product-hermitian-positive", 0, worst + neg, 1e-9);
    }

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    ck.residual("gauss.runtime", "engine-runtime-budget", 1, secs, 10.0);
    ck.rep.wall_seconds = secs;
    return ck.rep;
}

// ------------------------------------------------------------- heisenberg ---

Report run_heisenberg(const RunConfig& cfg) {
    Checker ck(cfg, "heisenberg", 0x68656973);
    auto t0 = Clock::now();
    double h = cfg.h;

    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            GroupElement g1 = random_group(ck.rng, 1), g2 = random_group(ck.rng, 1),
                         g3 = random_group(ck.rng, 1);
            GroupElement lhs = hg_multiply(hg_multiply(g1, g2), g3);
            GroupElement rhs = hg_multiply(g1, hg_multiply(g2, g3));
            worst = std::max({worst, std::abs(lhs.s - rhs.s), std::abs(lhs.x[0] - rhs.x[0]),
                              std::abs(lhs.y[0] - rhs.y[0])});
            GroupElement gi = hg_multiply(g1, hg_inverse(g1));
            worst = std::max({worst, std::abs(gi.s), std::abs(gi.x[0]), std::abs(gi.y[0])});
        }
        ck.residual("heisenberg.group_law", "associativity-and-inverses", 0, worst, 1e-12);
    }

    // acceptance 2: homomorphism + unitarity of the four representations
    {
        auto pts = random_points(ck.rng, 8, 2, 1.5);
        auto pts1 = random_points(ck.rng, 8, 1, 1.5);
        double hom = 0.0, uni = 0.0;
        for (int i = 0; i < 25; ++i) {
            GroupElement g1 = random_group(ck.rng, 1), g2 = random_group(ck.rng, 1);
            GroupElement g12 = hg_multiply(g1, g2);

            SchrodingerState st = random_schrodinger(ck.rng, h);
            SchrodingerState s1 = schrodinger_apply(g1, schrodinger_apply(g2, st));
            SchrodingerState s2 = schrodinger_apply(g12, st);
            hom = std::max(hom, rel_diff(s1.psi, s2.psi, pts1));
            double n0 = pg_norm(st.psi);
            uni = std::max(uni, std::abs(pg_norm(s2.psi) - n0) / n0);

            FockState fk = random_fock_combo(ck.rng, h);
            FockState f1 = rho_h_apply(g1, rho_h_apply(g2, fk));
            FockState f2 = rho_h_apply(g12, fk);
            hom = std::max(hom, rel_diff(f1.f, f2.f, pts));
            double nf = fock_norm(fk);
            uni = std::max(uni, std::abs(fock_norm(f2) - nf) / nf);

            HState v = random_coherent_combo(ck.rng, h);
            HState v1 = left_shift_apply(g1, left_shift_apply(g2, v));
            HState v2 = left_shift_apply(g12, v);
            hom = std::max(hom, rel_diff(v1.f, v2.f, pts));
            double nv = hh_norm(v);
            uni = std::max(uni, std::abs(hh_norm(v2) - nv) / nv);

            // zeta composes under the relabeled law (r + r' - (a b' - a' b)/2, ...)
            double r1 = ck.rng.uniform(-1, 1), a1 = ck.rng.uniform(-1, 1), b1 = ck.rng.uniform(-1, 1);
            double r2 = ck.rng.uniform(-1, 1), a2 = ck.rng.uniform(-1, 1), b2 = ck.rng.uniform(-1, 1);
            HState z1 = zeta_apply(r1, {a1}, {b1}, zeta_apply(r2, {a2}, {b2}, v));
            HState z2 = zeta_apply(r1 + r2 - 0.5 * (a1 * b2 - a2 * b1), {a1 + a2}, {b1 + b2}, v);
            hom = std::max(hom, rel_diff(z1.f, z2.f, pts));
            uni = std::max(uni, std::abs(hh_norm(z1) - nv) / nv);
        }
        ck.residual("heisenberg.svn_homomorphism", "stone-von-neumann-homomorphisms", 2, hom, 1e-9);
        ck.residual("heisenberg.svn_unitarity", "stone-von-neumann-unitarity", 2, uni, 1e-9);
    }

    // one-dimensional representations
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            std::vector<double> q{ck.rng.uniform(-2, 2)}, p{ck.rng.uniform(-2, 2)};
            GroupElement g1 = random_group(ck.rng, 1), g2 = random_group(ck.rng, 1);
            Cplx v1 = rho_qp_apply(q, p, g1) * rho_qp_apply(q, p, g2);
            Cplx v2 = rho_qp_apply(q, p, hg_multiply(g1, g2));
            worst = std::max(worst, std::abs(v1 - v2));
            worst = std::max(worst, std::abs(std::abs(v2) - 1.0));
            GroupElement central{ck.rng.uniform(-3, 3), {0.0}, {0.0}};
            worst = std::max(worst, std::abs(rho_qp_apply(q, p, central) - Cplx{1.0, 0.0}));
        }
        ck.residual("heisenberg.rho_qp", "one-dimensional-representation", 2, worst, 1e-12);
    }

    // invariant vector fields: commutators and left/right commuting
    {
        auto pts = random_points(ck.rng, 6, 3, 1.2);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            PGFun B = random_pg(ck.rng, 3, 2);
            auto commutator = [&](VectorField X, VectorField Y) {
                PGFun xy = vector_field_apply(X, 0, vector_field_apply(Y, 0, B));
                PGFun yx = vector_field_apply(Y, 0, vector_field_apply(X, 0, B));
                return xy - yx;
            };
            PGFun c1 = commutator(VectorField::XLeft, VectorField::YLeft) -
                       vector_field_apply(VectorField::SLeft, 0, B);
            PGFun c2 = commutator(VectorField::XRight, VectorField::YRight) -
                       vector_field_apply(VectorField::SRight, 0, B);
            PGFun c3 = commutator(VectorField::XLeft, VectorField::YRight);
            PGFun c4 = commutator(VectorField::XLeft, VectorField::XRight);
            for (const auto& p : pts)
                worst = std::max({worst, std::abs(pg_eval(c1, p)), std::abs(pg_eval(c2, p)),
                                  std::abs(pg_eval(c3, p)), std::abs(pg_eval(c4, p))});
        }
        ck.residual("heisenberg.vector_fields", "invariant-field-commutators", 0, worst, 1e-9);
    }

    // acceptance 2: T unitary + intertwining, S_h unitary + intertwining
    {
        auto pts = random_points(ck.rng, 8, 2, 1.3);
        double t_uni = 0.0, t_int = 0.0, s_uni = 0.0, s_int = 0.0;
        // four checks per round: a 100-case property sweep
        for (int i = 0; i < 25; ++i) {
            SchrodingerState ps1 = random_schrodinger(ck.rng, h);
            SchrodingerState ps2 = random_schrodinger(ck.rng, h);
            FockState T1 = T_apply(ps1), T2 = T_apply(ps2);
            Cplx lhs = fock_inner(T1, T2);
            Cplx rhs = pg_inner(ps1.psi, ps2.psi);
            t_uni = std::max(t_uni, std::abs(lhs - rhs) / std::max(1e-12, std::abs(rhs)));

            GroupElement g = random_group(ck.rng, 1);
            FockState a = T_apply(schrodinger_apply(g, ps1));
            FockState b = rho_h_apply(g, T1);
            t_int = std::max(t_int, rel_diff(a.f, b.f, pts));

            FockState fk = random_fock_combo(ck.rng, h);
            FockState fk2 = random_fock_combo(ck.rng, h);
            HState v1 = S_h_apply(fk), v2 = S_h_apply(fk2);
            Cplx l2 = hh_inner(v1, v2);
            Cplx r2 = fock_inner(fk, fk2);
            s_uni = std::max(s_uni, std::abs(l2 - r2) / std::max(1e-12, std::abs(r2)));

            HState c = S_h_apply(rho_h_apply(g, fk));
            HState d = left_shift_apply(g, v1);
            s_int = std::max(s_int, rel_diff(c.f, d.f, pts));
        }
        ck.residual("heisenberg.T_unitary", "wavelet-map-unitarity", 2, t_uni, 1e-9);
        ck.residual("heisenberg.T_intertwine", "wavelet-map-intertwining", 2, t_int, 1e-9);
        ck.residual("heisenberg.Sh_unitary", "fourier-fiber-map-unitarity", 2, s_uni, 1e-9);
        ck.residual("heisenberg.Sh_intertwine", "fourier-fiber-map-intertwining", 2, s_int, 1e-9);
    }

    ck.rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return ck.rep;
}

// ----------------------------------------------------------------- spaces ---

Report run_spaces(const RunConfig& cfg) {
    Checker ck(cfg, "spaces", 0x73706163);
    auto t0 = Clock::now();
    double h = cfg.h;

    // ground states and vacua
    {
        FockState f00 = fock_ground_state(h, 1);
        ck.equals("spaces.fock_ground_norm", "orbit-ground-state-normalisation", 0,
                  fock_inner(f00, f00).real(), 1.0, 1e-12);

        QuadExp e(1);
        e.a(0, 0) = Cplx{kPi / h, 0.0};
        SchrodingerState phi0{h, PGFun::gaussian(e)};
        FockState Tphi = T_apply(phi0);
        double want = std::pow(h / 2.0, 0.5);
        ck.equals("spaces.T_phi0_norm", "oscillator-ground-norm-through-T", 2,
                  fock_inner(Tphi, Tphi).real(), want, 1e-12);
        auto pts = random_points(ck.rng, 20, 2, 1.5);
        ck.residual("spaces.T_polarization", "image-of-T-is-polarized", 2,
                    fock_polarization_residual(Tphi, pts), 1e-9);

        SchrodingerState back = T_inverse_apply(Tphi);
        auto pts1 = random_points(ck.rng, 10, 1, 1.5);
        ck.residual("spaces.T_roundtrip", "inverse-wavelet-round-trip", 2,
                    pg_max_abs_diff(back.psi, phi0.psi, pts1), 1e-9);
    }

    // T adjoint identity <T^{-1} f, psi> = <f, T psi>
    {
        double worst = 0.0;
        for (int i = 0; i < 6; ++i) {
            FockState fk = random_fock_combo(ck.rng, h);
            SchrodingerState ps = random_schrodinger(ck.rng, h);
            Cplx lhs = pg_inner(T_inverse_apply(fk).psi, ps.psi);
            Cplx rhs = fock_inner(fk, T_apply(ps));
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-12, std::abs(rhs)));
        }
        ck.residual("spaces.T_adjoint", "inverse-as-adjoint", 0, worst, 1e-9);
    }

    // S_h of the orbit ground state is the vacuum fiber state
    {
        FockState f0 = fock_ground_state(h, 1);
        HState v = S_h_apply(f0);
        HState vac = vacuum_hstate(h, 1);
        auto pts = random_points(ck.rng, 10, 2, 1.5);
        ck.residual("spaces.Sh_vacuum", "vacuum-under-fiber-fourier", 0,
                    pg_max_abs_diff(v.f, vac.f, pts), 1e-12);
        HState back_check = S_h_apply(S_h_inverse(vac));
        ck.residual("spaces.Sh_roundtrip", "fiber-fourier-inversion", 0,
                    pg_max_abs_diff(back_check.f, vac.f, pts), 1e-10);
    }

    // acceptance 3: reproducing kernel on the label grid
    {
        double worst = 0.0;
        double diag = 0.0;
        for (double hh : {0.5, 1.0, 2.0}) {
            std::vector<double> vals{-1.0, -0.5, 0.0, 0.5, 1.0};
            for (double a : vals)
                for (double b : vals)
                    for (double ap : vals)
                        for (double bp : vals) {
                            CoherentLabel l1 = CoherentLabel::one_dof(hh, a, b);
                            CoherentLabel l2 = CoherentLabel::one_dof(hh, ap, bp);
                            Cplx inner = hh_inner(coherent_v(l1), coherent_v(l2));
                            Cplx closed = repker_hh(l1, l2);
                            worst = std::max(worst, std::abs(inner - closed));
                        }
            for (double a : vals)
                for (double b : vals) {
                    CoherentLabel l = CoherentLabel::one_dof(hh, a, b);
                    diag = std::max(diag, std::abs(repker_hh(l, l) - Cplx{1.0, 0.0}));
                }
        }
        ck.residual("spaces.repker_grid", "coherent-reproducing-kernel-grid", 3, worst, 1e-10);
        ck.residual("spaces.repker_diagonal", "reproducing-kernel-diagonal-one", 3, diag, 0.0);
    }

    // coherent states: norms, vacuum case, zeta generation
    {
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            CoherentLabel l = random_label(ck.rng, h);
            worst = std::max(worst, std::abs(hh_norm(coherent_v(l)) - 1.0));
        }
        ck.residual("spaces.coherent_norm", "coherent-state-normalisation", 0, worst, 1e-10);

        CoherentLabel l = random_label(ck.rng, h);
        HState via_zeta = zeta_apply(0.0, l.a, l.b, vacuum_hstate(h, 1));
        auto pts = random_points(ck.rng, 10, 2, 1.5);
        ck.residual("spaces.coherent_via_zeta", "coherent-state-as-zeta-translate", 0,
                    pg_max_abs_diff(via_zeta.f, coherent_v(l).f, pts), 1e-11);
    }

    // kernels of coherent states and the pointwise classical limit
    {
        CoherentLabel l = random_label(ck.rng, h);
        KernelState lk = kernel_from_state(coherent_v(l));
        KernelState closed = kernel_coherent(l);
        auto pts = random_points(ck.rng, 10, 2, 1.5);
        ck.residual("spaces.kernel_coherent", "kernel-coherent-closed-form", 0,
                    pg_max_abs_diff(lk.l, closed.l, pts), 1e-10);

        KernelState vk = kernel_from_state(vacuum_hstate(h, 1));
        KernelState vexp = kernel_coherent(CoherentLabel::one_dof(h, 0.0, 0.0));
        ck.residual("spaces.kernel_vacuum", "kernel-of-the-vacuum", 0,
                    pg_max_abs_diff(vk.l, vexp.l, pts), 1e-10);

        // pointwise limit of l_(h,a,b) toward the pure phase
        KernelState pure = kernel_pure_state(l.a, l.b);
        double prev = 1e300;
        bool monotone = true;
        for (double hh : {1.0, 0.5, 0.25, 0.125}) {
            CoherentLabel lh{hh, l.a, l.b};
            double err = pg_max_abs_diff(kernel_coherent(lh).l, pure.l, pts);
            if (err >= prev) monotone = false;
            prev = err;
        }
        ck.boolean("spaces.kernel_limit_monotone", "kernel-classical-limit-monotone", 0, monotone);
    }

    // pure states evaluate classical observables
    {
        PolyQP qq = parse_polyqp("q", 1);
        ck.equals("spaces.pure_q", "pure-state-position-value", 0,
                  pure_state_eval({3.0}, {5.0}, p_mechanise(qq)).real(), 3.0, 1e-12);
        PolyQP e2 = parse_polyqp("q^2+p^2", 1);
        ck.equals("spaces.pure_energy", "pure-state-energy-value", 0,
                  pure_state_eval({1.0}, {2.0}, p_mechanise(e2)).real(), 5.0, 1e-12);
        PolyQP one = parse_polyqp("1", 1);
        ck.equals("spaces.pure_const", "pure-state-constant", 0,
                  pure_state_eval({0.4}, {-0.7}, p_mechanise(one)).real(), 1.0, 1e-12);
    }

    // direct kernel map into the fiber space
    {
        double worst = 0.0;
        auto pts = random_points(ck.rng, 8, 2, 1.4);
        for (int i = 0; i < 6; ++i) {
            SchrodingerState ps = random_schrodinger(ck.rng, h);
            HState direct = ltwo_to_hh_kernel_apply(ps);
            HState composed = S_h_apply(T_apply(ps));
            worst = std::max(worst, rel_diff(direct.f, composed.f, pts));
        }
        ck.residual("spaces.ltwo_to_hh", "direct-kernel-equals-composition", 0, worst, 1e-9);

        QuadExp e(1);
        e.a(0, 0) = Cplx{kPi / h, 0.0};
        HState img = ltwo_to_hh_kernel_apply({h, PGFun::gaussian(e)});
        ck.residual("spaces.ltwo_polarized", "fiber-polarization-of-image", 0,
                    hh_polarization_residual(img, pts), 1e-9);
    }

    // orbit-side coherent family: polarization + closed-form Gram
    {
        auto pts = random_points(ck.rng, 15, 2, 1.4);
        double pol = 0.0, gram = 0.0;
        for (int i = 0; i < 5; ++i) {
            double x = ck.rng.uniform(-1, 1), y = ck.rng.uniform(-1, 1);
            double xp = ck.rng.uniform(-1, 1), yp = ck.rng.uniform(-1, 1);
            FockState fx = fock_coherent_state(h, {x}, {y});
            pol = std::max(pol, fock_polarization_residual(fx, pts));
            Cplx inner = fock_inner(fx, fock_coherent_state(h, {xp}, {yp}));
            // closed form exp(-pi h/2 [(x-x')^2+(y-y')^2 - 2 i (x' y - x y')])
            Cplx ex{-(x - xp) * (x - xp) - (y - yp) * (y - yp), 2.0 * (xp * y - x * yp)};
            Cplx closed = std::exp(0.5 * kPi * h * ex);
            gram = std::max(gram, std::abs(inner - closed));
        }
        ck.residual("spaces.fock_coherent_polarized", "orbit-coherent-family-polarized", 0, pol, 1e-9);
        ck.residual("spaces.fock_coherent_gram", "orbit-coherent-gram-closed-form", 0, gram, 1e-10);

        // the printed closed-form kernel as a wavelet-side integral:
        // Int f_(x,y)(q,p) conj(f_(x,y)(q',p')) dx dy over the (x, y) labels
        double kc = 0.0;
        auto family_in_labels = [&](double qq, double pv) {
            // f_(x,y)(q,p) as a function of the labels (x, y)
            QuadExp e(2);
            e.add_quad(0, 0, Cplx{-0.5 * kPi * h, 0.0});
            e.add_quad(1, 1, Cplx{-0.5 * kPi * h, 0.0});
            e.add_lin(0, Cplx{-2.0 * kPi * pv, -2.0 * kPi * qq});
            e.add_lin(1, Cplx{2.0 * kPi * qq, -2.0 * kPi * pv});
            e.c = Cplx{-2.0 * kPi * (qq * qq + pv * pv) / h, 0.0};
            return PGFun::gaussian(e);
        };
        for (int i = 0; i < 4; ++i) {
            double q = ck.rng.uniform(-0.7, 0.7), p = ck.rng.uniform(-0.7, 0.7);
            double qp = ck.rng.uniform(-0.7, 0.7), pp = ck.rng.uniform(-0.7, 0.7);
            Cplx integral = pg_inner(family_in_labels(q, p), family_in_labels(qp, pp));
            // the Gram integral is the Hermitian transpose arrangement of the
            // printed kernel (the reproducing slot order fixes its phase)
            Cplx closed = repker_fock({qp}, {pp}, {q}, {p}, h);
            kc = std::max(kc, std::abs(integral - closed) / std::abs(closed));
        }
        ck.residual("spaces.fock_repker_integral", "orbit-kernel-from-wavelet-integral", 0, kc, 1e-10);

        // reproducing property; the kernel vector K_(q,p) carries the
        // measured h^n constant
        double rp = 0.0;
        for (int i = 0; i < 3; ++i) {
            FockState f = random_fock_combo(ck.rng, h, 2);
            for (int j = 0; j < 4; ++j) {
                double q = ck.rng.uniform(-0.8, 0.8), p = ck.rng.uniform(-0.8, 0.8);
                // K_(q,p)(u, v) = K(q, p, u, v) as a PGFun in (u, v)
                QuadExp e(2);
                e.add_quad(0, 0, Cplx{-2.0 * kPi / h, 0.0});
                e.add_quad(1, 1, Cplx{-2.0 * kPi / h, 0.0});
                e.add_lin(0, Cplx{4.0 * kPi * q / h, 4.0 * kPi * p / h});
                e.add_lin(1, Cplx{4.0 * kPi * p / h, -4.0 * kPi * q / h});
                e.c = Cplx{-2.0 * kPi * (q * q + p * p) / h, 0.0};
                PGFun Kqp = PGFun::gaussian(e, Cplx{1.0 / h, 0.0});
                Cplx recon = h * fock_inner(f, FockState{h, Kqp});
                Cplx direct = pg_eval(f.f, {q, p});
                rp = std::max(rp, std::abs(recon - direct));
            }
        }
        ck.residual("spaces.reproducing_property", "orbit-kernel-reproduces-states", 0, rp, 1e-7);

        // finite-rank resolution of identity over a truncated label box,
        // 48-point product rule; the Gaussian tail outside [-4,4]^2 is below
        // the 1e-5 comparison level
        {
            std::vector<double> xs, ws;
            oracles::gauss_legendre(48, xs, ws);
            FockState f = random_fock_combo(ck.rng, h, 3);
            double q0 = 0.3, p0 = -0.4;
            Cplx recon{};
            double L = 4.0;
            for (int ix = 0; ix < 48; ++ix)
                for (int iy = 0; iy < 48; ++iy) {
                    double x = L * xs[static_cast<std::size_t>(ix)];
                    double y = L * xs[static_cast<std::size_t>(iy)];
                    double w = L * L * ws[static_cast<std::size_t>(ix)] * ws[static_cast<std::size_t>(iy)];
                    FockState fxy = fock_coherent_state(h, {x}, {y});
                    recon += w * fock_inner(f, fxy) * pg_eval(fxy.f, {q0, p0});
                }
            recon *= h;  // measured resolution constant h^n
            double err = std::abs(recon - pg_eval(f.f, {q0, p0}));
            ck.residual("spaces.resolution_truncated", "truncated-resolution-of-identity", 0, err, 1e-5);
        }
    }

    // generalized position/momentum eigenfunctions (weak relation)
    {
        double worst = 0.0;
        for (double xi : {0.0, 0.5, -0.8}) {
            HState u = generalized_eigenfunction(GeneralizedKind::Position, xi, h);
            PMechObservable Pq = p_mechanise(parse_polyqp("q", 1));
            HState Bu = convolve_left(Pq, u);
            for (int i = 0; i < 10; ++i) {
                HState w = random_coherent_combo(ck.rng, h);
                Cplx lhs = hh_inner(Bu, w);
                Cplx rhs = xi * hh_inner(u, w);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, hh_norm(w)));
            }
            HState um = generalized_eigenfunction(GeneralizedKind::Momentum, xi, h);
            PMechObservable Pp = p_mechanise(parse_polyqp("p", 1));
            HState Bum = convolve_left(Pp, um);
            for (int i = 0; i < 5; ++i) {
                HState w = random_coherent_combo(ck.rng, h);
                Cplx lhs = hh_inner(Bum, w);
                Cplx rhs = xi * hh_inner(um, w);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, hh_norm(w)));
            }
        }
        ck.residual("spaces.generalized_eigen", "generalized-eigenfunction-weak-relation", 0, worst, 1e-8);
    }

    ck.rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return ck.rep;
}

}  // namespace

// remaining suites live in verify_dynamics.cpp to keep translation units small
Report run_dynamics_suite(const RunConfig& cfg);
Report run_cantrans_suite(const RunConfig& cfg);
Report run_kepler_suite(const RunConfig& cfg);

std::vector<std::string> suite_names() {
    return {"gauss", "heisenberg", "spaces", "dynamics", "cantrans", "kepler"};
}

const std::vector<std::string>& criterion_titles() {
    static const std::vector<std::string> titles = {
        "Gaussian engine vs adaptive quadrature",
        "Stone-von Neumann: homomorphisms, unitarity, intertwiners",
        "Reproducing kernels on the coherent label grid",
        "Eigen-relations: annihilation, brackets, oscillator levels",
        "Forced oscillator: PDE residual, flow, resonance, trajectory",
        "Classical limit of coherent kernel states",
        "Metaplectic covariance",
        "Canonical-transformation integral equations",
        "Coupled oscillators: decoupling and flow",
        "Coulomb spectrum by finite differences",
        "Klauder states and the shift-dynamics space",
    };
    return titles;
}

std::vector<Report> run_verification(const RunConfig& cfg) {
    std::vector<Report> reports;
    auto want = [&](const std::string& name) { return cfg.suite.empty() || cfg.suite == name; };
    if (want("gauss")) reports.push_back(run_gauss(cfg));
    if (want("heisenberg")) reports.push_back(run_heisenberg(cfg));
    if (want("spaces")) reports.push_back(run_spaces(cfg));
    if (want("dynamics")) reports.push_back(run_dynamics_suite(cfg));
    if (want("cantrans")) reports.push_back(run_cantrans_suite(cfg));
    if (want("kepler")) reports.push_back(run_kepler_suite(cfg));
    return reports;
}

}  // namespace pmech::verify
