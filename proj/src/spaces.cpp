#include "pmech/spaces.hpp"

#include <cmath>

namespace pmech {

namespace {

// Embeds f into an m_total-variable space with its variables at [offset, offset+dim).
PGFun embed(const PGFun& f, int m_total, int offset) {
    int m_in = f.dim();
    std::vector<double> L(static_cast<std::size_t>(m_in) * m_total, 0.0);
    for (int i = 0; i < m_in; ++i) L[static_cast<std::size_t>(i) * m_total + offset + i] = 1.0;
    return pg_affine_sub(f, L, m_total, std::vector<Cplx>(static_cast<std::size_t>(m_in), Cplx{}));
}

std::vector<int> range_vars(int from, int to) {
    std::vector<int> v;
    for (int i = from; i < to; ++i) v.push_back(i);
    return v;
}

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

Cplx fock_inner(const FockState& f1, const FockState& f2) {
    require_same_h(f1.h, f2.h, "fock_inner");
    return pg_inner(f1.f, f2.f, ipow(4.0 / f1.h, f1.dof()));
}

Cplx hh_inner(const HState& v1, const HState& v2) {
    require_same_h(v1.h, v2.h, "hh_inner");
    return pg_inner(v1.f, v2.f, ipow(4.0 / v1.h, v1.dof()));
}

double fock_norm(const FockState& f) { return std::sqrt(std::max(0.0, fock_inner(f, f).real())); }
double hh_norm(const HState& v) { return std::sqrt(std::max(0.0, hh_inner(v, v).real())); }

FockState fock_ground_state(double h, int n) {
    QuadExp e(2 * n);
    for (int j = 0; j < 2 * n; ++j) e.add_quad(j, j, Cplx{-2.0 * kPi / h, 0.0});
    return {h, PGFun::gaussian(e)};
}

FockState fock_coherent_state(double h, const std::vector<double>& x, const std::vector<double>& y) {
    GroupElement g{0.0, x, y};
    return rho_h_apply(g, fock_ground_state(h, static_cast<int>(x.size())));
}

HState vacuum_hstate(double h, int n, double mass, double omega) {
    QuadExp e(2 * n);
    double wm = omega * mass;
    for (int j = 0; j < n; ++j) {
        e.add_quad(j, j, Cplx{-0.5 * kPi * h / wm, 0.0});
        e.add_quad(n + j, n + j, Cplx{-0.5 * kPi * h * wm, 0.0});
    }
    return {h, PGFun::gaussian(e, ipow(h / 2.0, n))};
}

HState coherent_v(const CoherentLabel& lbl) {
    int n = lbl.dof();
    double h = lbl.h;
    QuadExp e(2 * n);
    Cplx c{};
    for (int j = 0; j < n; ++j) {
        double a = lbl.a[static_cast<std::size_t>(j)], b = lbl.b[static_cast<std::size_t>(j)];
        e.add_quad(j, j, Cplx{-0.5 * kPi * h, 0.0});
        e.add_quad(n + j, n + j, Cplx{-0.5 * kPi * h, 0.0});
        e.add_lin(j, Cplx{-kPi * b, kPi * a});       // pi x (i a - b)
        e.add_lin(n + j, Cplx{kPi * a, kPi * b});    // pi y (i b + a)
        c += Cplx{-0.5 * kPi * (a * a + b * b) / h, 0.0};
    }
    e.c = c;
    return {h, PGFun::gaussian(e, ipow(h / 2.0, n))};
}

KernelState kernel_coherent(const CoherentLabel& lbl) {
    int n = lbl.dof();
    double h = lbl.h;
    QuadExp e(2 * n);
    for (int j = 0; j < n; ++j) {
        double a = lbl.a[static_cast<std::size_t>(j)], b = lbl.b[static_cast<std::size_t>(j)];
        e.add_quad(j, j, Cplx{-0.5 * kPi * h, 0.0});
        e.add_quad(n + j, n + j, Cplx{-0.5 * kPi * h, 0.0});
        e.add_lin(j, Cplx{0.0, 2.0 * kPi * a});
        e.add_lin(n + j, Cplx{0.0, 2.0 * kPi * b});
    }
    return {h, PGFun::gaussian(e)};
}

KernelState kernel_pure_state(const std::vector<double>& a, const std::vector<double>& b) {
    int n = static_cast<int>(a.size());
    QuadExp e(2 * n);
    for (int j = 0; j < n; ++j) {
        e.add_lin(j, Cplx{0.0, 2.0 * kPi * a[static_cast<std::size_t>(j)]});
        e.add_lin(n + j, Cplx{0.0, 2.0 * kPi * b[static_cast<std::size_t>(j)]});
    }
    return {0.0, PGFun::gaussian(e)};
}

FockState T_apply(const SchrodingerState& st) {
    int n = st.dof();
    double h = st.h;
    int m = 3 * n;  // (q, p, xi)
    QuadExp K(m);
    for (int j = 0; j < n; ++j) {
        int q = j, p = n + j, xi = 2 * n + j;
        K.add_quad(p, xi, Cplx{0.0, 4.0 * kPi / h});
        K.add_quad(q, p, Cplx{0.0, 4.0 * kPi / h});
        K.add_quad(xi, xi, Cplx{-kPi / h, 0.0});
        K.add_quad(q, q, Cplx{-4.0 * kPi / h, 0.0});
        K.add_quad(q, xi, Cplx{-4.0 * kPi / h, 0.0});
    }
    PGFun integrand = PGFun::gaussian(K) * embed(st.psi, m, 2 * n);
    PGFun f = pg_integrate_out(integrand, range_vars(2 * n, 3 * n));
    Cplx pref = std::pow(Cplx{2.0 / h, 0.0}, n / 4.0);
    return {h, pref * f};
}

SchrodingerState T_inverse_apply(const FockState& fst) {
    int n = fst.dof();
    double h = fst.h;
    int m = 3 * n;  // (xi, q', p')
    QuadExp K(m);
    for (int j = 0; j < n; ++j) {
        int xi = j, q = n + j, p = 2 * n + j;
        K.add_quad(p, xi, Cplx{0.0, -4.0 * kPi / h});
        K.add_quad(q, p, Cplx{0.0, -4.0 * kPi / h});
        K.add_quad(xi, xi, Cplx{-kPi / h, 0.0});
        K.add_quad(q, q, Cplx{-4.0 * kPi / h, 0.0});
        K.add_quad(q, xi, Cplx{-4.0 * kPi / h, 0.0});
    }
    PGFun integrand = PGFun::gaussian(K) * embed(fst.f, m, n);
    PGFun psi = pg_integrate_out(integrand, range_vars(n, 3 * n));
    // The adjoint computation fixes the normalization (4/h)^n (2/h)^{n/4};
    // with it T_inverse o T is the identity.
    Cplx pref = ipow(4.0 / h, n) * std::pow(Cplx{2.0 / h, 0.0}, n / 4.0);
    return {h, pref * psi};
}

HState S_h_apply(const FockState& fst) {
    int n = fst.dof();
    int m = 4 * n;  // (x, y, q, p)
    QuadExp ph(m);
    for (int j = 0; j < n; ++j) {
        ph.add_quad(2 * n + j, j, Cplx{0.0, 2.0 * kPi});          // q.x
        ph.add_quad(3 * n + j, n + j, Cplx{0.0, 2.0 * kPi});      // p.y
    }
    PGFun integrand = PGFun::gaussian(ph) * embed(fst.f, m, 2 * n);
    PGFun v = pg_integrate_out(integrand, range_vars(2 * n, 4 * n));
    return {fst.h, v};
}

FockState S_h_inverse(const HState& vst) {
    int n = vst.dof();
    int m = 4 * n;  // (q, p, x, y)
    QuadExp ph(m);
    for (int j = 0; j < n; ++j) {
        ph.add_quad(j, 2 * n + j, Cplx{0.0, -2.0 * kPi});
        ph.add_quad(n + j, 3 * n + j, Cplx{0.0, -2.0 * kPi});
    }
    PGFun integrand = PGFun::gaussian(ph) * embed(vst.f, m, 2 * n);
    PGFun f = pg_integrate_out(integrand, range_vars(2 * n, 4 * n));
    return {vst.h, f};
}

HState ltwo_to_hh_kernel_apply(const SchrodingerState& st) {
    int n = st.dof();
    double h = st.h;
    int m = 3 * n;  // (x, y, xi)
    QuadExp K(m);
    for (int j = 0; j < n; ++j) {
        int x = j, y = n + j, xi = 2 * n + j;
        K.add_quad(xi, y, Cplx{-2.0 * kPi, 0.0});
        K.add_quad(xi, x, Cplx{0.0, -2.0 * kPi});
        K.add_quad(y, y, Cplx{-kPi * h, 0.0});
        // The xy cross phase is -pi i h x y; the sign follows from composing
        // S_h with T (and makes phi_0 map to the vacuum).
        K.add_quad(x, y, Cplx{0.0, -kPi * h});
        K.add_quad(xi, xi, Cplx{-kPi / h, 0.0});
    }
    PGFun integrand = PGFun::gaussian(K) * embed(st.psi, m, 2 * n);
    PGFun v = pg_integrate_out(integrand, range_vars(2 * n, 3 * n));
    Cplx pref = std::pow(Cplx{2.0 / h, 0.0}, n / 4.0) * ipow(h / 2.0, n);
    return {h, pref * v};
}

Cplx repker_hh(const CoherentLabel& l1, const CoherentLabel& l2) {
    require_same_h(l1.h, l2.h, "repker_hh");
    if (l1.dof() != l2.dof()) throw DimensionMismatch("repker_hh: dof mismatch");
    double h = l1.h;
    Cplx ex{};
    for (int j = 0; j < l1.dof(); ++j) {
        double da = l1.a[static_cast<std::size_t>(j)] - l2.a[static_cast<std::size_t>(j)];
        double db = l1.b[static_cast<std::size_t>(j)] - l2.b[static_cast<std::size_t>(j)];
        // 2 z conj(z') - |z|^2 - |z'|^2 = -|z - z'|^2 + 2 i Im(z conj(z'))
        double im = l2.a[static_cast<std::size_t>(j)] * l1.b[static_cast<std::size_t>(j)] -
                    l1.a[static_cast<std::size_t>(j)] * l2.b[static_cast<std::size_t>(j)];
        ex += Cplx{-(da * da + db * db), 2.0 * im};
    }
    return std::exp(ex * (kPi / (2.0 * h)));
}

Cplx repker_fock(const std::vector<double>& q, const std::vector<double>& p,
                 const std::vector<double>& qp, const std::vector<double>& pp, double h) {
    int n = static_cast<int>(q.size());
    Cplx ex{};
    for (int j = 0; j < n; ++j) {
        double dq = q[static_cast<std::size_t>(j)] - qp[static_cast<std::size_t>(j)];
        double dp = p[static_cast<std::size_t>(j)] - pp[static_cast<std::size_t>(j)];
        double im = q[static_cast<std::size_t>(j)] * pp[static_cast<std::size_t>(j)] -
                    qp[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
        ex += Cplx{dq * dq + dp * dp, 2.0 * im};
    }
    return ipow(1.0 / h, n) * std::exp(ex * (-2.0 * kPi / h));
}

KernelState kernel_from_state(const HState& v) {
    int n = v.dof();
    double h = v.h;
    int m = 4 * n;  // (x, y, x', y')
    // conj(f)(x' - x, y' - y)
    PGFun cf = pg_conj(v.f);
    std::vector<double> L(static_cast<std::size_t>(2 * n) * m, 0.0);
    for (int j = 0; j < n; ++j) {
        L[static_cast<std::size_t>(j) * m + (2 * n + j)] = 1.0;   // x'_j
        L[static_cast<std::size_t>(j) * m + j] = -1.0;            // -x_j
        L[static_cast<std::size_t>(n + j) * m + (3 * n + j)] = 1.0;
        L[static_cast<std::size_t>(n + j) * m + (n + j)] = -1.0;
    }
    PGFun shifted = pg_affine_sub(cf, L, m, std::vector<Cplx>(static_cast<std::size_t>(2 * n), Cplx{}));
    QuadExp ph(m);
    for (int j = 0; j < n; ++j) {
        ph.add_quad(j, 3 * n + j, Cplx{0.0, kPi * h});        // x.y'
        ph.add_quad(2 * n + j, n + j, Cplx{0.0, -kPi * h});   // -x'.y
    }
    PGFun integrand = shifted * PGFun::gaussian(ph) * embed(v.f, m, 2 * n);
    PGFun l = pg_integrate_out(integrand, range_vars(2 * n, 4 * n));
    return {h, ipow(4.0 / h, n) * l};
}

Cplx kernel_pairing(const PMechObservable& B, const KernelState& l) {
    int n = B.dof();
    if (n != l.dof()) throw DimensionMismatch("kernel_pairing: dof mismatch");
    PGFun lbar = pg_conj(l.l);
    std::vector<double> origin(static_cast<std::size_t>(2 * n), 0.0);
    Cplx total{};
    Cplx base = Cplx{-1.0, 0.0} / (2.0 * kPi * kI);
    for (const auto& [key, c] : B.poly.terms()) {
        PGFun d = lbar;
        int order = 0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < key.first.e[static_cast<std::size_t>(j)]; ++i) {
                d = pg_diff(d, j);
                ++order;
            }
            for (int i = 0; i < key.second.e[static_cast<std::size_t>(j)]; ++i) {
                d = pg_diff(d, n + j);
                ++order;
            }
        }
        total += c * std::pow(base, order) * pg_eval(d, origin);
    }
    if (B.central_weight) total *= B.central_weight(l.h);
    return total;
}

Cplx pure_state_eval(const std::vector<double>& a, const std::vector<double>& b,
                     const PMechObservable& obs) {
    return kernel_pairing(obs, kernel_pure_state(a, b));
}

HState generalized_eigenfunction(GeneralizedKind kind, double xi, double h) {
    QuadExp e(2);
    if (kind == GeneralizedKind::Position) {
        e.add_lin(1, Cplx{2.0 * kPi * xi, 0.0});
        e.add_lin(0, Cplx{0.0, 2.0 * kPi * xi});
        e.add_quad(1, 1, Cplx{-kPi * h, 0.0});
        e.add_quad(0, 1, Cplx{0.0, -kPi * h});
    } else {
        e.add_lin(0, Cplx{2.0 * kPi * xi, 0.0});
        e.add_lin(1, Cplx{0.0, 2.0 * kPi * xi});
        e.add_quad(0, 0, Cplx{-kPi * h, 0.0});
        e.add_quad(0, 1, Cplx{0.0, kPi * h});
    }
    e.c = Cplx{-kPi * xi * xi / h, 0.0};
    return {h, PGFun::gaussian(e)};
}

double fock_polarization_residual(const FockState& fst, const std::vector<std::vector<double>>& pts) {
    int n = fst.dof();
    double h = fst.h;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        PGFun d = Cplx{0.5 * h, 0.0} * (pg_diff(fst.f, n + j) + kI * pg_diff(fst.f, j));
        MultiIndex mp(2 * n), mq(2 * n);
        mp.e[static_cast<std::size_t>(n + j)] = 1;
        mq.e[static_cast<std::size_t>(j)] = 1;
        PGFun mult = (PGFun::monomial(2 * n, mp, Cplx{2.0 * kPi, 0.0}) +
                      PGFun::monomial(2 * n, mq, 2.0 * kPi * kI)) *
                     fst.f;
        PGFun res = d + mult;
        for (const auto& pt : pts) worst = std::max(worst, std::abs(pg_eval(res, pt)));
    }
    return worst;
}

double hh_polarization_residual(const HState& v, const std::vector<std::vector<double>>& pts) {
    int n = v.dof();
    double h = v.h;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        PGFun d = pg_diff(v.f, j) - kI * pg_diff(v.f, n + j);
        MultiIndex mx(2 * n), my(2 * n);
        mx.e[static_cast<std::size_t>(j)] = 1;
        my.e[static_cast<std::size_t>(n + j)] = 1;
        PGFun mult = (PGFun::monomial(2 * n, mx, Cplx{kPi * h, 0.0}) +
                      PGFun::monomial(2 * n, my, Cplx{0.0, -kPi * h})) *
                     v.f;
        PGFun res = d + mult;
        for (const auto& pt : pts) worst = std::max(worst, std::abs(pg_eval(res, pt)));
    }
    return worst;
}

}  // namespace pmech
