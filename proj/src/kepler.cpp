#include "pmech/kepler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmech/oracles.hpp"

namespace pmech {

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// atan with values in [0, pi), consistent with the printed branch table
double atan_halfturn(double num, double den) {
    double v = std::atan(num / den);
    if (v < 0.0 || (v == 0.0 && den < 0.0)) v += kPi;
    return v;
}

}  // namespace

SphericalPoint sph_from_cartesian(const std::array<double, 3>& xi) {
    double rho2 = xi[0] * xi[0] + xi[1] * xi[1];
    if (rho2 <= 0.0)
        throw std::invalid_argument("sph_from_cartesian: point on the excluded axis xi1 = xi2 = 0");
    SphericalPoint p;
    p.r = std::sqrt(rho2 + xi[2] * xi[2]);
    // four-case azimuth
    if (xi[0] != 0.0) {
        p.theta = xi[1] >= 0.0 ? atan_halfturn(xi[1], xi[0]) : kPi + atan_halfturn(xi[1], xi[0]);
    } else {
        p.theta = xi[1] > 0.0 ? 0.5 * kPi : 1.5 * kPi;
    }
    if (p.theta >= 2.0 * kPi) p.theta -= 2.0 * kPi;
    // two-case polar angle
    double sp = std::sqrt(rho2) / p.r;
    sp = std::min(1.0, sp);
    p.phi = xi[2] >= 0.0 ? std::asin(sp) : kPi - std::asin(sp);
    return p;
}

std::array<double, 3> cartesian_from_sph(const SphericalPoint& p) {
    return {p.r * std::cos(p.theta) * std::sin(p.phi), p.r * std::sin(p.theta) * std::sin(p.phi),
            p.r * std::cos(p.phi)};
}

SphericalMomenta spherical_momenta(const std::array<double, 3>& q, const std::array<double, 3>& p) {
    SphericalPoint pt = sph_from_cartesian(q);
    SphericalMomenta m;
    m.p_r = (q[0] * p[0] + q[1] * p[1] + q[2] * p[2]) / pt.r;
    m.p_azim = q[0] * p[1] - q[1] * p[0];
    double ct = std::cos(pt.theta), st = std::sin(pt.theta);
    double cp = std::cos(pt.phi), sp = std::sin(pt.phi);
    m.p_polar = pt.r * (cp * (ct * p[0] + st * p[1]) - sp * p[2]);
    return m;
}

std::array<double, 3> cartesian_momenta(const SphericalPoint& pt, const SphericalMomenta& m) {
    double ct = std::cos(pt.theta), st = std::sin(pt.theta);
    double cp = std::cos(pt.phi), sp = std::sin(pt.phi);
    return {sp * ct * m.p_r - st / (pt.r * sp) * m.p_azim + cp * ct / pt.r * m.p_polar,
            sp * st * m.p_r + ct / (pt.r * sp) * m.p_azim + cp * st / pt.r * m.p_polar,
            cp * m.p_r - sp / pt.r * m.p_polar};
}

double assoc_legendre(int l, int m, double x) {
    if (l < 0 || std::abs(m) > l) throw std::invalid_argument("assoc_legendre: need |m| <= l");
    if (std::abs(x) > 1.0) throw std::invalid_argument("assoc_legendre: need |x| <= 1");
    if (m < 0) {
        int mm = -m;
        double sign = (mm % 2 == 0) ? 1.0 : -1.0;
        return sign * factorial(l - mm) / factorial(l + mm) * assoc_legendre(l, mm, x);
    }
    // P_mm = (2m-1)!! (1-x^2)^{m/2}, plain Rodrigues normalisation
    double pmm = 1.0;
    double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * s;
    if (l == m) return pmm;
    double pm1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pm1;
    double p = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        p = (x * (2.0 * ll - 1.0) * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pm1;
        pm1 = p;
    }
    return p;
}

Cplx sph_harmonic(int l, int m, double theta_polar, double phi_azim) {
    double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * factorial(l - m) / factorial(l + m));
    double cs = (m % 2 == 0) ? 1.0 : -1.0;
    return norm * cs * std::exp(Cplx{0.0, m * phi_azim}) * assoc_legendre(l, m, std::cos(theta_polar));
}

double laguerre_std(int k, int alpha, double z) {
    if (k < 0) throw std::invalid_argument("laguerre_std: k >= 0");
    double l0 = 1.0;
    if (k == 0) return l0;
    double l1 = 1.0 + alpha - z;
    for (int i = 1; i < k; ++i) {
        double l2 = ((2.0 * i + 1.0 + alpha - z) * l1 - (i + alpha) * l0) / (i + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

double assoc_laguerre(int p, int q_minus_p, double z) {
    if (p < 0 || q_minus_p < 0) throw std::invalid_argument("assoc_laguerre: bad indices");
    int q = p + q_minus_p;
    return factorial(q) * laguerre_std(q_minus_p, p, z);
}

QuantumNumbers::QuantumNumbers(int n_, int l_, int m_) : n(n_), l(l_), m(m_) {
    if (n < 1 || l < 0 || l > n - 1 || m < -l || m > l)
        throw std::invalid_argument("QuantumNumbers: need n >= 1, 0 <= l <= n-1, |m| <= l");
}

double coulomb_kappa(int n, double h) { return 4.0 * kPi * kPi / (n * h * h); }

double coulomb_energy(int n, double h) { return -2.0 * kPi * kPi / (static_cast<double>(n) * n * h * h); }

double coulomb_energy_printed(int n, double h) {
    return -4.0 * kPi * kPi / (static_cast<double>(n) * n * h * h);
}

double coulomb_radial(const QuantumNumbers& qn, double h, double r) {
    double kap = coulomb_kappa(qn.n, h);
    double norm = std::sqrt(ipow(2.0 * kap, 3) * factorial(qn.n - qn.l - 1) /
                            (2.0 * qn.n * factorial(qn.n + qn.l)));
    double z = 2.0 * kap * r;
    return norm * std::exp(-kap * r) * ipow(z, qn.l) * laguerre_std(qn.n - qn.l - 1, 2 * qn.l + 1, z);
}

RadialGrid::RadialGrid(double rmax, int n) : r_max(rmax), N(n) {
    if (!(rmax > 0.0) || n < 16) throw std::invalid_argument("RadialGrid: need r_max > 0, N >= 16");
}

std::vector<double> coulomb_eigenfunction_radial(const QuantumNumbers& qn, double h,
                                                 const RadialGrid& grid) {
    std::vector<double> out(static_cast<std::size_t>(grid.interior()));
    for (int i = 0; i < grid.interior(); ++i) out[static_cast<std::size_t>(i)] = coulomb_radial(qn, h, grid.r(i));
    return out;
}

Cplx coulomb_eigenfunction_eval(const QuantumNumbers& qn, double h, const SphericalPoint& pt) {
    return coulomb_radial(qn, h, pt.r) * sph_harmonic(qn.l, qn.m, pt.phi, pt.theta);
}

PGFun angular_momentum_apply(int i, double h, const PGFun& psi) {
    if (psi.dim() != 3) throw DimensionMismatch("angular_momentum_apply: 3 variables expected");
    if (i < 0 || i > 2) throw std::invalid_argument("angular_momentum_apply: component 0..2");
    int j = (i + 1) % 3, k = (i + 2) % 3;
    MultiIndex mj(3), mk(3);
    mj.e[static_cast<std::size_t>(j)] = 1;
    mk.e[static_cast<std::size_t>(k)] = 1;
    PGFun term = PGFun::monomial(3, mj, Cplx{1.0, 0.0}) * pg_diff(psi, k) -
                 PGFun::monomial(3, mk, Cplx{1.0, 0.0}) * pg_diff(psi, j);
    return Cplx{h, 0.0} / (2.0 * kPi * kI) * term;
}

Tridiag coulomb_hamiltonian_fd(int l, double h, const RadialGrid& grid) {
    int m = grid.interior();
    double dr = grid.dr();
    double kin = h * h / (8.0 * kPi * kPi);
    Tridiag T;
    T.diag.resize(static_cast<std::size_t>(m));
    T.off.assign(static_cast<std::size_t>(m) - 1, -kin / (dr * dr));
    for (int i = 0; i < m; ++i) {
        double r = grid.r(i);
        T.diag[static_cast<std::size_t>(i)] = kin * (2.0 / (dr * dr) + l * (l + 1.0) / (r * r)) - 1.0 / r;
    }
    return T;
}

namespace {

// eigenvalues of T strictly below lambda (Sturm sequence count)
int sturm_count(const Tridiag& T, double lambda) {
    int count = 0;
    double d = T.diag[0] - lambda;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < T.diag.size(); ++i) {
        double off = T.off[i - 1];
        if (d == 0.0) d = -1e-300;
        d = (T.diag[i] - lambda) - off * off / d;
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace

std::vector<double> tridiag_lowest_eigenvalues(const Tridiag& T, int count) {
    double lo = T.diag[0], hi = T.diag[0];
    for (std::size_t i = 0; i < T.diag.size(); ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(T.off[i - 1]);
        if (i + 1 < T.diag.size()) radius += std::abs(T.off[i]);
        lo = std::min(lo, T.diag[i] - radius);
        hi = std::max(hi, T.diag[i] + radius);
    }
    std::vector<double> eig;
    for (int k = 1; k <= count; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + b);
            if (sturm_count(T, mid) >= k)
                b = mid;
            else
                a = mid;
            if (b - a <= 1e-14 * std::max(1.0, std::abs(b))) break;
        }
        eig.push_back(0.5 * (a + b));
    }
    return eig;
}

std::vector<double> fd_spectrum(int l, double h, const RadialGrid& grid, int count) {
    auto e1 = tridiag_lowest_eigenvalues(coulomb_hamiltonian_fd(l, h, grid), count);
    RadialGrid fine(grid.r_max, 2 * grid.N);
    auto e2 = tridiag_lowest_eigenvalues(coulomb_hamiltonian_fd(l, h, fine), count);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double a = e1[static_cast<std::size_t>(k)], b = e2[static_cast<std::size_t>(k)];
        if (std::abs(a - b) > 1e-3 * std::abs(b))
            throw std::runtime_error("fd_spectrum: eigenvalue not converged between N and 2N");
        out[static_cast<std::size_t>(k)] = (4.0 * b - a) / 3.0;  // second-order Richardson
    }
    return out;
}

std::vector<SpectrumRow> coulomb_spectrum_report(double h, int n_max, const RadialGrid& grid) {
    std::vector<SpectrumRow> rows;
    for (int l = 0; l < n_max; ++l) {
        int count = n_max - l;
        auto raw = tridiag_lowest_eigenvalues(coulomb_hamiltonian_fd(l, h, grid), count);
        auto extrap = fd_spectrum(l, h, grid, count);
        for (int k = 0; k < count; ++k) {
            SpectrumRow row;
            row.n = l + 1 + k;
            row.l = l;
            row.E_fd = raw[static_cast<std::size_t>(k)];
            row.E_extrapolated = extrap[static_cast<std::size_t>(k)];
            row.E_paper_formula = coulomb_energy_printed(row.n, h);
            row.rel_discrepancy =
                std::abs(row.E_extrapolated - row.E_paper_formula) / std::abs(row.E_paper_formula);
            rows.push_back(row);
        }
    }
    return rows;
}

SphFn sphfn_from_pgfun(const PGFun& eta) {
    if (eta.dim() != 3) throw DimensionMismatch("sphfn_from_pgfun: 3 variables expected");
    return [eta](const SphericalPoint& pt) {
        auto xi = cartesian_from_sph(pt);
        return pg_eval(eta, {xi[0], xi[1], xi[2]});
    };
}

SphFn rho_hP_apply(const GroupElement& g, double h, SphFn psi) {
    if (g.dof() != 3) throw DimensionMismatch("rho_hP_apply: three degrees of freedom");
    return [g, h, psi](const SphericalPoint& pt) {
        auto xi = cartesian_from_sph(pt);
        double xy = 0.0, xxi = 0.0;
        std::array<double, 3> shifted{};
        for (int j = 0; j < 3; ++j) {
            xy += g.x[static_cast<std::size_t>(j)] * g.y[static_cast<std::size_t>(j)];
            xxi += g.x[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
            shifted[static_cast<std::size_t>(j)] =
                xi[static_cast<std::size_t>(j)] + h * g.y[static_cast<std::size_t>(j)];
        }
        Cplx phase = std::exp(Cplx{0.0, -2.0 * kPi * h * g.s + kPi * h * xy + 2.0 * kPi * xxi});
        return phase * psi(sph_from_cartesian(shifted));
    };
}

SphFn rho_hP_L3_apply(double h, SphFn psi, double step) {
    return [h, psi, step](const SphericalPoint& pt) {
        SphericalPoint a = pt, b = pt;
        a.theta += step;
        b.theta -= step;
        Cplx d = (psi(a) - psi(b)) / (2.0 * step);
        return Cplx{0.0, -h / (2.0 * kPi)} * d;  // (h / 2 pi i) d/dtheta
    };
}

Cplx position_multiplier(const PositionTransform& T, int j, const std::vector<double>& zeta,
                         TransformSign sign) {
    auto xi = T.inverse(zeta);
    double v = xi[static_cast<std::size_t>(j)];
    return sign == TransformSign::Physical ? Cplx{v, 0.0} : Cplx{-v, 0.0};
}

std::vector<Cplx> momentum_coefficients(const PositionTransform& T, int j, double h,
                                        const std::vector<double>& zeta, TransformSign sign) {
    auto xi = T.inverse(zeta);
    RealMat D = T.jacobian(xi);
    std::vector<Cplx> coeffs(static_cast<std::size_t>(T.n));
    for (int k = 0; k < T.n; ++k) {
        double d = D.at(k, j);
        // Physical: (h / 2 pi i) sum_k psi_,k (DM)_{k,j}; Printed keeps the
        // source's -h prefactor.
        coeffs[static_cast<std::size_t>(k)] = sign == TransformSign::Physical
                                                  ? Cplx{h, 0.0} / (2.0 * kPi * kI) * d
                                                  : Cplx{-h * d, 0.0};
    }
    return coeffs;
}

double canonical_check(const PositionTransform& T, const std::vector<std::vector<double>>& zeta_pts,
                       const std::vector<std::vector<double>>& pzeta_pts, double step) {
    int n = T.n;
    auto q_of = [&](int i, const std::vector<double>& zeta) { return T.inverse(zeta)[static_cast<std::size_t>(i)]; };
    auto p_of = [&](int j, const std::vector<double>& zeta, const std::vector<double>& pz) {
        auto xi = T.inverse(zeta);
        RealMat D = T.jacobian(xi);
        double v = 0.0;
        for (int k = 0; k < n; ++k) v += D.at(k, j) * pz[static_cast<std::size_t>(k)];
        return v;
    };
    (void)p_of;
    double worst = 0.0;
    for (std::size_t s = 0; s < zeta_pts.size(); ++s) {
        const auto& zeta = zeta_pts[s];
        const auto& pz = pzeta_pts[s];
        (void)pz;
        auto xi = T.inverse(zeta);
        RealMat D = T.jacobian(xi);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                // q_i has no p-dependence and dp_j/dp_{zeta_k} = (DM)_{k,j},
                // so {q_i, p_j} = sum_k dq_i/dzeta_k (DM)_{k,j}; the zeta
                // derivative is taken by central differences.
                double bracket = 0.0;
                for (int k = 0; k < n; ++k) {
                    auto zp = zeta, zm = zeta;
                    zp[static_cast<std::size_t>(k)] += step;
                    zm[static_cast<std::size_t>(k)] -= step;
                    double dq = (q_of(i, zp) - q_of(i, zm)) / (2.0 * step);
                    bracket += dq * D.at(k, j);
                }
                double target = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(bracket - target));
            }
    }
    return worst;
}

AMCoeffs klauder_am_state(int level, double theta_bar, double phi_bar, double psi_bar) {
    AMCoeffs am;
    am.level = level;
    am.c.resize(static_cast<std::size_t>(level) + 1);
    double sh = std::sin(0.5 * theta_bar), ch = std::cos(0.5 * theta_bar);
    for (int l = 0; l <= level; ++l) {
        am.c[static_cast<std::size_t>(l)].assign(static_cast<std::size_t>(2 * l) + 1, Cplx{});
        for (int m = -l; m <= l; ++m) {
            double w = std::sqrt(factorial(2 * l) / (factorial(l + m) * factorial(l - m))) *
                       ipow(sh, l - m) * ipow(ch, l + m) * std::sqrt(2.0 * l + 1.0);
            Cplx phase = std::exp(Cplx{0.0, -(m * phi_bar + l * psi_bar)});
            am.c[static_cast<std::size_t>(l)][static_cast<std::size_t>(m + l)] = w * phase;
        }
    }
    return am;
}

double BSCoeffs::norm() const { return std::sqrt(std::abs(bs_inner(*this, *this))); }

Cplx bs_inner(const BSCoeffs& x, const BSCoeffs& y) {
    Cplx s{};
    std::size_t levels = std::min(x.c.size(), y.c.size());
    for (std::size_t n = 0; n < levels; ++n) {
        std::size_t ls = std::min(x.c[n].size(), y.c[n].size());
        for (std::size_t l = 0; l < ls; ++l) {
            std::size_t ms = std::min(x.c[n][l].size(), y.c[n][l].size());
            for (std::size_t m = 0; m < ms; ++m) s += x.c[n][l][m] * std::conj(y.c[n][l][m]);
        }
    }
    return s;
}

BSCoeffs klauder_cs(const KlauderLabel& lbl, double h, int N_max) {
    double sigma = lbl.sigma;
    // tail of e^{-2 sigma^2} sum_{n > N} sigma^{2n} (n+1)^2 / n! (the (n+1)^2
    // is the squared norm of the printed angular block)
    double tail = 0.0;
    // t_n = e^{-2 s^2} s^{2n} (n+1)^2 / n!, iterated by term ratios so large
    // sigma cannot overflow the factorial
    double t = std::exp(-2.0 * sigma * sigma);
    for (int n = 1; n <= N_max + 1; ++n) t *= sigma * sigma / n;
    t *= (N_max + 2.0) * (N_max + 2.0);
    for (int n = N_max + 1; n <= N_max + 400 && t > 1e-300; ++n) {
        tail += t;
        t *= sigma * sigma / (n + 1.0) * ((n + 3.0) / (n + 2.0)) * ((n + 3.0) / (n + 2.0));
    }
    if (!(tail <= 1e-12))
        throw std::invalid_argument("klauder_cs: truncation bound unreachable at N_max");

    BSCoeffs st;
    st.h = h;
    st.c.resize(static_cast<std::size_t>(N_max) + 1);
    double pw2 = 1.0, fact2 = 1.0;
    for (int n = 0; n <= N_max; ++n) {
        if (n > 0) {
            pw2 *= sigma;
            fact2 *= n;
        }
        // sigma^n e^{2 pi i gamma / (h (n+1)^2)} / sqrt(n!), weight e^{-sigma^2}
        Cplx wn = std::exp(-sigma * sigma) * ((n == 0) ? 1.0 : pw2) / std::sqrt(fact2) *
                  std::exp(Cplx{0.0, 2.0 * kPi * lbl.gamma / (h * (n + 1.0) * (n + 1.0))});
        AMCoeffs am = klauder_am_state(n, lbl.theta_bar, lbl.phi_bar, lbl.psi_bar);
        st.c[static_cast<std::size_t>(n)].resize(am.c.size());
        for (std::size_t l = 0; l < am.c.size(); ++l) {
            st.c[static_cast<std::size_t>(n)][l].resize(am.c[l].size());
            for (std::size_t m = 0; m < am.c[l].size(); ++m)
                st.c[static_cast<std::size_t>(n)][l][m] = wn * am.c[l][m];
        }
    }
    double nrm = st.norm();
    for (auto& ln : st.c)
        for (auto& ll : ln)
            for (auto& v : ll) v /= nrm;
    return st;
}

Cplx kc_transform_eval(const BSCoeffs& psi, const KlauderLabel& lbl, int N_max) {
    BSCoeffs cs = klauder_cs(lbl, psi.h, N_max);
    return bs_inner(psi, cs);
}

double kc_shift_rate(double h) { return 4.0 * kPi * kPi / (h * h); }

BSCoeffs kc_time_evolve(const BSCoeffs& psi, double t) {
    BSCoeffs out = psi;
    double omega = kc_shift_rate(psi.h);
    for (std::size_t n = 0; n < out.c.size(); ++n) {
        double En = -omega / ((n + 1.0) * (n + 1.0));
        // e^{-(2 pi / i h) E_n t} = e^{+ 2 pi i E_n t / h}
        Cplx phase = std::exp(Cplx{0.0, 2.0 * kPi * En * t / psi.h});
        for (auto& ll : out.c[n])
            for (auto& v : ll) v *= phase;
    }
    return out;
}

double am_resolution_check(int level, int n_theta, int n_angle) {
    auto gram = [&](int nt, int na) {
        std::vector<double> xs, ws;
        oracles::gauss_legendre(nt, xs, ws);
        int dim = (level + 1) * (level + 1);
        std::vector<Cplx> G(static_cast<std::size_t>(dim) * dim, Cplx{});
        auto flat = [&](int l, int m) { return l * l + (m + l); };
        for (int it = 0; it < nt; ++it) {
            double theta = 0.5 * kPi * (xs[static_cast<std::size_t>(it)] + 1.0);
            double wt = 0.5 * kPi * ws[static_cast<std::size_t>(it)] * std::sin(theta);
            for (int ip = 0; ip < na; ++ip)
                for (int is = 0; is < na; ++is) {
                    double phi = 2.0 * kPi * ip / na;
                    double psi = 2.0 * kPi * is / na;
                    double wa = (2.0 * kPi / na) * (2.0 * kPi / na);
                    AMCoeffs am = klauder_am_state(level, theta, phi, psi);
                    // measure sin(theta) dtheta dphi dpsi / (8 pi^2)
                    double w = wt * wa / (8.0 * kPi * kPi);
                    for (int l = 0; l <= level; ++l)
                        for (int m = -l; m <= l; ++m)
                            for (int l2 = 0; l2 <= level; ++l2)
                                for (int m2 = -l2; m2 <= l2; ++m2) {
                                    Cplx v = am.c[static_cast<std::size_t>(l)][static_cast<std::size_t>(m + l)] *
                                             std::conj(am.c[static_cast<std::size_t>(l2)][static_cast<std::size_t>(m2 + l2)]);
                                    G[static_cast<std::size_t>(flat(l, m)) * dim + flat(l2, m2)] += w * v;
                                }
                }
        }
        double defect = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                Cplx expect = (i == j) ? Cplx{1.0, 0.0} : Cplx{};
                defect = std::max(defect, std::abs(G[static_cast<std::size_t>(i) * dim + j] - expect));
            }
        return defect;
    };
    double d1 = gram(n_theta, n_angle);
    double d2 = gram(2 * n_theta, 2 * n_angle);
    if (d1 > 2.0 * d2 + 1e-12)
        throw std::runtime_error("am_resolution_check: quadrature under-resolved (doubling changed the defect)");
    return std::max(d1, d2);
}

}  // namespace pmech
