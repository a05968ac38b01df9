#include "pmech/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmech::oracles {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

namespace {

// Box radius so the integrand tail is below ~1e-20 of its peak.
double term_box_radius(const PGTerm& t) {
    int m = t.exp.dim;
    std::vector<double> re(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) re[static_cast<std::size_t>(i) * m + j] = t.exp.a(i, j).real();
    auto eig = symmetric_eigenvalues(re, m);
    double lmin = eig.front();
    if (!(lmin > 0.0)) throw NotIntegrable("quad oracle: Re(A) not positive definite");
    double bnorm = 0.0;
    for (const auto& z : t.exp.b) bnorm += z.real() * z.real();
    bnorm = std::sqrt(bnorm);
    double mono = 0.0;
    for (int e : t.mono.e) mono += e;
    return bnorm / lmin + std::sqrt((50.0 + 5.0 * mono) / lmin) + 1.0;
}

Cplx tensor_gl(const PGFun& f, double R, int order, int panels) {
    std::vector<double> xs, ws;
    gauss_legendre(order, xs, ws);
    int m = f.dim();
    std::vector<double> nodes, weights;
    double pw = 2.0 * R / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = -R + p * pw;
        for (int i = 0; i < order; ++i) {
            nodes.push_back(lo + 0.5 * pw * (xs[static_cast<std::size_t>(i)] + 1.0));
            weights.push_back(0.5 * pw * ws[static_cast<std::size_t>(i)]);
        }
    }
    std::size_t npts = nodes.size();
    Cplx total{};
    std::vector<double> pt(static_cast<std::size_t>(m));
    std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
    while (true) {
        double w = 1.0;
        for (int j = 0; j < m; ++j) {
            pt[static_cast<std::size_t>(j)] = nodes[idx[static_cast<std::size_t>(j)]];
            w *= weights[idx[static_cast<std::size_t>(j)]];
        }
        total += w * pg_eval(f, pt);
        int j = 0;
        for (; j < m; ++j) {
            if (++idx[static_cast<std::size_t>(j)] < npts) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j == m) break;
    }
    return total;
}

}  // namespace

Cplx quad_integrate(const PGFun& f, double rel_tol) {
    if (f.is_zero()) return {};
    if (f.dim() > 3) throw std::invalid_argument("quad oracle supports dims 1-3");
    double R = 0.0;
    for (const auto& t : f.terms()) R = std::max(R, term_box_radius(t));
    int order = f.dim() <= 2 ? 48 : 40;
    Cplx prev = tensor_gl(f, R, order, 2);
    for (int round = 0; round < 3; ++round) {
        int o2 = order + order / 2;
        Cplx cur = tensor_gl(f, R, o2, 2);
        double scale = std::max({1e-300, std::abs(cur), std::abs(prev)});
        if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        prev = cur;
        order = o2;
    }
    return prev;
}

double simpson(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    struct Rec {
        static double go(const std::function<double(double)>& f, double a, double b, double fa,
                         double fm, double fb, double whole, double tol, int depth) {
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
                   go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        }
    };
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Rec::go(f, a, b, fa, fm, fb, whole, abs_tol, 48);
}

Cplx simpson_c(const std::function<Cplx(double)>& f, double a, double b, double abs_tol) {
    double re = simpson([&](double t) { return f(t).real(); }, a, b, abs_tol);
    double im = simpson([&](double t) { return f(t).imag(); }, a, b, abs_tol);
    return {re, im};
}

std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                        std::vector<double> y, double t0, double t1, double step) {
    double t = t0;
    double dir = t1 >= t0 ? 1.0 : -1.0;
    step = std::abs(step) * dir;
    auto axpy = [](std::vector<double> a, const std::vector<double>& b, double s) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
        return a;
    };
    while (dir * (t1 - t) > 1e-15) {
        double hstep = step;
        if (dir * (t + hstep - t1) > 0.0) hstep = t1 - t;
        auto k1 = f(t, y);
        auto k2 = f(t + 0.5 * hstep, axpy(y, k1, 0.5 * hstep));
        auto k3 = f(t + 0.5 * hstep, axpy(y, k2, 0.5 * hstep));
        auto k4 = f(t + hstep, axpy(y, k3, hstep));
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += hstep;
    }
    return y;
}

double central_diff(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

Cplx central_diff_c(const std::function<Cplx(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace pmech::oracles
