#include "pmech/heisenberg.hpp"

#include <cmath>

namespace pmech {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// identity substitution with a translation on 2n variables
PGFun translate(const PGFun& f, const std::vector<Cplx>& t) {
    int m = f.dim();
    std::vector<double> L(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) L[static_cast<std::size_t>(i) * m + i] = 1.0;
    return pg_affine_sub(f, L, m, t);
}

// pure exponential factor exp(2 sum b_i x_i) on m variables
PGFun linear_phase(int m, const std::vector<Cplx>& b_half) {
    QuadExp e(m);
    e.b = b_half;
    return PGFun::gaussian(e);
}

}  // namespace

GroupElement hg_multiply(const GroupElement& g1, const GroupElement& g2) {
    if (g1.dof() != g2.dof()) throw DimensionMismatch("hg_multiply: dimension mismatch");
    GroupElement r = g1;
    r.s = g1.s + g2.s + 0.5 * (dot(g1.x, g2.y) - dot(g2.x, g1.y));
    for (int j = 0; j < g1.dof(); ++j) {
        r.x[static_cast<std::size_t>(j)] += g2.x[static_cast<std::size_t>(j)];
        r.y[static_cast<std::size_t>(j)] += g2.y[static_cast<std::size_t>(j)];
    }
    return r;
}

GroupElement hg_inverse(const GroupElement& g) {
    GroupElement r = g;
    r.s = -g.s;
    for (auto& v : r.x) v = -v;
    for (auto& v : r.y) v = -v;
    return r;
}

SchrodingerState schrodinger_apply(const GroupElement& g, const SchrodingerState& st) {
    int n = st.dof();
    if (g.dof() != n) throw DimensionMismatch("schrodinger_apply: dimension mismatch");
    double h = st.h;
    // psi(xi + h y)
    std::vector<Cplx> t(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = h * g.y[static_cast<std::size_t>(j)];
    PGFun shifted = translate(st.psi, t);
    // e^{2 pi i x.xi}
    std::vector<Cplx> b(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) b[static_cast<std::size_t>(j)] = kPi * kI * g.x[static_cast<std::size_t>(j)];
    PGFun phase = linear_phase(n, b);
    Cplx scalar = std::exp(Cplx{0.0, -2.0 * kPi * h * g.s + kPi * h * dot(g.x, g.y)});
    return {h, scalar * (shifted * phase)};
}

FockState rho_h_apply(const GroupElement& g, const FockState& f) {
    int n = f.dof();
    if (g.dof() != n) throw DimensionMismatch("rho_h_apply: dimension mismatch");
    double h = f.h;
    // f(q - h y/2, p + h x/2)
    std::vector<Cplx> t(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        t[static_cast<std::size_t>(j)] = -0.5 * h * g.y[static_cast<std::size_t>(j)];
        t[static_cast<std::size_t>(n + j)] = 0.5 * h * g.x[static_cast<std::size_t>(j)];
    }
    PGFun shifted = translate(f.f, t);
    // e^{-2 pi i (q.x + p.y)}
    std::vector<Cplx> b(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        b[static_cast<std::size_t>(j)] = -kPi * kI * g.x[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(n + j)] = -kPi * kI * g.y[static_cast<std::size_t>(j)];
    }
    PGFun phase = linear_phase(2 * n, b);
    Cplx scalar = std::exp(Cplx{0.0, -2.0 * kPi * h * g.s});
    return {h, scalar * (shifted * phase)};
}

Cplx rho_qp_apply(const std::vector<double>& q, const std::vector<double>& p, const GroupElement& g) {
    if (static_cast<int>(q.size()) != g.dof() || static_cast<int>(p.size()) != g.dof())
        throw DimensionMismatch("rho_qp_apply: dimension mismatch");
    return std::exp(Cplx{0.0, -2.0 * kPi * (dot(q, g.x) + dot(p, g.y))});
}

HState left_shift_apply(const GroupElement& g, const HState& v) {
    int n = v.dof();
    if (g.dof() != n) throw DimensionMismatch("left_shift_apply: dimension mismatch");
    double h = v.h;
    // f(x - x', y - y')
    std::vector<Cplx> t(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        t[static_cast<std::size_t>(j)] = -g.x[static_cast<std::size_t>(j)];
        t[static_cast<std::size_t>(n + j)] = -g.y[static_cast<std::size_t>(j)];
    }
    PGFun shifted = translate(v.f, t);
    // e^{pi i h (x.y' - x'.y)}
    std::vector<Cplx> b(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        b[static_cast<std::size_t>(j)] = 0.5 * kPi * kI * h * g.y[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(n + j)] = -0.5 * kPi * kI * h * g.x[static_cast<std::size_t>(j)];
    }
    PGFun phase = linear_phase(2 * n, b);
    Cplx scalar = std::exp(Cplx{0.0, -2.0 * kPi * h * g.s});
    return {h, scalar * (shifted * phase)};
}

HState zeta_apply(double r, const std::vector<double>& a, const std::vector<double>& b, const HState& v) {
    int n = v.dof();
    if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
        throw DimensionMismatch("zeta_apply: dimension mismatch");
    double h = v.h;
    if (h == 0.0) throw std::invalid_argument("zeta_apply: h must be nonzero");
    // f(x + b/h, y - a/h)
    std::vector<Cplx> t(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        t[static_cast<std::size_t>(j)] = b[static_cast<std::size_t>(j)] / h;
        t[static_cast<std::size_t>(n + j)] = -a[static_cast<std::size_t>(j)] / h;
    }
    PGFun shifted = translate(v.f, t);
    // e^{pi i (a.x + b.y)} from the s-shift (b.y + a.x)/(2h) on the fiber
    std::vector<Cplx> bb(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        bb[static_cast<std::size_t>(j)] = 0.5 * kPi * kI * a[static_cast<std::size_t>(j)];
        bb[static_cast<std::size_t>(n + j)] = 0.5 * kPi * kI * b[static_cast<std::size_t>(j)];
    }
    PGFun phase = linear_phase(2 * n, bb);
    Cplx scalar = std::exp(Cplx{0.0, 2.0 * kPi * r / h});
    return {h, scalar * (shifted * phase)};
}

PGFun vector_field_apply(VectorField which, int j, const PGFun& B) {
    int m = B.dim();
    int n = (m - 1) / 2;
    if (m < 3 || m != 2 * n + 1) throw DimensionMismatch("vector_field_apply: expected (s,x,y) layout");
    int xj = 1 + j, yj = 1 + n + j;
    PGFun ds = pg_diff(B, 0);
    auto times_var = [&](const PGFun& f, int var) {
        MultiIndex mi(m);
        mi.e[static_cast<std::size_t>(var)] = 1;
        return PGFun::monomial(m, mi, 1.0) * f;
    };
    switch (which) {
        case VectorField::SLeft:
            return ds;
        case VectorField::SRight:
            return Cplx{-1.0, 0.0} * ds;
        case VectorField::XLeft:
            return pg_diff(B, xj) - Cplx{0.5, 0.0} * times_var(ds, yj);
        case VectorField::XRight:
            return pg_diff(B, xj) + Cplx{0.5, 0.0} * times_var(ds, yj);
        case VectorField::YLeft:
            return pg_diff(B, yj) + Cplx{0.5, 0.0} * times_var(ds, xj);
        case VectorField::YRight:
            return pg_diff(B, yj) - Cplx{0.5, 0.0} * times_var(ds, xj);
    }
    throw std::logic_error("vector_field_apply: unknown field");
}

HState vector_field_apply(VectorField which, int j, const HState& v) {
    int n = v.dof();
    int m = 2 * n;
    int xj = j, yj = n + j;
    Cplx dsc{0.0, 2.0 * kPi * v.h};  // d/ds on the fiber
    auto times_var = [&](const PGFun& f, int var) {
        MultiIndex mi(m);
        mi.e[static_cast<std::size_t>(var)] = 1;
        return PGFun::monomial(m, mi, 1.0) * f;
    };
    PGFun r(m);
    switch (which) {
        case VectorField::SLeft:
            r = dsc * v.f;
            break;
        case VectorField::SRight:
            r = -dsc * v.f;
            break;
        case VectorField::XLeft:
            r = pg_diff(v.f, xj) - 0.5 * dsc * times_var(v.f, yj);
            break;
        case VectorField::XRight:
            r = pg_diff(v.f, xj) + 0.5 * dsc * times_var(v.f, yj);
            break;
        case VectorField::YLeft:
            r = pg_diff(v.f, yj) + 0.5 * dsc * times_var(v.f, xj);
            break;
        case VectorField::YRight:
            r = pg_diff(v.f, yj) - 0.5 * dsc * times_var(v.f, xj);
            break;
    }
    return {v.h, r};
}

}  // namespace pmech
