#include "pmech/cantrans.hpp"

#include <cmath>

namespace pmech {

namespace {

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

RealMat RealMat::identity(int n) {
    RealMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

RealMat RealMat::transpose() const {
    RealMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

RealMat RealMat::block(int i0, int j0, int r, int c) const {
    RealMat b(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) b.at(i, j) = at(i0 + i, j0 + j);
    return b;
}

RealMat operator*(const RealMat& x, const RealMat& y) {
    if (x.cols != y.rows) throw DimensionMismatch("RealMat multiply: shape mismatch");
    RealMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

RealMat operator-(const RealMat& x, const RealMat& y) {
    RealMat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

double RealMat::det() const {
    if (rows != cols) throw DimensionMismatch("det: square matrix required");
    RealMat m = *this;
    double d = 1.0;
    for (int k = 0; k < rows; ++k) {
        int piv = k;
        for (int i = k + 1; i < rows; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(k, j));
            d = -d;
        }
        d *= m.at(k, k);
        for (int i = k + 1; i < rows; ++i) {
            double f = m.at(i, k) / m.at(k, k);
            for (int j = k; j < cols; ++j) m.at(i, j) -= f * m.at(k, j);
        }
    }
    return d;
}

RealMat RealMat::inverse() const {
    if (rows != cols) throw DimensionMismatch("inverse: square matrix required");
    int n = rows;
    RealMat m = *this;
    RealMat inv = RealMat::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == 0.0) throw std::runtime_error("RealMat::inverse: singular matrix");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(piv, j), m.at(k, j));
                std::swap(inv.at(piv, j), inv.at(k, j));
            }
        double d = m.at(k, k);
        for (int j = 0; j < n; ++j) {
            m.at(k, j) /= d;
            inv.at(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            double f = m.at(i, k);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m.at(i, j) -= f * m.at(k, j);
                inv.at(i, j) -= f * inv.at(k, j);
            }
        }
    }
    return inv;
}

RealMat symplectic_J(int n) {
    RealMat j(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        j.at(i, n + i) = 1.0;
        j.at(n + i, i) = -1.0;
    }
    return j;
}

double symplectic_defect(const RealMat& M) {
    if (M.rows != M.cols || M.rows % 2 != 0)
        throw DimensionMismatch("symplectic_defect: even square matrix required");
    int n = M.rows / 2;
    RealMat d = M.transpose() * symplectic_J(n) * M - symplectic_J(n);
    double worst = 0.0;
    for (double v : d.a) worst = std::max(worst, std::abs(v));
    return worst;
}

bool is_symplectic(const RealMat& M, double tol) { return symplectic_defect(M) <= tol; }

SymplecticMatrix::SymplecticMatrix(RealMat m, double tol) : M(std::move(m)) {
    if (!is_symplectic(M, tol))
        throw std::invalid_argument("SymplecticMatrix: M^T J M != J beyond tolerance");
}

MetaplecticFactor MetaplecticFactor::diag_block(RealMat A) {
    if (std::abs(A.det()) < 1e-14) throw std::invalid_argument("diag_block: A must be invertible");
    MetaplecticFactor f;
    f.kind = Kind::DiagBlock;
    f.P = std::move(A);
    return f;
}

MetaplecticFactor MetaplecticFactor::lower_shear(RealMat C) {
    double asym = 0.0;
    for (int i = 0; i < C.rows; ++i)
        for (int j = 0; j < C.cols; ++j) asym = std::max(asym, std::abs(C.at(i, j) - C.at(j, i)));
    if (asym > 1e-9) throw std::invalid_argument("lower_shear: C must be symmetric");
    for (int i = 0; i < C.rows; ++i)
        for (int j = i + 1; j < C.cols; ++j) {
            double m = 0.5 * (C.at(i, j) + C.at(j, i));
            C.at(i, j) = m;
            C.at(j, i) = m;
        }
    MetaplecticFactor f;
    f.kind = Kind::LowerShear;
    f.P = std::move(C);
    return f;
}

MetaplecticFactor MetaplecticFactor::j(int n) {
    MetaplecticFactor f;
    f.kind = Kind::J;
    f.P = RealMat::identity(n);
    return f;
}

MetaplecticFactor MetaplecticFactor::j_inv(int n) {
    MetaplecticFactor f;
    f.kind = Kind::Jinv;
    f.P = RealMat::identity(n);
    return f;
}

int MetaplecticFactor::dof() const { return P.rows; }

RealMat MetaplecticFactor::matrix() const {
    int n = dof();
    RealMat m(2 * n, 2 * n);
    switch (kind) {
        case Kind::DiagBlock: {
            RealMat Ainv_t = P.inverse().transpose();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    m.at(i, j) = P.at(i, j);
                    m.at(n + i, n + j) = Ainv_t.at(i, j);
                }
            return m;
        }
        case Kind::LowerShear: {
            for (int i = 0; i < n; ++i) m.at(i, i) = m.at(n + i, n + i) = 1.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m.at(n + i, j) = P.at(i, j);
            return m;
        }
        case Kind::J:
            return symplectic_J(n);
        case Kind::Jinv: {
            RealMat j = symplectic_J(n);
            return j.transpose();  // J^{-1} = J^T
        }
    }
    throw std::logic_error("MetaplecticFactor::matrix: unknown kind");
}

std::vector<MetaplecticFactor> sp_decompose(const SymplecticMatrix& M, double min_det) {
    int n = M.dof();
    RealMat A = M.M.block(0, 0, n, n);
    if (std::abs(A.det()) < min_det) {
        // pre-compose with J once and retry
        RealMat MJ = M.M * symplectic_J(n);
        RealMat A2 = MJ.block(0, 0, n, n);
        if (std::abs(A2.det()) < min_det)
            throw std::runtime_error("sp_decompose: top-left block singular even after J pre-composition");
        auto factors = sp_decompose(SymplecticMatrix(MJ), min_det);
        factors.push_back(MetaplecticFactor::j_inv(n));
        return factors;
    }
    RealMat B = M.M.block(0, n, n, n);
    RealMat C = M.M.block(n, 0, n, n);
    RealMat Ainv = A.inverse();
    RealMat CAinv = C * Ainv;
    RealMat mAinvB = Ainv * B;
    for (double& v : mAinvB.a) v = -v;
    std::vector<MetaplecticFactor> factors;
    factors.push_back(MetaplecticFactor::lower_shear(CAinv));
    factors.push_back(MetaplecticFactor::diag_block(A));
    factors.push_back(MetaplecticFactor::j(n));
    factors.push_back(MetaplecticFactor::lower_shear(mAinvB));
    factors.push_back(MetaplecticFactor::j_inv(n));
    return factors;
}

namespace {

// h-scaled Fourier transform h^{-n/2} Int psi(u) e^{sign 2 pi i xi.u / h} du
SchrodingerState fourier_h(const SchrodingerState& st, double sign) {
    int n = st.dof();
    double h = st.h;
    int m = 2 * n;  // (xi, u)
    QuadExp ph(m);
    for (int j = 0; j < n; ++j) ph.add_quad(j, n + j, Cplx{0.0, sign * 2.0 * kPi / h});
    PGFun integrand = PGFun::gaussian(ph) * embed(st.psi, m, n);
    PGFun out = pg_integrate_out(integrand, range_vars(n, 2 * n));
    return {h, ipow(1.0 / std::sqrt(h), n) * out};
}

// multiplication by exp(s * pi i xi . C xi / h)
SchrodingerState chirp_multiply(const SchrodingerState& st, const RealMat& C, double s) {
    int n = st.dof();
    QuadExp e(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Cplx coef{0.0, s * kPi * C.at(i, j) / st.h};
            if (i != j) coef *= 2.0;  // C_ij xi_i xi_j + C_ji xi_j xi_i
            e.add_quad(i, j, coef);
        }
    return {st.h, st.psi * PGFun::gaussian(e)};
}

}  // namespace

SchrodingerState metaplectic_schrodinger_apply(const MetaplecticFactor& fac, const SchrodingerState& st) {
    int n = st.dof();
    if (fac.dof() != n) throw DimensionMismatch("metaplectic: dof mismatch");
    switch (fac.kind) {
        case MetaplecticFactor::Kind::DiagBlock: {
            // psi -> sqrt(det A) psi(A^T xi); the principal square root fixes
            // the +-1 ambiguity of the double-valued representation.
            std::vector<double> L(static_cast<std::size_t>(n) * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) L[static_cast<std::size_t>(i) * n + j] = fac.P.at(j, i);
            PGFun out = pg_affine_sub(st.psi, L, n, std::vector<Cplx>(static_cast<std::size_t>(n), Cplx{}));
            Cplx pref = std::sqrt(Cplx{fac.P.det(), 0.0});
            return {st.h, pref * out};
        }
        case MetaplecticFactor::Kind::LowerShear: {
            // J^{-1} (chirp) J with the +1 shear-sign convention
            SchrodingerState a = fourier_h(st, -1.0);
            SchrodingerState b = chirp_multiply(a, fac.P, +1.0);
            return fourier_h(b, +1.0);
        }
        case MetaplecticFactor::Kind::J: {
            SchrodingerState out = fourier_h(st, -1.0);
            Cplx pref = std::pow(kI, n / 2.0);
            return {st.h, pref * out.psi};
        }
        case MetaplecticFactor::Kind::Jinv: {
            SchrodingerState out = fourier_h(st, +1.0);
            Cplx pref = std::pow(kI, -n / 2.0);
            return {st.h, pref * out.psi};
        }
    }
    throw std::logic_error("metaplectic_schrodinger_apply: unknown kind");
}

FockState metaplectic_apply(const MetaplecticFactor& fac, const FockState& f) {
    return metaplectic_apply(std::vector<MetaplecticFactor>{fac}, f);
}

FockState metaplectic_apply(const std::vector<MetaplecticFactor>& factors, const FockState& f) {
    SchrodingerState st = T_inverse_apply(f);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        st = metaplectic_schrodinger_apply(*it, st);
    return T_apply(st);
}

PMechObservable observable_transform_linear(const PMechObservable& B, const SymplecticMatrix& M) {
    if (2 * B.dof() != M.M.rows) throw DimensionMismatch("observable_transform_linear: dof mismatch");
    PMechObservable r = B;
    r.poly = B.poly.linear_substitute(M.M.a, std::vector<double>(static_cast<std::size_t>(M.M.rows), 0.0));
    return r;
}

KernelState kernel_transform_linear(const KernelState& l, const SymplecticMatrix& M) {
    int m = l.l.dim();
    if (m != M.M.rows) throw DimensionMismatch("kernel_transform_linear: dof mismatch");
    // l(M^T (x,y)): substitution matrix rows indexed by l's variables
    std::vector<double> L(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) L[static_cast<std::size_t>(i) * m + j] = M.M.at(j, i);
    PGFun out = pg_affine_sub(l.l, L, m, std::vector<Cplx>(static_cast<std::size_t>(m), Cplx{}));
    return {l.h, out};
}

DecoupleResult coupled_decouple(double A, double B, double C) {
    if (!(A > 0.0) || !(B > 0.0) || !(4.0 * A * B - C * C > 0.0))
        throw std::invalid_argument("coupled_decouple: need A > 0, B > 0, 4AB - C^2 > 0");
    double alpha = std::atan2(C, B - A);
    double sh = std::sin(0.5 * alpha), ch = std::cos(0.5 * alpha);
    double W1 = A * ch * ch + B * sh * sh - C * sh * ch;
    double W2 = A * sh * sh + B * ch * ch + C * sh * ch;
    return {alpha, W1, W2};
}

PolyQP coupled_hamiltonian(double A, double B, double C) {
    PolyQP q1 = PolyQP::q(2, 0), q2 = PolyQP::q(2, 1);
    PolyQP p1 = PolyQP::p(2, 0), p2 = PolyQP::p(2, 1);
    return Cplx{0.5, 0.0} * (p1 * p1 + p2 * p2) + Cplx{0.5 * A, 0.0} * (q1 * q1) +
           Cplx{0.5 * B, 0.0} * (q2 * q2) + Cplx{0.5 * C, 0.0} * (q1 * q2);
}

SymplecticMatrix coupled_rotation_matrix(double alpha) {
    double ch = std::cos(0.5 * alpha), sh = std::sin(0.5 * alpha);
    RealMat M(4, 4);
    // old (q1, q2, p1, p2) in terms of new coordinates, block-diagonal rotation
    M.at(0, 0) = ch;
    M.at(0, 1) = sh;
    M.at(1, 0) = -sh;
    M.at(1, 1) = ch;
    M.at(2, 2) = ch;
    M.at(2, 3) = sh;
    M.at(3, 2) = -sh;
    M.at(3, 3) = ch;
    return SymplecticMatrix(M);
}

PMechObservable coupled_flow(const PMechObservable& B0, double t, double W1, double W2) {
    if (!(W1 > 0.0) || !(W2 > 0.0)) throw std::invalid_argument("coupled_flow: need W1, W2 > 0");
    if (B0.dof() != 2) throw DimensionMismatch("coupled_flow: two degrees of freedom");
    double w[2] = {std::sqrt(W1), std::sqrt(W2)};
    RealMat M(4, 4);
    for (int j = 0; j < 2; ++j) {
        double c = std::cos(w[j] * t), s = std::sin(w[j] * t);
        M.at(j, j) = c;
        M.at(j, 2 + j) = s / w[j];
        M.at(2 + j, j) = -w[j] * s;
        M.at(2 + j, 2 + j) = c;
    }
    PMechObservable r = B0;
    r.poly = B0.poly.linear_substitute(M.a, std::vector<double>(4, 0.0));
    return r;
}

bool ct_spec_valid(const CTSpec& spec, double tol) {
    if (spec.f.size() != spec.F.size() || spec.g.size() != spec.G.size() ||
        spec.f.size() != spec.g.size())
        return false;
    for (std::size_t i = 0; i < spec.f.size(); ++i)
        for (std::size_t j = 0; j < spec.g.size(); ++j) {
            PolyQP lhs = poisson_bracket(spec.f[i], spec.g[j]);
            PolyQP rhs = poisson_bracket(spec.F[i], spec.G[j]);
            if (!approx_equal(lhs, rhs, tol)) return false;
        }
    return true;
}

CTSpec ct_flip() {
    CTSpec s;
    s.n = 1;
    PolyQP q = PolyQP::q(1, 0), p = PolyQP::p(1, 0);
    s.f = {q + kI * p};
    s.g = {q - kI * p};
    s.F = {kI * q - p};   // -P + iQ in (Q,P) variables
    s.G = {Cplx{-1.0, 0.0} * p - kI * q};  // -P - iQ
    return s;
}

CTSpec ct_rotshift(double t, double C) {
    CTSpec s;
    s.n = 1;
    PolyQP q = PolyQP::q(1, 0), p = PolyQP::p(1, 0);
    double c = std::cos(t), sn = std::sin(t);
    s.f = {Cplx{c, 0.0} * q + Cplx{sn, 0.0} * p - PolyQP::constant(1, C)};
    s.g = {Cplx{-sn, 0.0} * q + Cplx{c, 0.0} * p - PolyQP::constant(1, C)};
    s.F = {q};  // Q
    s.G = {p};  // P
    return s;
}

MatrixElementFn ct_matrix_element_flip(double h) {
    // exp(pi/h (a+ib)(-i a' - b') - pi/2h (a^2+b^2+a'^2+b'^2))
    QuadExp e(4);
    Cplx w = kPi / h;
    e.add_quad(0, 2, -kI * w);           // a a'
    e.add_quad(0, 3, Cplx{-1.0, 0.0} * w);  // a b'
    e.add_quad(1, 2, w);                 // b a'
    e.add_quad(1, 3, -kI * w);           // b b'
    for (int j = 0; j < 4; ++j) e.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
    return {h, PGFun::gaussian(e)};
}

MatrixElementFn ct_matrix_element_rotshift(double h, double t, double C) {
    // Matrix elements of the operator that carries the coherent label z by
    // the transformation itself, z -> w z - C(1+i) with w = e^{-it}:
    //   m = exp((pi/h)(w z + zC) conj(z')
    //           - (pi/2h)(|w z + zC|^2 + |z'|^2)
    //           + (pi i C/h)(Im(wz) - Re(wz)))
    // (global scale fixed so the C = 0 case is exactly the flip family at
    // t = pi/2). This is the solution of the defining integral equations;
    // the variant below carries the C-dependence in the other label slot and
    // fails them for C != 0.
    QuadExp e(4);
    Cplx w = std::exp(Cplx{0.0, -t});
    Cplx zC{-C, -C};
    Cplx ph{kPi / h, 0.0};
    e.add_quad(0, 2, ph * w);
    e.add_quad(0, 3, -kI * ph * w);
    e.add_quad(1, 2, kI * ph * w);
    e.add_quad(1, 3, ph * w);
    e.add_lin(2, ph * zC);
    e.add_lin(3, -kI * ph * zC);
    for (int j = 0; j < 4; ++j) e.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
    Cplx wzc = w * std::conj(zC);
    e.add_lin(0, Cplx{-kPi / h * wzc.real(), 0.0});
    e.add_lin(1, Cplx{kPi / h * wzc.imag(), 0.0});
    e.c += Cplx{-0.5 * kPi / h * std::norm(zC), 0.0};
    e.add_lin(0, Cplx{0.0, kPi * C / h * (w.imag() - w.real())});
    e.add_lin(1, Cplx{0.0, kPi * C / h * (w.real() + w.imag())});
    return {h, PGFun::gaussian(e)};
}

MatrixElementFn ct_matrix_element_rotshift_printed(double h, double t, double C) {
    // exp(pi/h [(a+ib) e^{-it} (a'-ib') + C e^{-it} (a+ib)] - pi/2h sum).
    // Kept so the C != 0 defect can be measured; it coincides with the
    // solution above when C = 0.
    QuadExp e(4);
    Cplx w = std::exp(Cplx{0.0, -t}) * (kPi / h);
    e.add_quad(0, 2, w);
    e.add_quad(0, 3, -kI * w);
    e.add_quad(1, 2, kI * w);
    e.add_quad(1, 3, w);
    e.add_lin(0, C * w);
    e.add_lin(1, kI * C * w);
    for (int j = 0; j < 4; ++j) e.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
    return {h, PGFun::gaussian(e)};
}

namespace {

// polynomial in (x, y) with complex coefficients; used for the label algebra
using XYPoly = PolyMap;

XYPoly xy_const(int m, Cplx c) {
    XYPoly p;
    if (c != 0.0) p[MultiIndex(m)] = c;
    return p;
}

XYPoly xy_shift(const XYPoly& p, int var, Cplx scale) {  // scale * x_var * p
    XYPoly r;
    for (const auto& [mi, c] : p) {
        MultiIndex m2 = mi;
        m2.e[static_cast<std::size_t>(var)] += 1;
        r[m2] += scale * c;
    }
    return r;
}

XYPoly xy_diff(const XYPoly& p, int var) {
    XYPoly r;
    for (const auto& [mi, c] : p) {
        int e = mi.e[static_cast<std::size_t>(var)];
        if (e == 0) continue;
        MultiIndex m2 = mi;
        m2.e[static_cast<std::size_t>(var)] = e - 1;
        r[m2] += c * static_cast<double>(e);
    }
    return r;
}

// P(q_j)* and P(p_j)* acting on poly x v_(h,a,b)
XYPoly apply_pq(const XYPoly& p, int n, int j, double h, const CoherentLabel& l) {
    Cplx lab = 0.5 * Cplx{l.a[static_cast<std::size_t>(j)], l.b[static_cast<std::size_t>(j)]};
    XYPoly r;
    poly_add_scaled(r, p, lab);
    poly_add_scaled(r, xy_shift(p, j, 0.5 * h * kI), 1.0);
    poly_add_scaled(r, xy_shift(p, n + j, Cplx{0.5 * h, 0.0}), 1.0);
    poly_add_scaled(r, xy_diff(p, j), Cplx{1.0, 0.0} / (2.0 * kPi * kI));
    return r;
}

XYPoly apply_pp(const XYPoly& p, int n, int j, double h, const CoherentLabel& l) {
    Cplx lab = 0.5 * Cplx{l.b[static_cast<std::size_t>(j)], -l.a[static_cast<std::size_t>(j)]};
    XYPoly r;
    poly_add_scaled(r, p, lab);
    poly_add_scaled(r, xy_shift(p, n + j, 0.5 * h * kI), 1.0);
    poly_add_scaled(r, xy_shift(p, j, Cplx{-0.5 * h, 0.0}), 1.0);
    poly_add_scaled(r, xy_diff(p, n + j), Cplx{1.0, 0.0} / (2.0 * kPi * kI));
    return r;
}

}  // namespace

Cplx ct_matrix_element(const PMechObservable& term, const CoherentLabel& lbl1,
                       const CoherentLabel& lbl2) {
    int n = term.dof();
    if (lbl1.dof() != n || lbl2.dof() != n) throw DimensionMismatch("ct_matrix_element: dof mismatch");
    require_same_h(lbl1.h, lbl2.h, "ct_matrix_element");
    double h = lbl1.h;
    if (term.poly.degree() > 2)
        throw std::invalid_argument("ct_matrix_element: closed forms implemented for degree <= 2");
    int m = 2 * n;

    // Gaussian moments of the pairing measure: per-variable complex means and
    // common variance 1/(2 pi h).
    std::vector<Cplx> mean(static_cast<std::size_t>(m));
    for (int j = 0; j < n; ++j) {
        Cplx z1{lbl1.a[static_cast<std::size_t>(j)], lbl1.b[static_cast<std::size_t>(j)]};
        Cplx z2{lbl2.a[static_cast<std::size_t>(j)], lbl2.b[static_cast<std::size_t>(j)]};
        mean[static_cast<std::size_t>(j)] = kI * (z1 - std::conj(z2)) / (2.0 * h);
        mean[static_cast<std::size_t>(n + j)] = (z1 + std::conj(z2)) / (2.0 * h);
    }
    double var = 1.0 / (2.0 * kPi * h);
    auto moment = [&](int v, int k) {
        // E[x^k] for complex mean mu and variance var
        Cplx mu = mean[static_cast<std::size_t>(v)];
        Cplx m0{1.0, 0.0}, m1 = mu;
        if (k == 0) return m0;
        for (int i = 2; i <= k; ++i) {
            Cplx m2 = mu * m1 + static_cast<double>(i - 1) * var * m0;
            m0 = m1;
            m1 = m2;
        }
        return m1;
    };

    Cplx total{};
    for (const auto& [key, c] : term.poly.terms()) {
        // Weyl-symmetrised product of the first-order factor operators
        std::vector<std::pair<bool, int>> factors;  // (is_q, coordinate)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < key.first.e[static_cast<std::size_t>(j)]; ++i) factors.push_back({true, j});
            for (int i = 0; i < key.second.e[static_cast<std::size_t>(j)]; ++i) factors.push_back({false, j});
        }
        std::vector<std::vector<std::pair<bool, int>>> orders;
        if (factors.size() <= 1) {
            orders.push_back(factors);
        } else {
            orders.push_back(factors);
            orders.push_back({factors[1], factors[0]});
        }
        XYPoly avg;
        for (const auto& ord : orders) {
            XYPoly p = xy_const(m, Cplx{1.0, 0.0});
            for (auto it = ord.rbegin(); it != ord.rend(); ++it)
                p = it->first ? apply_pq(p, n, it->second, h, lbl1) : apply_pp(p, n, it->second, h, lbl1);
            poly_add_scaled(avg, p, Cplx{1.0, 0.0} / static_cast<double>(orders.size()));
        }
        Cplx ex{};
        for (const auto& [mi, pc] : avg) {
            Cplx mom = pc;
            for (int v = 0; v < m; ++v) mom *= moment(v, mi.e[static_cast<std::size_t>(v)]);
            ex += mom;
        }
        total += c * ex;
    }
    return total * repker_hh(lbl1, lbl2);
}

namespace {

struct LinearForm {
    std::vector<Cplx> alpha, beta;  // coefficients of q_j, p_j
    Cplx gamma{};
};

LinearForm extract_linear(const PolyQP& f) {
    if (f.degree() > 1)
        throw std::invalid_argument("ct_residual: relations must be polynomials of degree <= 1");
    int n = f.dof();
    LinearForm lf;
    lf.alpha.assign(static_cast<std::size_t>(n), Cplx{});
    lf.beta.assign(static_cast<std::size_t>(n), Cplx{});
    for (const auto& [key, c] : f.terms()) {
        if (key.first.degree() + key.second.degree() == 0) {
            lf.gamma += c;
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (key.first.e[static_cast<std::size_t>(j)] == 1) lf.alpha[static_cast<std::size_t>(j)] += c;
            if (key.second.e[static_cast<std::size_t>(j)] == 1) lf.beta[static_cast<std::size_t>(j)] += c;
        }
    }
    return lf;
}

// <P(f)*v_(h,a,b), v_(h,.,.)> as a PGFun over the primed label (2n vars),
// left slot numeric.
PGFun matrix_element_left(const LinearForm& lf, const std::vector<double>& a,
                          const std::vector<double>& b, double h) {
    int n = static_cast<int>(a.size());
    int m = 2 * n;
    QuadExp K(m);
    Cplx c0 = lf.gamma;
    PGFun lin(m);
    for (int j = 0; j < n; ++j) {
        Cplx z{a[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(j)]};
        K.add_lin(j, kPi * z / h);
        K.add_lin(n + j, -kI * kPi * z / h);
        K.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
        K.add_quad(n + j, n + j, Cplx{-0.5 * kPi / h, 0.0});
        K.c += Cplx{-0.5 * kPi * std::norm(z) / h, 0.0};
        c0 += 0.5 * lf.alpha[static_cast<std::size_t>(j)] * z +
              0.5 * lf.beta[static_cast<std::size_t>(j)] * (-kI) * z;
        Cplx ca = 0.5 * lf.alpha[static_cast<std::size_t>(j)] + 0.5 * kI * lf.beta[static_cast<std::size_t>(j)];
        Cplx cb = -0.5 * kI * lf.alpha[static_cast<std::size_t>(j)] + 0.5 * lf.beta[static_cast<std::size_t>(j)];
        MultiIndex ma(m), mb(m);
        ma.e[static_cast<std::size_t>(j)] = 1;
        mb.e[static_cast<std::size_t>(n + j)] = 1;
        lin = lin + PGFun::monomial(m, ma, ca) + PGFun::monomial(m, mb, cb);
    }
    return (PGFun::constant(m, c0) + lin) * PGFun::gaussian(K);
}

// <P(F)*v_(h,.,.), v_(h,a',b')> as a PGFun over the unprimed label slot,
// right slot numeric.
PGFun matrix_element_right(const LinearForm& lf, const std::vector<double>& ap,
                           const std::vector<double>& bp, double h) {
    int n = static_cast<int>(ap.size());
    int m = 2 * n;
    QuadExp K(m);
    Cplx c0 = lf.gamma;
    PGFun lin(m);
    for (int j = 0; j < n; ++j) {
        Cplx zc{ap[static_cast<std::size_t>(j)], -bp[static_cast<std::size_t>(j)]};  // a' - i b'
        K.add_lin(j, kPi * zc / h);
        K.add_lin(n + j, kI * kPi * zc / h);
        K.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
        K.add_quad(n + j, n + j, Cplx{-0.5 * kPi / h, 0.0});
        K.c += Cplx{-0.5 * kPi * std::norm(zc) / h, 0.0};
        c0 += 0.5 * lf.alpha[static_cast<std::size_t>(j)] * zc +
              0.5 * lf.beta[static_cast<std::size_t>(j)] * kI * zc;  // b' + i a' = i (a' - i b')
        Cplx ca = 0.5 * lf.alpha[static_cast<std::size_t>(j)] - 0.5 * kI * lf.beta[static_cast<std::size_t>(j)];
        Cplx cb = 0.5 * kI * lf.alpha[static_cast<std::size_t>(j)] + 0.5 * lf.beta[static_cast<std::size_t>(j)];
        MultiIndex ma(m), mb(m);
        ma.e[static_cast<std::size_t>(j)] = 1;
        mb.e[static_cast<std::size_t>(n + j)] = 1;
        lin = lin + PGFun::monomial(m, ma, ca) + PGFun::monomial(m, mb, cb);
    }
    return (PGFun::constant(m, c0) + lin) * PGFun::gaussian(K);
}

// m(a'', b'', a', b') as a PGFun over (a'', b''), remaining labels numeric.
PGFun slice_m_left(const MatrixElementFn& mfn, const std::vector<double>& ap,
                   const std::vector<double>& bp) {
    int n = static_cast<int>(ap.size());
    int m_in = 4 * n, m_out = 2 * n;
    std::vector<double> L(static_cast<std::size_t>(m_in) * m_out, 0.0);
    std::vector<Cplx> t(static_cast<std::size_t>(m_in), Cplx{});
    for (int j = 0; j < n; ++j) {
        L[static_cast<std::size_t>(j) * m_out + j] = 1.0;
        L[static_cast<std::size_t>(n + j) * m_out + n + j] = 1.0;
        t[static_cast<std::size_t>(2 * n + j)] = ap[static_cast<std::size_t>(j)];
        t[static_cast<std::size_t>(3 * n + j)] = bp[static_cast<std::size_t>(j)];
    }
    return pg_affine_sub(mfn.m, L, m_out, t);
}

// m(a, b, a'', b'') as a PGFun over (a'', b''), remaining labels numeric.
PGFun slice_m_right(const MatrixElementFn& mfn, const std::vector<double>& a,
                    const std::vector<double>& b) {
    int n = static_cast<int>(a.size());
    int m_in = 4 * n, m_out = 2 * n;
    std::vector<double> L(static_cast<std::size_t>(m_in) * m_out, 0.0);
    std::vector<Cplx> t(static_cast<std::size_t>(m_in), Cplx{});
    for (int j = 0; j < n; ++j) {
        t[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)];
        t[static_cast<std::size_t>(n + j)] = b[static_cast<std::size_t>(j)];
        L[static_cast<std::size_t>(2 * n + j) * m_out + j] = 1.0;
        L[static_cast<std::size_t>(3 * n + j) * m_out + n + j] = 1.0;
    }
    return pg_affine_sub(mfn.m, L, m_out, t);
}

}  // namespace

double ct_residual(const CTSpec& spec, const MatrixElementFn& mfn,
                   const std::vector<std::vector<double>>& label_grid) {
    int n = spec.n;
    double h = mfn.h;
    std::vector<std::pair<LinearForm, LinearForm>> relations;
    for (std::size_t i = 0; i < spec.f.size(); ++i)
        relations.push_back({extract_linear(spec.f[i]), extract_linear(spec.F[i])});
    for (std::size_t i = 0; i < spec.g.size(); ++i)
        relations.push_back({extract_linear(spec.g[i]), extract_linear(spec.G[i])});

    double worst = 0.0;
    for (const auto& pt : label_grid) {
        if (static_cast<int>(pt.size()) != 4 * n)
            throw DimensionMismatch("ct_residual: grid point must have 4n entries");
        std::vector<double> a(pt.begin(), pt.begin() + n);
        std::vector<double> b(pt.begin() + n, pt.begin() + 2 * n);
        std::vector<double> ap(pt.begin() + 2 * n, pt.begin() + 3 * n);
        std::vector<double> bp(pt.begin() + 3 * n, pt.end());
        PGFun mL = slice_m_left(mfn, ap, bp);
        PGFun mR = slice_m_right(mfn, a, b);
        for (const auto& rel : relations) {
            Cplx lhs = pg_integrate_all(mL * matrix_element_left(rel.first, a, b, h));
            Cplx rhs = pg_integrate_all(mR * matrix_element_right(rel.second, ap, bp, h));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

HState combo_to_hstate(const CoherentCombo& combo) {
    if (combo.empty()) throw std::invalid_argument("combo_to_hstate: empty combination");
    HState r = coherent_v(combo.front().second);
    r.f = combo.front().first * r.f;
    for (std::size_t i = 1; i < combo.size(); ++i) {
        require_same_h(r.h, combo[i].second.h, "combo_to_hstate");
        r.f = r.f + combo[i].first * coherent_v(combo[i].second).f;
    }
    return r;
}

HState ct_operator_apply(const MatrixElementFn& mfn, const CoherentCombo& v) {
    if (v.empty()) throw std::invalid_argument("ct_operator_apply: empty combination");
    int n = v.front().second.dof();
    double h = mfn.h;
    int m = 6 * n;  // (a, b, a', b', x, y)

    // <v, v_(h,a,b)> as a PGFun over (a, b)
    PGFun overlap(2 * n);
    for (const auto& [c, lbl] : v) {
        require_same_h(lbl.h, h, "ct_operator_apply");
        QuadExp G(2 * n);
        Cplx cc{};
        for (int j = 0; j < n; ++j) {
            Cplx z{lbl.a[static_cast<std::size_t>(j)], lbl.b[static_cast<std::size_t>(j)]};
            G.add_lin(j, kPi * z / h);
            G.add_lin(n + j, -kI * kPi * z / h);
            G.add_quad(j, j, Cplx{-0.5 * kPi / h, 0.0});
            G.add_quad(n + j, n + j, Cplx{-0.5 * kPi / h, 0.0});
            cc += Cplx{-0.5 * kPi * std::norm(z) / h, 0.0};
        }
        G.c = cc;
        overlap = overlap + PGFun::gaussian(G, c);
    }

    // v_(h,a',b')(x,y) as a PGFun over (a', b', x, y)
    QuadExp cs(4 * n);
    for (int j = 0; j < n; ++j) {
        int aj = j, bj = n + j, xj = 2 * n + j, yj = 3 * n + j;
        cs.add_quad(aj, xj, kPi * kI);
        cs.add_quad(bj, xj, Cplx{-kPi, 0.0});
        cs.add_quad(bj, yj, kPi * kI);
        cs.add_quad(aj, yj, Cplx{kPi, 0.0});
        cs.add_quad(xj, xj, Cplx{-0.5 * kPi * h, 0.0});
        cs.add_quad(yj, yj, Cplx{-0.5 * kPi * h, 0.0});
        cs.add_quad(aj, aj, Cplx{-0.5 * kPi / h, 0.0});
        cs.add_quad(bj, bj, Cplx{-0.5 * kPi / h, 0.0});
    }
    double hw = 1.0;
    for (int j = 0; j < n; ++j) hw *= 0.5 * h;
    PGFun cs_fun = PGFun::gaussian(cs, Cplx{hw, 0.0});

    PGFun integrand = embed(mfn.m, m, 0) * embed(overlap, m, 0) * embed(cs_fun, m, 2 * n);
    PGFun out = pg_integrate_out(integrand, range_vars(0, 4 * n));
    // coherent-state resolution of the identity carries the measure
    // da db / h^n on each label pair
    double meas = 1.0;
    for (int j = 0; j < 2 * n; ++j) meas /= h;
    return {h, Cplx{meas, 0.0} * out};
}

}  // namespace pmech
