#include "pmech/pgfun.hpp"

#include <algorithm>
#include <cmath>

namespace pmech {

namespace {

bool close(const Cplx& a, const Cplx& b, double tol) {
    return std::abs(a.real() - b.real()) <= tol && std::abs(a.imag() - b.imag()) <= tol;
}

int cplx_cmp(const Cplx& a, const Cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real() ? -1 : 1;
    if (a.imag() != b.imag()) return a.imag() < b.imag() ? -1 : 1;
    return 0;
}

int exp_cmp(const QuadExp& a, const QuadExp& b) {
    for (std::size_t k = 0; k < a.A.size(); ++k)
        if (int c = cplx_cmp(a.A[k], b.A[k])) return c;
    for (std::size_t k = 0; k < a.b.size(); ++k)
        if (int c = cplx_cmp(a.b[k], b.b[k])) return c;
    return cplx_cmp(a.c, b.c);
}

bool exp_close(const QuadExp& a, const QuadExp& b) {
    for (std::size_t k = 0; k < a.A.size(); ++k)
        if (!close(a.A[k], b.A[k], kExpMatchTol)) return false;
    for (std::size_t k = 0; k < a.b.size(); ++k)
        if (!close(a.b[k], b.b[k], kExpMatchTol)) return false;
    return close(a.c, b.c, kExpMatchTol);
}

void check_degree(const MultiIndex& mi) {
    if (mi.degree() > kMaxMonomialDegree)
        throw DegreeCapExceeded("monomial degree exceeds cap " + std::to_string(kMaxMonomialDegree));
}

}  // namespace

void QuadExp::symmetrize() {
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Cplx m = (a(i, j) + a(j, i)) / 2.0;
            a(i, j) = m;
            a(j, i) = m;
        }
}

bool QuadExp::integrable() const {
    // LDL^T with diagonal pivoting on Re(A); positive definite iff all pivots > 0.
    int m = dim;
    std::vector<double> R(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) R[static_cast<std::size_t>(i) * m + j] = a(i, j).real();
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    auto at = [&](int i, int j) -> double& { return R[static_cast<std::size_t>(idx[i]) * m + idx[j]]; };
    for (int k = 0; k < m; ++k) {
        int p = k;
        for (int i = k + 1; i < m; ++i)
            if (at(i, i) > at(p, p)) p = i;
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(p)]);
        double piv = at(k, k);
        if (!(piv > 0.0)) return false;
        for (int i = k + 1; i < m; ++i) {
            double f = at(i, k) / piv;
            for (int j = k + 1; j < m; ++j) at(i, j) -= f * at(k, j);
        }
    }
    return true;
}

PGFun PGFun::constant(int m, Cplx value) {
    PGFun f(m);
    if (value != 0.0) {
        PGTerm t;
        t.coeff = value;
        t.mono = MultiIndex(m);
        t.exp = QuadExp(m);
        f.terms_.push_back(std::move(t));
    }
    return f;
}

PGFun PGFun::monomial(int m, const MultiIndex& mi, Cplx coeff) {
    PGFun f(m);
    if (coeff != 0.0) {
        PGTerm t;
        t.coeff = coeff;
        t.mono = mi;
        t.exp = QuadExp(m);
        f.terms_.push_back(std::move(t));
    }
    return f;
}

PGFun PGFun::term(Cplx coeff, const MultiIndex& mono, const QuadExp& exp) {
    PGFun f(exp.dim);
    if (coeff != 0.0) {
        PGTerm t{coeff, mono, exp};
        t.exp.symmetrize();
        f.terms_.push_back(std::move(t));
    }
    return f;
}

PGFun PGFun::gaussian(const QuadExp& exp, Cplx coeff) {
    return term(coeff, MultiIndex(exp.dim), exp);
}

void PGFun::add_term(const PGTerm& t) {
    if (t.mono.dim() != dim_ || t.exp.dim != dim_)
        throw DimensionMismatch("PGFun::add_term dimension mismatch");
    terms_.push_back(t);
}

void PGFun::canonicalize() {
    for (auto& t : terms_) t.exp.symmetrize();
    std::sort(terms_.begin(), terms_.end(), [](const PGTerm& a, const PGTerm& b) {
        if (a.mono.e != b.mono.e) return a.mono.e < b.mono.e;
        return exp_cmp(a.exp, b.exp) < 0;
    });
    std::vector<PGTerm> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().mono == t.mono && exp_close(merged.back().exp, t.exp)) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    double maxc = 0.0;
    for (const auto& t : merged) maxc = std::max(maxc, std::abs(t.coeff));
    terms_.clear();
    for (auto& t : merged)
        if (std::abs(t.coeff) > kCoeffPruneTol * maxc && t.coeff != 0.0) terms_.push_back(std::move(t));
}

PGFun operator+(const PGFun& f, const PGFun& g) {
    if (f.dim_ != g.dim_) throw DimensionMismatch("pg_add dimension mismatch");
    PGFun r(f.dim_);
    r.terms_ = f.terms_;
    r.terms_.insert(r.terms_.end(), g.terms_.begin(), g.terms_.end());
    r.canonicalize();
    return r;
}

PGFun operator-(const PGFun& f, const PGFun& g) { return f + (Cplx{-1.0, 0.0} * g); }

PGFun operator*(Cplx s, const PGFun& f) {
    PGFun r(f.dim_);
    if (s == 0.0) return r;
    r.terms_ = f.terms_;
    for (auto& t : r.terms_) t.coeff *= s;
    return r;
}

PGFun operator*(const PGFun& f, const PGFun& g) {
    if (f.dim_ != g.dim_) throw DimensionMismatch("pg_mul dimension mismatch");
    PGFun r(f.dim_);
    for (const auto& a : f.terms_)
        for (const auto& b : g.terms_) {
            PGTerm t;
            t.coeff = a.coeff * b.coeff;
            t.mono = a.mono;
            for (int k = 0; k < r.dim_; ++k) t.mono.e[static_cast<std::size_t>(k)] += b.mono.e[static_cast<std::size_t>(k)];
            check_degree(t.mono);
            t.exp = a.exp;
            for (std::size_t k = 0; k < t.exp.A.size(); ++k) t.exp.A[k] += b.exp.A[k];
            for (std::size_t k = 0; k < t.exp.b.size(); ++k) t.exp.b[k] += b.exp.b[k];
            t.exp.c += b.exp.c;
            r.terms_.push_back(std::move(t));
        }
    r.canonicalize();
    return r;
}

PGFun pg_conj(const PGFun& f) {
    PGFun r(f.dim());
    for (const auto& t : f.terms()) {
        PGTerm s = t;
        s.coeff = std::conj(s.coeff);
        for (auto& z : s.exp.A) z = std::conj(z);
        for (auto& z : s.exp.b) z = std::conj(z);
        s.exp.c = std::conj(s.exp.c);
        r.add_term(s);
    }
    r.canonicalize();
    return r;
}

PGFun pg_diff(const PGFun& f, int var) {
    if (var < 0 || var >= f.dim()) throw DimensionMismatch("pg_diff: variable index out of range");
    PGFun r(f.dim());
    for (const auto& t : f.terms()) {
        // monomial part
        int e = t.mono.e[static_cast<std::size_t>(var)];
        if (e > 0) {
            PGTerm s = t;
            s.coeff *= static_cast<double>(e);
            s.mono.e[static_cast<std::size_t>(var)] = e - 1;
            r.add_term(s);
        }
        // exponent part: d/dx_k exponent = -2 (A x)_k + 2 b_k
        for (int j = 0; j < f.dim(); ++j) {
            Cplx c = -2.0 * t.exp.a(var, j);
            if (c != 0.0) {
                PGTerm s = t;
                s.coeff *= c;
                s.mono.e[static_cast<std::size_t>(j)] += 1;
                check_degree(s.mono);
                r.add_term(s);
            }
        }
        Cplx c = 2.0 * t.exp.b[static_cast<std::size_t>(var)];
        if (c != 0.0) {
            PGTerm s = t;
            s.coeff *= c;
            r.add_term(s);
        }
    }
    r.canonicalize();
    return r;
}

PGFun pg_affine_sub(const PGFun& f, const std::vector<double>& L, int m_out,
                    const std::vector<Cplx>& t) {
    int m_in = f.dim();
    if (static_cast<int>(L.size()) != m_in * m_out)
        throw DimensionMismatch("pg_affine_sub: L must be dim(f) x m_out");
    if (static_cast<int>(t.size()) != m_in)
        throw DimensionMismatch("pg_affine_sub: t must have length dim(f)");
    auto l = [&](int i, int j) { return L[static_cast<std::size_t>(i) * m_out + j]; };

    PGFun r(m_out);
    for (const auto& term : f.terms()) {
        // exponent: A' = L^T A L, b' = L^T (b - A t), c' = c + 2 b.t - t^T A t
        QuadExp ne(m_out);
        for (int i = 0; i < m_out; ++i)
            for (int j = i; j < m_out; ++j) {
                Cplx s{};
                for (int p = 0; p < m_in; ++p)
                    for (int q = 0; q < m_in; ++q) s += l(p, i) * term.exp.a(p, q) * l(q, j);
                ne.a(i, j) = s;
                ne.a(j, i) = s;
            }
        std::vector<Cplx> At(static_cast<std::size_t>(m_in), Cplx{});
        for (int p = 0; p < m_in; ++p)
            for (int q = 0; q < m_in; ++q) At[static_cast<std::size_t>(p)] += term.exp.a(p, q) * t[static_cast<std::size_t>(q)];
        for (int i = 0; i < m_out; ++i) {
            Cplx s{};
            for (int p = 0; p < m_in; ++p) s += l(p, i) * (term.exp.b[static_cast<std::size_t>(p)] - At[static_cast<std::size_t>(p)]);
            ne.b[static_cast<std::size_t>(i)] = s;
        }
        Cplx nc = term.exp.c;
        for (int p = 0; p < m_in; ++p)
            nc += 2.0 * term.exp.b[static_cast<std::size_t>(p)] * t[static_cast<std::size_t>(p)] - t[static_cast<std::size_t>(p)] * At[static_cast<std::size_t>(p)];
        ne.c = nc;

        // monomial: prod_j (sum_k L[j][k] x_k + t_j)^mu_j expanded
        PolyMap poly;
        poly[MultiIndex(m_out)] = term.coeff;
        for (int j = 0; j < m_in; ++j) {
            int mu = term.mono.e[static_cast<std::size_t>(j)];
            if (mu == 0) continue;
            PolyMap lin;
            MultiIndex zero(m_out);
            if (t[static_cast<std::size_t>(j)] != 0.0) lin[zero] = t[static_cast<std::size_t>(j)];
            for (int k = 0; k < m_out; ++k)
                if (l(j, k) != 0.0) {
                    MultiIndex mi(m_out);
                    mi.e[static_cast<std::size_t>(k)] = 1;
                    lin[mi] += l(j, k);
                }
            if (lin.empty()) {
                poly.clear();
                break;
            }
            poly = poly_mul(poly, poly_pow(lin, mu));
        }
        for (const auto& [mi, c] : poly) {
            check_degree(mi);
            PGTerm nt{c, mi, ne};
            r.add_term(nt);
        }
    }
    r.canonicalize();
    return r;
}

namespace {

// polynomial x Gaussian over a shrinking variable set; coefficients live in poly
struct PolyGauss {
    PolyMap poly;
    QuadExp exp;
};

// One-variable reduction: integrates variable k out of pg (dim m), returning a
// PolyGauss over the remaining m-1 variables (original order, k removed).
// Applies the two closed-form identities: the Gaussian integral and the
// moment formula, with the moment polynomial in the shifted center beta/a.
PolyGauss reduce_var(const PolyGauss& pg, int k, Cplx* scalar, int term_index) {
    int m = pg.exp.dim;
    Cplx a = pg.exp.a(k, k);
    if (!(a.real() > 0.0))
        throw NotIntegrable("pivot variable has non-positive real Gaussian coefficient", term_index);

    int mr = m - 1;
    auto old_of = [&](int j) { return j < k ? j : j + 1; };

    // beta = b_k + sum_j l_j x_j with l_j = -A[k][old j]
    std::vector<Cplx> lvec(static_cast<std::size_t>(mr));
    for (int j = 0; j < mr; ++j) lvec[static_cast<std::size_t>(j)] = -pg.exp.a(k, old_of(j));
    Cplx bk = pg.exp.b[static_cast<std::size_t>(k)];

    PolyMap beta;
    {
        MultiIndex zero(mr);
        if (bk != 0.0) beta[zero] = bk;
        for (int j = 0; j < mr; ++j)
            if (lvec[static_cast<std::size_t>(j)] != 0.0) {
                MultiIndex mi(mr);
                mi.e[static_cast<std::size_t>(j)] = 1;
                beta[mi] = lvec[static_cast<std::size_t>(j)];
            }
    }

    int max_nu = 0;
    for (const auto& [mi, c] : pg.poly) max_nu = std::max(max_nu, mi.e[static_cast<std::size_t>(k)]);

    // Q_0 = 1, Q_1 = beta/a, Q_nu = ((nu-1)/(2a)) Q_{nu-2} + (beta/a) Q_{nu-1};
    // Integral x^nu exp(-a x^2 + 2 beta x) dx = sqrt(pi/a) e^{beta^2/a} Q_nu(beta).
    std::vector<PolyMap> Q(static_cast<std::size_t>(max_nu) + 1);
    Q[0][MultiIndex(mr)] = Cplx{1.0, 0.0};
    if (max_nu >= 1) {
        for (const auto& [mi, c] : beta) Q[1][mi] = c / a;
    }
    for (int nu = 2; nu <= max_nu; ++nu) {
        PolyMap q;
        poly_add_scaled(q, Q[static_cast<std::size_t>(nu) - 2], Cplx{static_cast<double>(nu - 1), 0.0} / (2.0 * a));
        PolyMap bq = poly_mul(beta, Q[static_cast<std::size_t>(nu) - 1]);
        for (auto& [mi, c] : bq) q[mi] += c / a;
        Q[static_cast<std::size_t>(nu)] = std::move(q);
    }

    PolyGauss out;
    out.exp = QuadExp(mr);
    for (int i = 0; i < mr; ++i)
        for (int j = 0; j < mr; ++j)
            out.exp.a(i, j) = pg.exp.a(old_of(i), old_of(j)) - lvec[static_cast<std::size_t>(i)] * lvec[static_cast<std::size_t>(j)] / a;
    for (int i = 0; i < mr; ++i)
        out.exp.b[static_cast<std::size_t>(i)] = pg.exp.b[static_cast<std::size_t>(old_of(i))] + bk * lvec[static_cast<std::size_t>(i)] / a;
    out.exp.c = pg.exp.c + bk * bk / a;

    for (const auto& [mi, c] : pg.poly) {
        MultiIndex rest(mr);
        for (int j = 0; j < mr; ++j) rest.e[static_cast<std::size_t>(j)] = mi.e[static_cast<std::size_t>(old_of(j))];
        PolyMap contrib = Q[static_cast<std::size_t>(mi.e[static_cast<std::size_t>(k)])];
        PolyMap restp;
        restp[rest] = c;
        contrib = poly_mul(contrib, restp);
        poly_add_scaled(out.poly, contrib, Cplx{1.0, 0.0});
    }

    *scalar *= std::sqrt(kPi / a);  // principal branch
    return out;
}

int pick_pivot(const QuadExp& e, const std::vector<char>& allowed) {
    int best = -1;
    double best_re = -1e300;
    for (int k = 0; k < e.dim; ++k)
        if (allowed[static_cast<std::size_t>(k)] && e.a(k, k).real() > best_re) {
            best_re = e.a(k, k).real();
            best = k;
        }
    return best;
}

}  // namespace

Cplx pg_integrate_all(const PGFun& f) {
    Cplx total{};
    int index = 0;
    for (const auto& t : f.terms()) {
        PolyGauss pg;
        pg.exp = t.exp;
        pg.poly[t.mono] = t.coeff;
        Cplx scalar{1.0, 0.0};
        while (pg.exp.dim > 0) {
            std::vector<char> allowed(static_cast<std::size_t>(pg.exp.dim), 1);
            int k = pick_pivot(pg.exp, allowed);
            pg = reduce_var(pg, k, &scalar, index);
        }
        Cplx poly_value{};
        for (const auto& [mi, c] : pg.poly) poly_value += c;  // no variables left
        total += scalar * poly_value * std::exp(pg.exp.c);
        ++index;
    }
    return total;
}

PGFun pg_integrate_out(const PGFun& f, const std::vector<int>& vars) {
    int m = f.dim();
    std::vector<char> kill(static_cast<std::size_t>(m), 0);
    for (int v : vars) {
        if (v < 0 || v >= m) throw DimensionMismatch("pg_integrate_out: variable index out of range");
        kill[static_cast<std::size_t>(v)] = 1;
    }
    int mr = 0;
    for (int j = 0; j < m; ++j)
        if (!kill[static_cast<std::size_t>(j)]) ++mr;

    PGFun r(mr);
    int index = 0;
    for (const auto& t : f.terms()) {
        PolyGauss pg;
        pg.exp = t.exp;
        pg.poly[t.mono] = t.coeff;
        Cplx scalar{1.0, 0.0};
        std::vector<char> pending = kill;
        while (true) {
            std::vector<char> allowed;
            allowed.reserve(pending.size());
            bool any = false;
            for (char c : pending) {
                allowed.push_back(c);
                any = any || c;
            }
            if (!any) break;
            int k = pick_pivot(pg.exp, allowed);
            if (k < 0) break;
            pg = reduce_var(pg, k, &scalar, index);
            pending.erase(pending.begin() + k);
        }
        for (const auto& [mi, c] : pg.poly) {
            PGTerm nt{scalar * c, mi, pg.exp};
            r.add_term(nt);
        }
        ++index;
    }
    r.canonicalize();
    return r;
}

Cplx pg_inner(const PGFun& f, const PGFun& g, Cplx weight) {
    return weight * pg_integrate_all(f * pg_conj(g));
}

Cplx pg_eval(const PGFun& f, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != f.dim()) throw DimensionMismatch("pg_eval: point has wrong dimension");
    Cplx total{};
    for (const auto& t : f.terms()) {
        Cplx mono{1.0, 0.0};
        for (int j = 0; j < f.dim(); ++j)
            for (int k = 0; k < t.mono.e[static_cast<std::size_t>(j)]; ++k) mono *= x[static_cast<std::size_t>(j)];
        Cplx e = t.exp.c;
        for (int i = 0; i < f.dim(); ++i) {
            e += 2.0 * t.exp.b[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            for (int j = 0; j < f.dim(); ++j) e -= x[static_cast<std::size_t>(i)] * t.exp.a(i, j) * x[static_cast<std::size_t>(j)];
        }
        total += t.coeff * mono * std::exp(e);
    }
    return total;
}

double pg_norm(const PGFun& f, Cplx weight) {
    Cplx n2 = pg_inner(f, f, weight);
    return std::sqrt(std::max(0.0, n2.real()));
}

double pg_max_abs_diff(const PGFun& f, const PGFun& g, const std::vector<std::vector<double>>& pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, std::abs(pg_eval(f, p) - pg_eval(g, p)));
    return m;
}

PolyMap poly_mul(const PolyMap& a, const PolyMap& b) {
    PolyMap r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            MultiIndex m = ma;
            for (std::size_t k = 0; k < m.e.size(); ++k) m.e[k] += mb.e[k];
            if (m.degree() > kMaxMonomialDegree)
                throw DegreeCapExceeded("polynomial product exceeds monomial degree cap");
            r[m] += ca * cb;
        }
    return r;
}

PolyMap poly_pow(const PolyMap& a, int k) {
    if (a.empty()) return {};
    PolyMap r;
    r[MultiIndex(a.begin()->first.dim())] = Cplx{1.0, 0.0};
    for (int i = 0; i < k; ++i) r = poly_mul(r, a);
    return r;
}

void poly_add_scaled(PolyMap& dst, const PolyMap& src, Cplx s) {
    for (const auto& [m, c] : src) dst[m] += s * c;
}

}  // namespace pmech
