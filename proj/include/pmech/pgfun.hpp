#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmech {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Cplx kI{0.0, 1.0};

// Hard cap on the total degree of any monomial produced by the algebra.
// Runaway expansions from repeated substitution fail loudly instead of
// silently eating memory.
inline constexpr int kMaxMonomialDegree = 64;

// Canonicalization tolerances: exponent data matching is absolute, the
// coefficient prune is relative to the largest coefficient of the sum.
inline constexpr double kExpMatchTol = 1e-12;
inline constexpr double kCoeffPruneTol = 1e-14;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotIntegrable : std::runtime_error {
    explicit NotIntegrable(const std::string& what, int term = -1)
        : std::runtime_error(what), term_index(term) {}
    int term_index;  // offending term, -1 if not attributable
};

struct DegreeCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monomial exponent vector over m real variables.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(int m) : e(static_cast<std::size_t>(m), 0) {}

    int dim() const { return static_cast<int>(e.size()); }
    int degree() const {
        int d = 0;
        for (int k : e) d += k;
        return d;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e < b.e; }
};

// Sparse polynomial over m variables; the workhorse of monomial expansions.
using PolyMap = std::map<MultiIndex, Cplx>;

// exp(-x^T A x + 2 b.x + c) with A complex symmetric.
struct QuadExp {
    int dim = 0;
    std::vector<Cplx> A;  // dim*dim, row-major, kept symmetric
    std::vector<Cplx> b;  // dim
    Cplx c{};

    QuadExp() = default;
    explicit QuadExp(int m)
        : dim(m),
          A(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), Cplx{}),
          b(static_cast<std::size_t>(m), Cplx{}) {}

    Cplx& a(int i, int j) { return A[static_cast<std::size_t>(i) * dim + j]; }
    const Cplx& a(int i, int j) const { return A[static_cast<std::size_t>(i) * dim + j]; }

    // Adds the exponent term coef * x_i * x_j (i != j handled symmetrically).
    void add_quad(int i, int j, Cplx coef) {
        if (i == j) {
            a(i, i) -= coef;
        } else {
            a(i, j) -= coef / 2.0;
            a(j, i) -= coef / 2.0;
        }
    }
    // Adds the exponent term coef * x_i.
    void add_lin(int i, Cplx coef) { b[static_cast<std::size_t>(i)] += coef / 2.0; }

    void symmetrize();
    // true iff Re(A) is positive definite (pivoted LDL^T on the real part).
    bool integrable() const;
};

struct PGTerm {
    Cplx coeff{};
    MultiIndex mono;
    QuadExp exp;
};

// Finite sum of (coefficient x monomial x Gaussian) terms over R^m; the
// carrier for every state, kernel and integral kernel in this project.
class PGFun {
  public:
    PGFun() = default;
    explicit PGFun(int m) : dim_(m) {}

    static PGFun zero(int m) { return PGFun(m); }
    static PGFun constant(int m, Cplx value);
    static PGFun monomial(int m, const MultiIndex& mi, Cplx coeff);
    // Single term coeff * x^mono * exp(-x^T A x + 2 b.x + c).
    static PGFun term(Cplx coeff, const MultiIndex& mono, const QuadExp& exp);
    static PGFun gaussian(const QuadExp& exp, Cplx coeff = 1.0);

    int dim() const { return dim_; }
    const std::vector<PGTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const PGTerm& t);  // does not canonicalize
    void canonicalize();

    friend PGFun operator+(const PGFun& f, const PGFun& g);
    friend PGFun operator-(const PGFun& f, const PGFun& g);
    friend PGFun operator*(const PGFun& f, const PGFun& g);
    friend PGFun operator*(Cplx s, const PGFun& f);

  private:
    int dim_ = 0;
    std::vector<PGTerm> terms_;
};

// --- gauss-core operations -------------------------------------------------

PGFun pg_conj(const PGFun& f);
PGFun pg_diff(const PGFun& f, int var);

// f(L x + t): L is (f.dim x m_out) real, t complex of length f.dim.
PGFun pg_affine_sub(const PGFun& f, const std::vector<double>& L, int m_out,
                    const std::vector<Cplx>& t);

// Exact integral over all of R^m by iterated one-variable reduction.
Cplx pg_integrate_all(const PGFun& f);

// Integrates out the listed variables; the result is a PGFun over the
// remaining variables in their original order.
PGFun pg_integrate_out(const PGFun& f, const std::vector<int>& vars);

// weight * Integral of f * conj(g).
Cplx pg_inner(const PGFun& f, const PGFun& g, Cplx weight = 1.0);

Cplx pg_eval(const PGFun& f, const std::vector<double>& x);

// L2 norm sqrt(<f,f>) with the given weight.
double pg_norm(const PGFun& f, Cplx weight = 1.0);

// max over sample points of |f - g| (used by proportionality checks in tests).
double pg_max_abs_diff(const PGFun& f, const PGFun& g, const std::vector<std::vector<double>>& pts);

// --- small helpers shared by the modules -----------------------------------

PolyMap poly_mul(const PolyMap& a, const PolyMap& b);
PolyMap poly_pow(const PolyMap& a, int k);
void poly_add_scaled(PolyMap& dst, const PolyMap& src, Cplx s);

}  // namespace pmech
