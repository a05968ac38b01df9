#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pmech/pgfun.hpp"

namespace pmech {

// Complex polynomial in phase-space variables (q_1..q_n, p_1..p_n), stored as
// a coefficient map over (alpha, beta) multi-index pairs.
class PolyQP {
  public:
    using Key = std::pair<MultiIndex, MultiIndex>;

    PolyQP() = default;
    explicit PolyQP(int n) : n_(n) {}

    static PolyQP constant(int n, Cplx c);
    static PolyQP q(int n, int j);  // the coordinate q_j
    static PolyQP p(int n, int j);  // the coordinate p_j

    int dof() const { return n_; }
    const std::map<Key, Cplx>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int degree() const;

    void add(const MultiIndex& alpha, const MultiIndex& beta, Cplx c);
    void prune(double tol = 1e-15);

    Cplx eval(const std::vector<double>& q, const std::vector<double>& p) const;

    PolyQP diff_q(int j) const;
    PolyQP diff_p(int j) const;

    // Substitutes (q,p) -> M (q,p) + t with M real 2n x 2n acting on the
    // stacked vector (q_1..q_n, p_1..p_n).
    PolyQP linear_substitute(const std::vector<double>& M, const std::vector<double>& t) const;

    friend PolyQP operator+(const PolyQP& a, const PolyQP& b);
    friend PolyQP operator-(const PolyQP& a, const PolyQP& b);
    friend PolyQP operator*(const PolyQP& a, const PolyQP& b);
    friend PolyQP operator*(Cplx s, const PolyQP& a);
    friend bool approx_equal(const PolyQP& a, const PolyQP& b, double tol);

  private:
    int n_ = 0;
    std::map<Key, Cplx> terms_;
};

PolyQP poisson_bracket(const PolyQP& f, const PolyQP& g);

// Parses "q^2 + 2.5*p - 1" style polynomials. Variables: q, p (or q1..qn,
// p1..pn for several degrees of freedom); uppercase Q, P accepted as synonyms.
// Grammar: integer/decimal coefficients, +, -, *, ^ and parentheses.
PolyQP parse_polyqp(const std::string& text, int n);

// A classical polynomial standing for its p-mechanisation
// sum c_ab (1/2 pi i)^{|a|+|b|} d_x^a d_y^b delta(s) delta(x) delta(y),
// acting on states by convolution.
struct PMechObservable {
    PolyQP poly;

    // Hook for the p-mechanisation variant with a general central factor
    // c(s) in place of delta(s); convolution on an h-fiber only needs the
    // Fourier transform value c^(h). Every built-in observable uses delta(s),
    // for which the factor is identically 1.
    double (*central_weight)(double h) = nullptr;

    int dof() const { return poly.dof(); }
};

inline PMechObservable p_mechanise(const PolyQP& f) { return {f, nullptr}; }

}  // namespace pmech
