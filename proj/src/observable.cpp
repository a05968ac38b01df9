#include "pmech/observable.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace pmech {

PolyQP PolyQP::constant(int n, Cplx c) {
    PolyQP f(n);
    f.add(MultiIndex(n), MultiIndex(n), c);
    return f;
}

PolyQP PolyQP::q(int n, int j) {
    PolyQP f(n);
    MultiIndex a(n);
    a.e[static_cast<std::size_t>(j)] = 1;
    f.add(a, MultiIndex(n), 1.0);
    return f;
}

PolyQP PolyQP::p(int n, int j) {
    PolyQP f(n);
    MultiIndex b(n);
    b.e[static_cast<std::size_t>(j)] = 1;
    f.add(MultiIndex(n), b, 1.0);
    return f;
}

int PolyQP::degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first.degree() + k.second.degree());
    return d;
}

void PolyQP::add(const MultiIndex& alpha, const MultiIndex& beta, Cplx c) {
    if (alpha.dim() != n_ || beta.dim() != n_) throw DimensionMismatch("PolyQP::add: bad multi-index");
    terms_[{alpha, beta}] += c;
    if (terms_[{alpha, beta}] == 0.0) terms_.erase({alpha, beta});
}

void PolyQP::prune(double tol) {
    double maxc = 0.0;
    for (const auto& [k, c] : terms_) maxc = std::max(maxc, std::abs(c));
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= tol * maxc)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Cplx PolyQP::eval(const std::vector<double>& q, const std::vector<double>& p) const {
    Cplx total{};
    for (const auto& [k, c] : terms_) {
        Cplx v = c;
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < k.first.e[static_cast<std::size_t>(j)]; ++i) v *= q[static_cast<std::size_t>(j)];
            for (int i = 0; i < k.second.e[static_cast<std::size_t>(j)]; ++i) v *= p[static_cast<std::size_t>(j)];
        }
        total += v;
    }
    return total;
}

PolyQP PolyQP::diff_q(int j) const {
    PolyQP r(n_);
    for (const auto& [k, c] : terms_) {
        int e = k.first.e[static_cast<std::size_t>(j)];
        if (e == 0) continue;
        MultiIndex a = k.first;
        a.e[static_cast<std::size_t>(j)] = e - 1;
        r.add(a, k.second, c * static_cast<double>(e));
    }
    return r;
}

PolyQP PolyQP::diff_p(int j) const {
    PolyQP r(n_);
    for (const auto& [k, c] : terms_) {
        int e = k.second.e[static_cast<std::size_t>(j)];
        if (e == 0) continue;
        MultiIndex b = k.second;
        b.e[static_cast<std::size_t>(j)] = e - 1;
        r.add(k.first, b, c * static_cast<double>(e));
    }
    return r;
}

PolyQP PolyQP::linear_substitute(const std::vector<double>& M, const std::vector<double>& t) const {
    int m = 2 * n_;
    if (static_cast<int>(M.size()) != m * m || static_cast<int>(t.size()) != m)
        throw DimensionMismatch("PolyQP::linear_substitute: M must be 2n x 2n");
    // images of the coordinates as degree-1 polynomials
    std::vector<PolyQP> image(static_cast<std::size_t>(m), PolyQP(n_));
    for (int i = 0; i < m; ++i) {
        PolyQP lin = PolyQP::constant(n_, t[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n_; ++j) {
            double cq = M[static_cast<std::size_t>(i) * m + j];
            double cp = M[static_cast<std::size_t>(i) * m + n_ + j];
            if (cq != 0.0) lin = lin + Cplx{cq, 0.0} * PolyQP::q(n_, j);
            if (cp != 0.0) lin = lin + Cplx{cp, 0.0} * PolyQP::p(n_, j);
        }
        image[static_cast<std::size_t>(i)] = lin;
    }
    PolyQP r(n_);
    for (const auto& [k, c] : terms_) {
        PolyQP term = PolyQP::constant(n_, c);
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < k.first.e[static_cast<std::size_t>(j)]; ++i) term = term * image[static_cast<std::size_t>(j)];
            for (int i = 0; i < k.second.e[static_cast<std::size_t>(j)]; ++i) term = term * image[static_cast<std::size_t>(n_ + j)];
        }
        r = r + term;
    }
    r.prune();
    return r;
}

PolyQP operator+(const PolyQP& a, const PolyQP& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("PolyQP add: dof mismatch");
    PolyQP r = a;
    for (const auto& [k, c] : b.terms_) r.add(k.first, k.second, c);
    return r;
}

PolyQP operator-(const PolyQP& a, const PolyQP& b) { return a + Cplx{-1.0, 0.0} * b; }

PolyQP operator*(Cplx s, const PolyQP& a) {
    PolyQP r(a.n_);
    if (s == 0.0) return r;
    for (const auto& [k, c] : a.terms_) r.add(k.first, k.second, s * c);
    return r;
}

PolyQP operator*(const PolyQP& a, const PolyQP& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("PolyQP mul: dof mismatch");
    PolyQP r(a.n_);
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            MultiIndex alpha = ka.first, beta = ka.second;
            for (std::size_t i = 0; i < alpha.e.size(); ++i) {
                alpha.e[i] += kb.first.e[i];
                beta.e[i] += kb.second.e[i];
            }
            r.add(alpha, beta, ca * cb);
        }
    return r;
}

bool approx_equal(const PolyQP& a, const PolyQP& b, double tol) {
    PolyQP d = a - b;
    double m = 0.0;
    for (const auto& [k, c] : d.terms()) m = std::max(m, std::abs(c));
    return m <= tol;
}

PolyQP poisson_bracket(const PolyQP& f, const PolyQP& g) {
    if (f.dof() != g.dof()) throw DimensionMismatch("poisson_bracket: dof mismatch");
    PolyQP r(f.dof());
    for (int i = 0; i < f.dof(); ++i)
        r = r + f.diff_q(i) * g.diff_p(i) - g.diff_q(i) * f.diff_p(i);
    r.prune();
    return r;
}

// --- polynomial parser ------------------------------------------------------

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int n;

    explicit Parser(const std::string& text, int dof) : s(text), n(dof) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos) + ": " + what);
    }

    PolyQP parse() {
        PolyQP r = expr();
        skip();
        if (pos != s.size()) fail("trailing input");
        return r;
    }

    PolyQP expr() {
        PolyQP r = term(sign());
        while (true) {
            skip();
            if (pos >= s.size()) break;
            if (s[pos] == '+' || s[pos] == '-') {
                double sn = sign();
                r = r + term(sn);
            } else {
                break;
            }
        }
        return r;
    }

    double sign() {
        double sn = 1.0;
        while (true) {
            skip();
            if (pos < s.size() && s[pos] == '+') {
                ++pos;
            } else if (pos < s.size() && s[pos] == '-') {
                sn = -sn;
                ++pos;
            } else {
                break;
            }
        }
        return sn;
    }

    PolyQP term(double sn) {
        PolyQP r = factor();
        while (true) {
            skip();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                r = r * factor();
            } else if (pos < s.size() &&
                       (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '(')) {
                r = r * factor();  // implicit multiplication: "2q", "q p"
            } else {
                break;
            }
        }
        return Cplx{sn, 0.0} * r;
    }

    PolyQP factor() {
        PolyQP base = atom();
        skip();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            skip();
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (start == pos) fail("expected integer exponent");
            int e = std::stoi(s.substr(start, pos - start));
            PolyQP r = PolyQP::constant(n, 1.0);
            for (int i = 0; i < e; ++i) r = r * base;
            return r;
        }
        return base;
    }

    PolyQP atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            PolyQP r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' || s[pos] == 'e' ||
                    s[pos] == 'E' || ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
                ++pos;
            return PolyQP::constant(n, std::stod(s.substr(start, pos - start)));
        }
        if (c == 'q' || c == 'Q' || c == 'p' || c == 'P') {
            bool is_q = (c == 'q' || c == 'Q');
            ++pos;
            int j = 0;
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                std::size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                j = std::stoi(s.substr(start, pos - start)) - 1;
            }
            if (j < 0 || j >= n) fail("variable index out of range");
            return is_q ? PolyQP::q(n, j) : PolyQP::p(n, j);
        }
        fail("unexpected character");
    }
};

}  // namespace

PolyQP parse_polyqp(const std::string& text, int n) {
    Parser p(text, n);
    return p.parse();
}

}  // namespace pmech
