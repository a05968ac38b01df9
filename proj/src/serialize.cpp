#include "pmech/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pmech {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void put_cplx(std::ostringstream& os, const Cplx& z) {
    os << format_double(z.real()) << ' ' << format_double(z.imag());
}

Cplx get_cplx(std::istringstream& is) {
    double re = 0.0, im = 0.0;
    if (!(is >> re >> im)) throw std::runtime_error("pgfun parse: expected complex pair");
    return {re, im};
}

void expect_bar(std::istringstream& is) {
    std::string tok;
    if (!(is >> tok) || tok != "|") throw std::runtime_error("pgfun parse: expected '|' separator");
}

}  // namespace

std::string pgfun_to_text(const PGFun& f) {
    std::ostringstream os;
    os << "pgfun " << f.dim() << ' ' << f.terms().size() << '\n';
    for (const auto& t : f.terms()) {
        put_cplx(os, t.coeff);
        os << " |";
        for (int e : t.mono.e) os << ' ' << e;
        os << " |";
        for (const auto& z : t.exp.A) {
            os << ' ';
            put_cplx(os, z);
        }
        os << " |";
        for (const auto& z : t.exp.b) {
            os << ' ';
            put_cplx(os, z);
        }
        os << " | ";
        put_cplx(os, t.exp.c);
        os << '\n';
    }
    return os.str();
}

PGFun pgfun_from_text(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    int dim = -1;
    std::size_t nterms = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag != "pgfun") throw std::runtime_error("pgfun parse: missing header");
        if (!(is >> dim >> nterms) || dim < 0) throw std::runtime_error("pgfun parse: bad header");
        break;
    }
    if (dim < 0) throw std::runtime_error("pgfun parse: empty input");

    PGFun f(dim);
    std::size_t seen = 0;
    while (seen < nterms && std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        PGTerm t;
        t.coeff = get_cplx(is);
        expect_bar(is);
        t.mono = MultiIndex(dim);
        for (int j = 0; j < dim; ++j)
            if (!(is >> t.mono.e[static_cast<std::size_t>(j)]))
                throw std::runtime_error("pgfun parse: bad exponent vector");
        expect_bar(is);
        t.exp = QuadExp(dim);
        for (auto& z : t.exp.A) z = get_cplx(is);
        expect_bar(is);
        for (auto& z : t.exp.b) z = get_cplx(is);
        expect_bar(is);
        t.exp.c = get_cplx(is);
        f.add_term(t);
        ++seen;
    }
    if (seen != nterms) throw std::runtime_error("pgfun parse: truncated term list");
    f.canonicalize();
    return f;
}

void pgfun_save(const PGFun& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("pgfun_save: cannot open " + path);
    os << pgfun_to_text(f);
}

PGFun pgfun_load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("pgfun_load: cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return pgfun_from_text(os.str());
}

}  // namespace pmech
