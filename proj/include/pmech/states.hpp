#pragma once

#include <stdexcept>
#include <vector>

#include "pmech/pgfun.hpp"

namespace pmech {

// Shared state carriers. Variable layout is always the block order
// (x_1..x_n, y_1..y_n) for functions on the group, (q_1..q_n, p_1..p_n) on
// the orbit, and (xi_1..xi_n) on configuration space.

// Element of F^2(O_h): a function of (q,p) in the polarized subspace.
// Polarization membership is checked by residual sampling, not enforced here.
struct FockState {
    double h = 1.0;
    PGFun f;  // 2n vars

    int dof() const { return f.dim() / 2; }
};

// Element of H_h^2: the (x,y) part, the e^{2 pi i h s} fiber factor is
// implicit. h may be negative but not zero.
struct HState {
    double h = 1.0;
    PGFun f;  // 2n vars

    int dof() const { return f.dim() / 2; }
};

// Integration-kernel state over (x,y); h = 0 carries the classical
// (q,p)-pure-state phases.
struct KernelState {
    double h = 0.0;
    PGFun l;  // 2n vars

    int dof() const { return l.dim() / 2; }
};

// Element of L^2(R^n) acted on by the Schrodinger representation.
struct SchrodingerState {
    double h = 1.0;
    PGFun psi;  // n vars

    int dof() const { return psi.dim(); }
};

struct CoherentLabel {
    double h = 1.0;
    std::vector<double> a;
    std::vector<double> b;

    CoherentLabel() = default;
    CoherentLabel(double h_, std::vector<double> a_, std::vector<double> b_)
        : h(h_), a(std::move(a_)), b(std::move(b_)) {
        if (h == 0.0) throw std::invalid_argument("CoherentLabel: h must be nonzero");
        if (a.size() != b.size()) throw DimensionMismatch("CoherentLabel: a and b lengths differ");
    }
    static CoherentLabel one_dof(double h, double a, double b) { return {h, {a}, {b}}; }
    int dof() const { return static_cast<int>(a.size()); }
};

// Label of a unitary irreducible representation: either the Planck parameter
// h != 0 or a phase-space point (q,p) for the one-dimensional family.
struct RepLabel {
    enum class Kind { Planck, PhasePoint } kind = Kind::Planck;
    double h = 1.0;
    std::vector<double> q, p;

    static RepLabel planck(double h) {
        if (h == 0.0) throw std::invalid_argument("RepLabel: h = 0 is a phase-point label");
        RepLabel r;
        r.kind = Kind::Planck;
        r.h = h;
        return r;
    }
    static RepLabel phase_point(std::vector<double> q, std::vector<double> p) {
        RepLabel r;
        r.kind = Kind::PhasePoint;
        r.h = 0.0;
        r.q = std::move(q);
        r.p = std::move(p);
        return r;
    }
};

inline void require_same_h(double h1, double h2, const char* where) {
    if (h1 != h2) throw std::invalid_argument(std::string(where) + ": mixing states with different h");
}

}  // namespace pmech
