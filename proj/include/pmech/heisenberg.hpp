#pragma once

#include <vector>

#include "pmech/pgfun.hpp"
#include "pmech/states.hpp"

namespace pmech {

// Point (s, x, y) of the Heisenberg group H^n.
struct GroupElement {
    double s = 0.0;
    std::vector<double> x, y;

    GroupElement() = default;
    GroupElement(double s_, std::vector<double> x_, std::vector<double> y_)
        : s(s_), x(std::move(x_)), y(std::move(y_)) {
        if (x.size() != y.size()) throw DimensionMismatch("GroupElement: x and y lengths differ");
    }
    static GroupElement identity(int n) {
        return {0.0, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    }
    static GroupElement one_dof(double s, double x, double y) { return {s, {x}, {y}}; }
    int dof() const { return static_cast<int>(x.size()); }
};

// (s + s' + (x.y' - x'.y)/2, x + x', y + y')
GroupElement hg_multiply(const GroupElement& g1, const GroupElement& g2);
GroupElement hg_inverse(const GroupElement& g);

// Schrodinger representation: phase e^{-2 pi i h s + 2 pi i x.xi + pi i h x.y}
// times the translate psi(xi + h y).
SchrodingerState schrodinger_apply(const GroupElement& g, const SchrodingerState& st);

// rho_h on the orbit: e^{-2 pi i (h s + q.x + p.y)} f(q - h y/2, p + h x/2).
FockState rho_h_apply(const GroupElement& g, const FockState& f);

// One-dimensional representation rho_(q,p): the scalar e^{-2 pi i (q.x + p.y)}.
Cplx rho_qp_apply(const std::vector<double>& q, const std::vector<double>& p, const GroupElement& g);

// Left regular representation on the e^{2 pi i h s} fiber of H_h^2.
HState left_shift_apply(const GroupElement& g, const HState& v);

// zeta^h: v(s,x,y) -> v(s + r/h^2 + (b.y + a.x)/(2h), x + b/h, y - a/h).
// zeta is a homomorphism for the composition law
//   (r,a,b) o (r',a',b') = (r + r' - (a.b' - a'.b)/2, a + a', b + b'),
// i.e. the group law after relabeling (a,b) -> (b,a).
HState zeta_apply(double r, const std::vector<double>& a, const std::vector<double>& b, const HState& v);

// Left/right invariant vector fields; the s-derivative acts on functions on
// the full group (variable layout (s, x_1..x_n, y_1..y_n)).
enum class VectorField { SLeft, XLeft, YLeft, SRight, XRight, YRight };

// On PGFun over (s, x, y): 2n+1 variables, s first.
PGFun vector_field_apply(VectorField which, int j, const PGFun& B);

// On an HState, where the s-derivative is multiplication by 2 pi i h.
HState vector_field_apply(VectorField which, int j, const HState& v);

}  // namespace pmech
