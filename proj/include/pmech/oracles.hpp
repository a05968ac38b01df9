#pragma once

#include <functional>
#include <vector>

#include "pmech/pgfun.hpp"

namespace pmech::oracles {

// Independent numerical checks used by tests and the verification suites.
// Nothing here is called from the exact-algebra implementation path.

// Tensor Gauss-Legendre quadrature of a PGFun over an automatically chosen
// box, refined until two successive rules agree to rel_tol. Dims 1-3.
Cplx quad_integrate(const PGFun& f, double rel_tol = 1e-10);

// Adaptive Simpson on [a,b] to absolute tolerance.
double simpson(const std::function<double(double)>& f, double a, double b, double abs_tol);
Cplx simpson_c(const std::function<Cplx(double)>& f, double a, double b, double abs_tol);

// Classic RK4 for y' = f(t, y) from t0 to t1 with fixed step.
std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                        std::vector<double> y, double t0, double t1, double step);

// Central finite difference d/dx of a scalar callable.
double central_diff(const std::function<double(double)>& f, double x, double step);
Cplx central_diff_c(const std::function<Cplx(double)>& f, double x, double step);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Eigenvalues of a small real symmetric matrix (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

}  // namespace pmech::oracles
