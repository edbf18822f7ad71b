#pragma once

#include <limits>
#include <vector>

#include "ancient_heat/domain.hpp"

namespace ancient_heat {

// Full eigensystem of Delta. Eigenvalues descending (lambda_1 = 0 for
// neumann/periodic/plain domains), eigenfields orthonormal, stored row-major.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<double> eigenfields;
    double residual = 0.0;

    int size() const { return int(eigenvalues.size()); }
    const double* field(int i) const { return eigenfields.data() + std::size_t(i) * eigenvalues.size(); }
};

inline constexpr int kEigenSizeCap = 512;

// Cyclic Jacobi rotations on the dense matrix; deterministic sweep order,
// eigenvector signs normalized (largest-magnitude entry positive).
SpectralDecomposition eigendecompose(const LaplacianOperator& delta, int size_cap = kEigenSizeCap);

// sum_i e^{lambda_i t} <a, phi_i> phi_i; exact for t of either sign.
ScalarField heat_evolve_exact(const SpectralDecomposition& dec, const ScalarField& a, double t);

// Crank-Nicolson with step t/steps, each solve by conjugate gradient to
// relative residual 1e-12. Second order in the step.
ScalarField heat_evolve_stepped(const LaplacianOperator& delta, const ScalarField& a, double t,
                                int steps);

// Projection onto the eigenmodes with |lambda| <= lambda_cut.
ScalarField band_limit(const SpectralDecomposition& dec, const ScalarField& a, double lambda_cut);

// Caloric window u(., t_i) = e^{t_i Delta} a on the uniform grid
// -T = t_0 < ... < t_m = 0. Modes with |lambda| > lambda_cut are removed from
// the coefficients before synthesis: going through a band-limited vector
// instead would amplify its off-band projection dust by e^{|lambda| T}.
SpaceTimeField ancient_window(const SpectralDecomposition& dec, const ScalarField& a, double T,
                              int samples,
                              double lambda_cut = std::numeric_limits<double>::infinity());

// One-sided backward estimate of the order-m time derivative at t = 0 from
// samples f(0), f(-h), f(-2h), ...; consistency order 2, m <= 6.
double fd_backward_derivative(const std::vector<double>& samples, int m, double h);

// Per-vertex fd_backward_derivative on the trailing samples of u.
ScalarField time_derivative_fd(const SpaceTimeField& u, int order);

// {"eigenvalues":[…], "residual":…}
std::string spectral_json(const SpectralDecomposition& dec);

}  // namespace ancient_heat
