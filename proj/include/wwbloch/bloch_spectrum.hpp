#pragma once

#include <vector>

#include "wwbloch/dno_operator.hpp"

namespace wwbloch {

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns, orthonormal
};

// Hermitian eigendecomposition; rejects matrices whose hermiticity defect
// exceeds herm_tol relative to the largest entry.
EigenSystem eigen_decompose(const Matrix& A, double herm_tol = 1e-10);

// Flat-bottom Bloch eigenvalue Lambda_n(theta), ordered ascending in n for
// each theta by the standard band labeling over the shifted lattice j+theta.
double flat_bottom_reference(BlochParameter theta, int band, double h);

// Inclusive uniform grid on [-1/2, 1/2]; 'points' must be odd so that the grid
// contains -1/2, 0 and +1/2 where band extrema sit.
std::vector<double> default_theta_grid(int points = 257);

struct BandStructure {
    std::vector<double> theta_grid;
    Eigen::MatrixXd bands;  // (theta index, band index), bands 0..n_max
    double h = 0.0;
    double eps = 0.0;
    int N = 0;
    int order = 0;
};

// Sweep the grid, diagonalizing G_theta at each point. Requires
// n_max + margin <= N with margin = 4 + order*supp(beta), so the reported
// bands are converged in truncation. Deterministic for any thread count.
BandStructure band_sweep(const BathymetryProfile& profile,
                         const std::vector<double>& theta_grid, Truncation trunc,
                         int order, int n_max, int threads = 1);

struct GapReport {
    int index = 0;          // gap n sits between bands n-1 and n
    double lower_edge = 0;  // max_theta Lambda_{n-1}
    double upper_edge = 0;  // min_theta Lambda_n
    double theta_at_lower = 0;
    double theta_at_upper = 0;
    double width = 0;       // max(0, upper - lower)
    double center = 0;
    bool closed = false;    // width below max(1e-10, 1e-8*upper_edge)
};

std::vector<GapReport> band_edges(const BandStructure& bs);

// Physical-space samples of e^{i*theta*x} * sum_j psi_j e^{ijx} over
// 'periods' copies of the cell.
Vector reconstruct_bloch_eigenfunction(const Vector& coeffs, BlochParameter theta,
                                       int grid_size, int periods = 1);

struct WaveState {
    FourierField eta;      // surface elevation modes
    FourierField eta_dot;  // its time derivative
};

// Exact solution of eta_tt = -g*G_theta eta in the eigenbasis 'sys' of
// G_theta. Modes with |lambda| <= 1e-10 drift linearly; lambda < -1e-10 is a
// NumericalError (the operator must be positive semidefinite).
WaveState evolve_linearized(const EigenSystem& sys, const WaveState& initial,
                            double gravity, double t);

// Conserved energy 0.5*<eta_dot,eta_dot> + 0.5*g*<eta, G eta>.
double wave_energy(const Matrix& G, const WaveState& state, double gravity);

} // namespace wwbloch
