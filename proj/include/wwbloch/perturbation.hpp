#pragma once

#include <set>
#include <string>
#include <vector>

#include "wwbloch/dno_operator.hpp"

namespace wwbloch {

// Output of the order-by-order conjugation T = sum_q eps^q T_q that
// block-diagonalizes G_theta with respect to the crossing pair of modes
// (+n, -n) at theta (or the colliding pair (m, 1-m) at the cell edge).
struct PerturbationData {
    int mode_a = 0;             // first mode of the crossing pair
    int mode_b = 0;             // second mode
    BlochParameter theta{0.0};
    std::vector<Matrix> T;      // T[q], q = 0..q_max; T[0] = 0
    // Full exponential-series terms: Tm[s] = [e^{-T}]_s, Tp[s] = [e^{T}]_s.
    std::vector<Matrix> Tm, Tp;
};

// Solve the homological equations order by order. The pair (mode_a, mode_b)
// indexes the nearly-degenerate flat-bottom modes; divisors below the floor
// 1e-8 * sqrt(2*(d^2+1)) (d = distance to the pair) raise NumericalError.
PerturbationData solve_T_recursion(const DnoSeries& series, int mode_a,
                                   int mode_b, int q_max);

struct EffectiveMatrix {
    std::vector<Eigen::Matrix2cd> per_order;  // A_q, q = 0..q_max
    Eigen::Matrix2cd total;                   // sum_q eps^q A_q
};

// 2x2 effective block P e^{-T} (G0 + M) e^{T} P on the crossing pair.
// Row/col 0 is mode_a, 1 is mode_b.
EffectiveMatrix effective_matrix_A(const PerturbationData& data,
                                   const DnoSeries& series, double eps);

// Closed-form second-order matrix elements a_{n,n}, a_{-n,-n}, a_{n,-n} for
// the pair (n, -n) at theta = 0 (even gaps).
struct SecondOrderCoefficients {
    Complex a_pp, a_mm, a_pm;
};
SecondOrderCoefficients second_order_coefficients(const BathymetryProfile& profile,
                                                  int n, BlochParameter theta);

// Leading-order closed forms for specific profile/gap combinations.
enum class GapPreset {
    CosxGap1,         // beta = cos x: gap 1 width, O(eps)
    CosxGap2,         // beta = cos x: gap 2 width, O(eps^4)
    CosxCenterShift,  // beta = cos x: gap 1 center deviation from g_0(1/2), O(eps^2)
    Cos13Gap2,        // beta = cos x + cos 3x: gap 2 width, O(eps^2)
};
double analytic_gap_formulas(GapPreset preset, double h, double eps);

// Eigenvalues of a Hermitian 2x2 block in closed form.
struct GapFromA {
    double lower = 0, upper = 0, width = 0;
};
GapFromA gap_from_A(const Eigen::Matrix2cd& A);

// Log-log least-squares fit width ~ coefficient * eps^exponent. Widths at or
// below closed_threshold flag the gap as closed and suppress the fit.
struct ScalingFit {
    double exponent = 0;
    double coefficient = 0;
    double residual = 0;  // rms misfit in log-space
    bool closed = false;
};
ScalingFit fit_gap_scaling(const std::vector<double>& eps,
                           const std::vector<double>& widths,
                           double closed_threshold = 1e-12);

// Can the gap index be written as a sum of at most max_order elements of the
// bathymetry's Fourier support? False predicts a closed gap through that order.
bool gap_opening_predicate(const std::set<int>& beta_support, int gap_index,
                           int max_order);

// Nearly-degenerate flat-bottom mode pair at theta_star: the (j, j') minimizing
// |g_j - g_j'| over |j|,|j'| <= max_mode, j < j'.
std::pair<int, int> colliding_pair(double theta_star, double h, int max_mode);

} // namespace wwbloch
