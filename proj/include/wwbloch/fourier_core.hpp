#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wwbloch/errors.hpp"

namespace wwbloch {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Symmetric Fourier truncation: modes -N..N on the 2*pi-periodic cell.
struct Truncation {
    int N;

    explicit Truncation(int n) : N(n) {
        if (n < 1) throw ConfigError("truncation order must be >= 1");
    }

    int dim() const { return 2 * N + 1; }

    // Matrix/vector row of mode j.
    int row(int j) const {
        if (j < -N || j > N) throw ConfigError("mode outside truncation");
        return j + N;
    }

    int mode(int r) const { return r - N; }
};

// Finitely supported Fourier coefficient list, c_j for |j| <= maxMode.
class FourierField {
public:
    explicit FourierField(int max_mode);

    // Build from (mode, coefficient) pairs; repeated modes accumulate.
    static FourierField from_pairs(int max_mode,
                                   const std::vector<std::pair<int, Complex>>& pairs);

    int max_mode() const { return max_mode_; }
    // Largest |j| with a nonzero coefficient (0 for the zero field).
    int support() const;

    Complex coeff(int j) const;            // 0 outside the stored range
    void set_coeff(int j, Complex value);

    // c_{-j} == conj(c_j) up to tol, i.e. the synthesized function is real.
    bool is_real_valued(double tol = 1e-12) const;
    double mean() const { return coeff(0).real(); }

    double l2_norm() const;

private:
    int max_mode_;
    Vector c_;
};

// Uniform samples of the field on gridSize points of [0, 2*pi).
Vector synthesize(const FourierField& f, int grid_size);

// Inverse of synthesize: recover modes -N..N from samples (exact when
// samples.size() >= 2N+1 and the underlying field is supported in -N..N).
FourierField analyze(const Vector& samples, int N);

// Bottom profile y = -h + eps*beta(x) with clearance floor c0.
struct BathymetryProfile {
    double h = 1.0;
    double eps = 0.0;
    FourierField beta{1};
    double c0 = 1e-3;

    // Throws ConfigError on: h <= 0, c0 <= 0, complex-valued or nonzero-mean
    // beta, or min_x (h - eps*beta(x)) < c0 (checked on a 1024-point grid).
    void validate() const;

    int beta_support() const { return beta.support(); }
};

// Named profiles used throughout the test problems.
BathymetryProfile make_preset_profile(const std::string& name, double eps,
                                      double h = 1.0);

// Quasimomentum reduced to the fundamental cell [-1/2, 1/2).
struct BlochParameter {
    double theta;

    explicit BlochParameter(double t) {
        theta = t - std::floor(t + 0.5);
        if (theta >= 0.5) theta -= 1.0;  // guard against fp roundoff at the seam
    }
};

// Flat-water dispersion symbol k*tanh(h*k) and its smoothing companion
// k*sech(h*k); both are evaluated overflow-free for large |k|.
double tanh_symbol(double k, double h);
double sech_symbol(double k, double h);

// diag(f(j + theta)) over the truncation, rows/cols indexed by Truncation::row.
Matrix diag_symbol(const std::function<double(double)>& f, BlochParameter theta,
                   Truncation trunc);

// Multiplication by the field as a Toeplitz matrix: entry (j,l) = c_{j-l}.
Matrix toeplitz_mult(const FourierField& f, Truncation trunc);

// max_{j,l} |A_{jl} - conj(A_{lj})|, absolute.
double hermiticity_error(const Matrix& A);

} // namespace wwbloch
