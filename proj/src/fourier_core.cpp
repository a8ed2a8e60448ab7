#include "wwbloch/fourier_core.hpp"

#include <cmath>
#include <numbers>

namespace wwbloch {

FourierField::FourierField(int max_mode) : max_mode_(max_mode) {
    if (max_mode < 0) throw ConfigError("max_mode must be >= 0");
    c_ = Vector::Zero(2 * max_mode + 1);
}

FourierField FourierField::from_pairs(
    int max_mode, const std::vector<std::pair<int, Complex>>& pairs) {
    FourierField f(max_mode);
    for (const auto& [j, v] : pairs) {
        if (std::abs(j) > max_mode) throw ConfigError("coefficient mode outside range");
        f.c_[j + max_mode] += v;
    }
    return f;
}

int FourierField::support() const {
    for (int j = max_mode_; j >= 1; --j)
        if (coeff(j) != 0.0 || coeff(-j) != 0.0) return j;
    return 0;
}

Complex FourierField::coeff(int j) const {
    if (std::abs(j) > max_mode_) return 0.0;
    return c_[j + max_mode_];
}

void FourierField::set_coeff(int j, Complex value) {
    if (std::abs(j) > max_mode_) throw ConfigError("coefficient mode outside range");
    c_[j + max_mode_] = value;
}

bool FourierField::is_real_valued(double tol) const {
    for (int j = 0; j <= max_mode_; ++j)
        if (std::abs(coeff(-j) - std::conj(coeff(j))) > tol) return false;
    return true;
}

double FourierField::l2_norm() const { return c_.norm(); }

Vector synthesize(const FourierField& f, int grid_size) {
    const int N = f.max_mode();
    if (grid_size < 2 * N + 2)
        throw ConfigError("grid too small to resolve the stored modes");
    Vector out = Vector::Zero(grid_size);
    const double dx = 2.0 * std::numbers::pi / grid_size;
    for (int m = 0; m < grid_size; ++m) {
        const double x = m * dx;
        Complex s = 0.0;
        for (int j = -N; j <= N; ++j)
            s += f.coeff(j) * std::polar(1.0, j * x);
        out[m] = s;
    }
    return out;
}

FourierField analyze(const Vector& samples, int N) {
    const int M = static_cast<int>(samples.size());
    if (M < 2 * N + 1)
        throw ConfigError("too few samples to separate the requested modes");
    FourierField f(N);
    const double dx = 2.0 * std::numbers::pi / M;
    for (int j = -N; j <= N; ++j) {
        Complex s = 0.0;
        for (int m = 0; m < M; ++m)
            s += samples[m] * std::polar(1.0, -j * m * dx);
        f.set_coeff(j, s / static_cast<double>(M));
    }
    return f;
}

void BathymetryProfile::validate() const {
    if (h <= 0.0) throw ConfigError("mean depth h must be positive");
    if (c0 <= 0.0) throw ConfigError("clearance bound c0 must be positive");
    if (eps < 0.0) throw ConfigError("amplitude eps must be nonnegative");
    if (!beta.is_real_valued(1e-12))
        throw ConfigError("bathymetry profile must be real-valued");
    if (std::abs(beta.mean()) > 1e-12 || std::abs(beta.coeff(0).imag()) > 1e-12)
        throw ConfigError("bathymetry profile must have zero mean");
    const int M = 1024;
    Vector samples = synthesize(beta, M);
    for (int m = 0; m < M; ++m) {
        const double depth = h - eps * samples[m].real();
        if (depth < c0)
            throw ConfigError("bottom violates the clearance bound c0");
    }
}

BathymetryProfile make_preset_profile(const std::string& name, double eps, double h) {
    BathymetryProfile p;
    p.h = h;
    p.eps = eps;
    if (name == "cosx") {
        p.beta = FourierField::from_pairs(1, {{1, 0.5}, {-1, 0.5}});
    } else if (name == "cos2x") {
        p.beta = FourierField::from_pairs(2, {{2, 0.5}, {-2, 0.5}});
    } else if (name == "cos13") {
        p.beta = FourierField::from_pairs(
            3, {{1, 0.5}, {-1, 0.5}, {3, 0.5}, {-3, 0.5}});
    } else {
        throw ConfigError("unknown profile preset: " + name);
    }
    p.validate();
    return p;
}

double tanh_symbol(double k, double h) { return k * std::tanh(h * k); }

double sech_symbol(double k, double h) {
    // 2k e^{-|hk|} / (1 + e^{-2|hk|}) avoids cosh overflow for large |k|.
    const double a = std::abs(h * k);
    const double e = std::exp(-a);
    return k * (2.0 * e / (1.0 + e * e));
}

Matrix diag_symbol(const std::function<double(double)>& f, BlochParameter theta,
                   Truncation trunc) {
    Matrix D = Matrix::Zero(trunc.dim(), trunc.dim());
    for (int r = 0; r < trunc.dim(); ++r)
        D(r, r) = f(trunc.mode(r) + theta.theta);
    return D;
}

Matrix toeplitz_mult(const FourierField& f, Truncation trunc) {
    Matrix T = Matrix::Zero(trunc.dim(), trunc.dim());
    for (int r = 0; r < trunc.dim(); ++r)
        for (int c = 0; c < trunc.dim(); ++c)
            T(r, c) = f.coeff(trunc.mode(r) - trunc.mode(c));
    return T;
}

double hermiticity_error(const Matrix& A) {
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace wwbloch
