#include "wwbloch/bloch_spectrum.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace wwbloch {

EigenSystem eigen_decompose(const Matrix& A, double herm_tol) {
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);
    if (hermiticity_error(A) > herm_tol * scale)
        throw InvariantViolation("matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success)
        throw NumericalError("Hermitian eigendecomposition failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

double flat_bottom_reference(BlochParameter theta, int band, double h) {
    if (band < 0) throw ConfigError("band index must be >= 0");
    const double t = theta.theta;
    int j;
    if (band % 2 == 0) {
        const int m = band / 2;
        j = (t < 0.0) ? -m : m;
    } else {
        const int m = (band + 1) / 2;
        j = (t < 0.0) ? m : -m;
    }
    return tanh_symbol(j + t, h);
}

std::vector<double> default_theta_grid(int points) {
    if (points < 3 || points % 2 == 0)
        throw ConfigError("theta grid needs an odd point count >= 3");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = -0.5 + static_cast<double>(i) / (points - 1);
    return grid;
}

BandStructure band_sweep(const BathymetryProfile& profile,
                         const std::vector<double>& theta_grid, Truncation trunc,
                         int order, int n_max, int threads) {
    profile.validate();
    if (n_max < 0) throw ConfigError("n_max must be >= 0");
    const int margin = 4 + order * profile.beta_support();
    if (n_max + margin > trunc.N)
        throw ConfigError("truncation too small: need N >= " +
                          std::to_string(n_max + margin) + " for " +
                          std::to_string(n_max + 1) + " converged bands");
    if (threads < 1) threads = 1;

    BandStructure bs;
    bs.theta_grid = theta_grid;
    bs.bands.resize(static_cast<Eigen::Index>(theta_grid.size()), n_max + 1);
    bs.h = profile.h;
    bs.eps = profile.eps;
    bs.N = trunc.N;
    bs.order = order;

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < theta_grid.size();
             i = next.fetch_add(1)) {
            Matrix A = assemble_G_theta(profile, BlochParameter(theta_grid[i]),
                                        trunc, order);
            EigenSystem es = eigen_decompose(A);
            for (int b = 0; b <= n_max; ++b)
                bs.bands(static_cast<Eigen::Index>(i), b) = es.values[b];
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return bs;
}

std::vector<GapReport> band_edges(const BandStructure& bs) {
    const auto rows = bs.bands.rows();
    const int nb = static_cast<int>(bs.bands.cols());
    bool has_zero = false, has_half = false;
    for (double t : bs.theta_grid) {
        if (std::abs(t) < 1e-14) has_zero = true;
        if (std::abs(std::abs(t) - 0.5) < 1e-14) has_half = true;
    }
    if (!has_zero || !has_half)
        throw ConfigError("theta grid must contain 0 and +-1/2 to bracket band extrema");

    std::vector<GapReport> gaps;
    for (int n = 1; n < nb; ++n) {
        GapReport g;
        g.index = n;
        Eigen::Index ilo, iup;
        g.lower_edge = bs.bands.col(n - 1).maxCoeff(&ilo);
        g.upper_edge = bs.bands.col(n).minCoeff(&iup);
        g.theta_at_lower = bs.theta_grid[static_cast<size_t>(ilo)];
        g.theta_at_upper = bs.theta_grid[static_cast<size_t>(iup)];
        g.width = std::max(0.0, g.upper_edge - g.lower_edge);
        g.center = 0.5 * (g.lower_edge + g.upper_edge);
        g.closed = g.width <= std::max(1e-10, 1e-8 * std::abs(g.upper_edge));
        gaps.push_back(g);
        (void)rows;
    }
    return gaps;
}

Vector reconstruct_bloch_eigenfunction(const Vector& coeffs, BlochParameter theta,
                                       int grid_size, int periods) {
    if (periods < 1) throw ConfigError("periods must be >= 1");
    const int dim = static_cast<int>(coeffs.size());
    if (dim % 2 == 0) throw ConfigError("coefficient vector must have odd length");
    const int N = (dim - 1) / 2;
    const int total = grid_size * periods;
    Vector out(total);
    const double dx = 2.0 * std::numbers::pi / grid_size;
    for (int m = 0; m < total; ++m) {
        const double x = m * dx;
        Complex s = 0.0;
        for (int j = -N; j <= N; ++j)
            s += coeffs[j + N] * std::polar(1.0, (j + theta.theta) * x);
        out[m] = s;
    }
    return out;
}

namespace {

Vector field_to_vector(const FourierField& f, int N) {
    Vector v = Vector::Zero(2 * N + 1);
    for (int j = -N; j <= N; ++j) v[j + N] = f.coeff(j);
    return v;
}

FourierField vector_to_field(const Vector& v) {
    const int N = (static_cast<int>(v.size()) - 1) / 2;
    FourierField f(N);
    for (int j = -N; j <= N; ++j) f.set_coeff(j, v[j + N]);
    return f;
}

} // namespace

WaveState evolve_linearized(const EigenSystem& sys, const WaveState& initial,
                            double gravity, double t) {
    if (gravity <= 0.0) throw ConfigError("gravity must be positive");
    const int dim = static_cast<int>(sys.values.size());
    const int N = (dim - 1) / 2;
    if (initial.eta.max_mode() > N || initial.eta_dot.max_mode() > N)
        throw ConfigError("initial data has more modes than the eigensystem");

    Vector a0 = sys.vectors.adjoint() * field_to_vector(initial.eta, N);
    Vector v0 = sys.vectors.adjoint() * field_to_vector(initial.eta_dot, N);
    Vector a(dim), v(dim);
    for (int k = 0; k < dim; ++k) {
        const double lam = sys.values[k];
        if (lam < -1e-10)
            throw NumericalError("negative eigenvalue: operator not positive semidefinite");
        if (lam <= 1e-10) {
            a[k] = a0[k] + v0[k] * t;
            v[k] = v0[k];
        } else {
            const double w = std::sqrt(gravity * lam);
            a[k] = a0[k] * std::cos(w * t) + v0[k] * std::sin(w * t) / w;
            v[k] = -a0[k] * w * std::sin(w * t) + v0[k] * std::cos(w * t);
        }
    }
    WaveState out{FourierField(N), FourierField(N)};
    out.eta = vector_to_field(sys.vectors * a);
    out.eta_dot = vector_to_field(sys.vectors * v);
    return out;
}

double wave_energy(const Matrix& G, const WaveState& state, double gravity) {
    const int N = (static_cast<int>(G.rows()) - 1) / 2;
    Vector eta = field_to_vector(state.eta, N);
    Vector etad = field_to_vector(state.eta_dot, N);
    const double kinetic = 0.5 * etad.squaredNorm();
    const double potential = 0.5 * gravity * (eta.adjoint() * G * eta)(0, 0).real();
    return kinetic + potential;
}

} // namespace wwbloch
