#include "wwbloch/dno_operator.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Sparse>

namespace wwbloch {

namespace {

std::vector<Matrix> inner_strings(const Matrix& B, const Matrix& G,
                                  const Matrix& D2, const Matrix& D3T, int order) {
    std::vector<Matrix> I;
    I.push_back(-B);
    if (order >= 2) I.push_back(-B * G * B);
    if (order >= 3)
        I.push_back(-(B * B * B * D2) / 6.0 + (B * B * D2 * B) / 2.0 -
                    B * G * B * G * B);
    if (order >= 4)
        I.push_back(B * G * I[2] - (B * B * D2 * I[1]) / 2.0 -
                    (B * B * B * D3T * B) / 6.0);
    return I;
}

} // namespace

DnoSeries build_M_terms(const BathymetryProfile& profile, BlochParameter theta,
                        Truncation trunc, int order) {
    if (order < 1 || order > 4)
        throw ConfigError("expansion order must be in 1..4");
    profile.validate();
    const double h = profile.h;

    // Assemble on an enlarged truncation so every convolution path of length
    // <= order stays inside the working window, then crop the center block.
    const int supp = profile.beta_support();
    Truncation wide(trunc.N + order * std::max(supp, 1));
    const int W = wide.dim();

    Matrix B = toeplitz_mult(profile.beta, wide);
    Matrix S = diag_symbol([h](double k) { return sech_symbol(k, h); }, theta, wide);
    Matrix G = diag_symbol([h](double k) { return tanh_symbol(k, h); }, theta, wide);
    Matrix D2 = Matrix::Zero(W, W), D3T = Matrix::Zero(W, W);
    for (int r = 0; r < W; ++r) {
        const double k = wide.mode(r) + theta.theta;
        D2(r, r) = k * k;
        D3T(r, r) = k * k * tanh_symbol(k, h);
    }

    DnoSeries out{trunc, theta, h, {}};
    out.terms.push_back(
        diag_symbol([h](double k) { return tanh_symbol(k, h); }, theta, trunc));
    const int off = wide.N - trunc.N;
    for (const Matrix& I : inner_strings(B, G, D2, D3T, order))
        out.terms.push_back((S * I * S).block(off, off, trunc.dim(), trunc.dim()));
    return out;
}

Matrix assemble_G_theta(const BathymetryProfile& profile, BlochParameter theta,
                        Truncation trunc, int order) {
    const double h = profile.h;
    if (profile.eps == 0.0 || profile.beta_support() == 0)
        return diag_symbol([h](double k) { return tanh_symbol(k, h); }, theta, trunc);
    DnoSeries series = build_M_terms(profile, theta, trunc, order);
    Matrix A = series.terms[0];
    double ep = 1.0;
    for (int p = 1; p <= order; ++p) {
        ep *= profile.eps;
        A += ep * series.terms[p];
    }
    return 0.5 * (A + A.adjoint().eval());  // discard roundoff asymmetry
}

namespace {

// One second-order solve of the mapped boundary-value problem:
//   (dx + i*theta)^2 u + u_yy = 0 on -H(x) < y < 0,  H = h - eps*beta,
// in sigma = 1 + y/H, with Dirichlet u = psi at sigma = 1 and the transformed
// Neumann bottom condition at sigma = 0. Unknowns are the Ns rows sigma < 1.
Vector oracle_single(const BathymetryProfile& profile, double theta,
                     const Vector& psi_samples, int N, int Nx, int Ns) {
    using SpMat = Eigen::SparseMatrix<Complex>;
    const double h = profile.h, eps = profile.eps;
    const double dx = 2.0 * std::numbers::pi / Nx;
    const double ds = 1.0 / Ns;
    const Complex I(0.0, 1.0);

    Eigen::VectorXd H(Nx), Hp(Nx), Hpp(Nx);
    for (int m = 0; m < Nx; ++m) {
        const double x = m * dx;
        Complex b = 0, bp = 0, bpp = 0;
        for (int j = -profile.beta.max_mode(); j <= profile.beta.max_mode(); ++j) {
            const Complex e = profile.beta.coeff(j) * std::polar(1.0, j * x);
            b += e;
            bp += Complex(0, j) * e;
            bpp += Complex(0, j) * Complex(0, j) * e;
        }
        H[m] = h - eps * b.real();
        Hp[m] = -eps * bp.real();
        Hpp[m] = -eps * bpp.real();
    }

    const int n_unknown = Nx * Ns;
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(n_unknown) * 12);
    Vector rhs = Vector::Zero(n_unknown);
    auto index = [&](int m, int i) { return i * Nx + ((m % Nx) + Nx) % Nx; };
    auto add = [&](int r, int m, int i, Complex v) {
        if (i == Ns)
            rhs[r] -= v * psi_samples[((m % Nx) + Nx) % Nx];
        else
            trip.emplace_back(r, index(m, i), v);
    };

    for (int i = 0; i < Ns; ++i) {
        const double sig = i * ds;
        for (int m = 0; m < Nx; ++m) {
            const int r = index(m, i);
            if (i == 0) {
                // Hp*(u_x + i*theta*u) + (1 + Hp^2)/H * u_sigma = 0,
                // one-sided second-order derivative in sigma.
                const double cs = (1.0 + Hp[m] * Hp[m]) / H[m];
                add(r, m + 1, 0, Hp[m] / (2 * dx));
                add(r, m - 1, 0, -Hp[m] / (2 * dx));
                add(r, m, 0, I * theta * Hp[m]);
                add(r, m, 0, -3.0 * cs / (2 * ds));
                add(r, m, 1, 4.0 * cs / (2 * ds));
                add(r, m, 2, -cs / (2 * ds));
                continue;
            }
            const double sx = -(sig - 1.0) * Hp[m] / H[m];
            const double sxx =
                (sig - 1.0) * (2.0 * Hp[m] * Hp[m] - H[m] * Hpp[m]) / (H[m] * H[m]);
            const double css = sx * sx + 1.0 / (H[m] * H[m]);
            const double cxs = 2.0 * sx;
            const Complex cs = sxx + 2.0 * I * theta * sx;
            const Complex cx = 2.0 * I * theta;
            const double c0 = -theta * theta;
            add(r, m + 1, i, 1.0 / (dx * dx));
            add(r, m - 1, i, 1.0 / (dx * dx));
            add(r, m, i, -2.0 / (dx * dx));
            add(r, m, i + 1, css / (ds * ds));
            add(r, m, i - 1, css / (ds * ds));
            add(r, m, i, -2.0 * css / (ds * ds));
            add(r, m + 1, i + 1, cxs / (4 * dx * ds));
            add(r, m - 1, i - 1, cxs / (4 * dx * ds));
            add(r, m + 1, i - 1, -cxs / (4 * dx * ds));
            add(r, m - 1, i + 1, -cxs / (4 * dx * ds));
            add(r, m, i + 1, cs / (2 * ds));
            add(r, m, i - 1, -cs / (2 * ds));
            add(r, m + 1, i, cx / (2 * dx));
            add(r, m - 1, i, -cx / (2 * dx));
            add(r, m, i, c0);
        }
    }

    SpMat A(n_unknown, n_unknown);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SpMat> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw NumericalError("sparse factorization of the mapped Laplacian failed");
    Vector u = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw NumericalError("sparse solve of the mapped Laplacian failed");

    // Surface flux G psi = u_y|_{y=0} = u_sigma(x,1)/H(x), one-sided stencil
    // through the Dirichlet row.
    Vector flux(Nx);
    for (int m = 0; m < Nx; ++m) {
        const Complex w2 = u[index(m, Ns - 2)];
        const Complex w1 = u[index(m, Ns - 1)];
        const Complex w0 = psi_samples[m];
        flux[m] = (3.0 * w0 - 4.0 * w1 + w2) / (2 * ds) / H[m];
    }
    return flux;
}

FourierField flux_to_modes(const Vector& flux, int N) { return analyze(flux, N); }

} // namespace

FourierField apply_dno_oracle(const BathymetryProfile& profile,
                              BlochParameter theta, const FourierField& psi,
                              OracleResolution res) {
    profile.validate();
    const int N = psi.max_mode();
    if (res.nx < 2 * N + 2 || res.nsigma < 4)
        throw ConfigError("oracle grid too coarse for the requested modes");
    Vector samples = synthesize(psi, res.nx);
    Vector flux = oracle_single(profile, theta.theta, samples, N, res.nx, res.nsigma);
    FourierField coarse = flux_to_modes(flux, N);
    if (!res.richardson) return coarse;

    Vector samples2 = synthesize(psi, 2 * res.nx);
    Vector flux2 =
        oracle_single(profile, theta.theta, samples2, N, 2 * res.nx, 2 * res.nsigma);
    FourierField fine = flux_to_modes(flux2, N);
    FourierField out(N);
    for (int j = -N; j <= N; ++j)
        out.set_coeff(j, (4.0 * fine.coeff(j) - coarse.coeff(j)) / 3.0);
    return out;
}

} // namespace wwbloch
