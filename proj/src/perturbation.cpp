#include "wwbloch/perturbation.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace wwbloch {

namespace {

// Composition factorial table is tiny (orders <= 4); recursion over integer
// compositions of s gives [e^{sign*T}]_s = sum_{p1+..+pj=s} sign^j/j! T_p1..T_pj.
void compositions(int s, std::vector<int>& parts,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (s == 0) {
        emit(parts);
        return;
    }
    for (int p = 1; p <= s; ++p) {
        parts.push_back(p);
        compositions(s - p, parts, emit);
        parts.pop_back();
    }
}

Matrix texp_term(const std::vector<Matrix>& T, int s, double sign, int dim) {
    Matrix out = Matrix::Zero(dim, dim);
    std::vector<int> parts;
    compositions(s, parts, [&](const std::vector<int>& c) {
        Matrix prod = Matrix::Identity(dim, dim);
        for (int p : c) prod = prod * T[p];
        double fact = 1.0;
        for (size_t j = 1; j <= c.size(); ++j) fact *= static_cast<double>(j);
        out += (std::pow(sign, static_cast<double>(c.size())) / fact) * prod;
    });
    return out;
}

struct PairRows {
    int ra, rb;
    int ma, mb;
};

Matrix offblock(const Matrix& X, const PairRows& pr) {
    const int dim = static_cast<int>(X.rows());
    Matrix Y = Matrix::Zero(dim, dim);
    for (int r : {pr.ra, pr.rb}) {
        for (int c = 0; c < dim; ++c) {
            if (c == pr.ra || c == pr.rb) continue;
            Y(r, c) = X(r, c);
            Y(c, r) = X(c, r);
        }
    }
    return Y;
}

} // namespace

PerturbationData solve_T_recursion(const DnoSeries& series, int mode_a,
                                   int mode_b, int q_max) {
    const Truncation trunc = series.trunc;
    const int dim = trunc.dim();
    if (q_max < 1 || q_max > series.order())
        throw ConfigError("q_max must be in 1..series order");
    if (mode_a == mode_b) throw ConfigError("crossing pair must be two distinct modes");
    PairRows pr{trunc.row(mode_a), trunc.row(mode_b), mode_a, mode_b};

    Eigen::VectorXd g(dim);
    for (int r = 0; r < dim; ++r)
        g[r] = tanh_symbol(trunc.mode(r) + series.theta.theta, series.h);
    const Matrix& G = series.terms[0];

    PerturbationData data;
    data.mode_a = mode_a;
    data.mode_b = mode_b;
    data.theta = series.theta;
    data.T.assign(q_max + 1, Matrix::Zero(dim, dim));
    data.Tm.assign(q_max + 1, Matrix::Zero(dim, dim));
    data.Tp.assign(q_max + 1, Matrix::Zero(dim, dim));
    data.Tm[0] = data.Tp[0] = Matrix::Identity(dim, dim);

    for (int q = 1; q <= q_max; ++q) {
        Matrix rhs = -series.terms[q];
        // [e^{-T}]_q G + G [e^{T}]_q with the unknown T_q zeroed: products
        // through the zero placeholder vanish, leaving the known remainders.
        rhs -= texp_term(data.T, q, -1.0, dim) * G +
               G * texp_term(data.T, q, +1.0, dim);
        for (int q1 = 1; q1 < q; ++q1)
            rhs -= data.Tm[q1] * G * data.Tp[q - q1];
        for (int q1 = 0; q1 < q; ++q1)
            for (int q2 = 1; q2 < q; ++q2) {
                const int q3 = q - q1 - q2;
                if (q3 < 0) continue;
                rhs -= data.Tm[q1] * series.terms[q2] * data.Tp[q3];
            }

        Matrix Nq = offblock(rhs, pr);
        Matrix Tq = Matrix::Zero(dim, dim);
        for (auto [r, n] : {std::pair{pr.ra, mode_a}, std::pair{pr.rb, mode_b}}) {
            for (int c = 0; c < dim; ++c) {
                if (c == pr.ra || c == pr.rb) continue;
                const double div = g[r] - g[c];
                const int d = trunc.mode(c) - n;
                const double floor = 1e-8 * std::sqrt(2.0 * (double(d) * d + 1.0));
                if (std::abs(div) < floor)
                    throw NumericalError(
                        "small divisor at order " + std::to_string(q) + ", mode " +
                        std::to_string(trunc.mode(c)) +
                        ": resonance too close to the crossing pair");
                Tq(r, c) = Nq(r, c) / div;
                Tq(c, r) = -std::conj(Tq(r, c));
            }
        }
        data.T[q] = Tq;
        data.Tm[q] = texp_term(data.T, q, -1.0, dim);
        data.Tp[q] = texp_term(data.T, q, +1.0, dim);
    }
    return data;
}

EffectiveMatrix effective_matrix_A(const PerturbationData& data,
                                   const DnoSeries& series, double eps) {
    const Truncation trunc = series.trunc;
    const int dim = trunc.dim();
    const int q_max = static_cast<int>(data.T.size()) - 1;
    if (q_max > series.order())
        throw ConfigError("conjugation data deeper than the available series");
    PairRows pr{trunc.row(data.mode_a), trunc.row(data.mode_b), data.mode_a,
                data.mode_b};
    const Matrix& G = series.terms[0];

    auto pblock = [&](const Matrix& X) {
        Eigen::Matrix2cd P;
        P << X(pr.ra, pr.ra), X(pr.ra, pr.rb), X(pr.rb, pr.ra), X(pr.rb, pr.rb);
        return P;
    };

    EffectiveMatrix out;
    out.per_order.push_back(pblock(G));
    for (int q = 1; q <= q_max; ++q) {
        Matrix Aq = series.terms[q];
        Aq += data.Tm[q] * G + G * data.Tp[q];
        for (int q1 = 1; q1 < q; ++q1)
            Aq += data.Tm[q1] * G * data.Tp[q - q1];
        for (int q1 = 0; q1 < q; ++q1)
            for (int q2 = 1; q2 <= q; ++q2) {
                const int q3 = q - q1 - q2;
                if (q3 < 0 || (q1 == 0 && q3 == 0)) continue;
                Aq += data.Tm[q1] * series.terms[q2] * data.Tp[q3];
            }
        out.per_order.push_back(pblock(Aq));
        (void)dim;
    }
    out.total = Eigen::Matrix2cd::Zero();
    double ep = 1.0;
    for (int q = 0; q <= q_max; ++q) {
        out.total += ep * out.per_order[q];
        ep *= eps;
    }
    return out;
}

SecondOrderCoefficients second_order_coefficients(const BathymetryProfile& profile,
                                                  int n, BlochParameter theta) {
    profile.validate();
    const double h = profile.h, t = theta.theta;
    auto g = [&](int k) { return tanh_symbol(k + t, h); };
    auto s = [&](int k) { return sech_symbol(k + t, h); };
    auto b = [&](int k) { return profile.beta.coeff(k); };
    const int K = profile.beta_support();
    // The l-sums are finite: beta_{n -/+ l} vanishes outside |n -/+ l| <= K.
    const int L = std::abs(n) + K + 1;

    Complex app = 0, amm = 0, apm = 0;
    Complex s1 = 0, s2 = 0;
    for (int k = -K; k <= K; ++k) s1 += std::norm(b(k)) * g(k + n);
    for (int l = -L; l <= L; ++l) {
        if (l == n || l == -n) continue;
        s2 += s(l) * s(l) * std::norm(b(n - l)) / (g(n) - g(l));
    }
    app = -s(n) * s(n) * (s1 - s2);

    s1 = s2 = 0;
    for (int k = -K; k <= K; ++k) s1 += std::norm(b(k)) * g(k - n);
    for (int l = -L; l <= L; ++l) {
        if (l == n || l == -n) continue;
        s2 += s(l) * s(l) * std::norm(b(n + l)) / (g(-n) - g(l));
    }
    amm = -s(-n) * s(-n) * (s1 - s2);

    s1 = s2 = 0;
    for (int k = -(std::abs(n) + K); k <= std::abs(n) + K; ++k)
        s1 += g(-k) * b(n + k) * b(n - k);
    for (int l = -L; l <= L; ++l) {
        if (l == n || l == -n) continue;
        s2 += b(n - l) * b(l + n) * s(l) * s(l) *
              (1.0 / (g(n) - g(l)) + 1.0 / (g(-n) - g(l)));
    }
    apm = -s(-n) * s(n) * s1 + 0.5 * s(n) * s(-n) * s2;

    return {app, amm, apm};
}

double analytic_gap_formulas(GapPreset preset, double h, double eps) {
    if (h <= 0.0) throw ConfigError("mean depth h must be positive");
    const double sech_h2 = 1.0 / std::cosh(h / 2.0);
    const double sech_h = 1.0 / std::cosh(h);
    switch (preset) {
        case GapPreset::CosxGap1:
            return 0.25 * sech_h2 * sech_h2 * eps;
        case GapPreset::CosxGap2:
            return (1.0 / 12.0) * sech_h * sech_h * std::tanh(2.0 * h) *
                   eps * eps * eps * eps;
        case GapPreset::CosxCenterShift: {
            // Pair (0, 1) collides at theta = -1/2 <-> (0,-1) at +1/2.
            const double g0 = tanh_symbol(0.5, h);
            const double g1 = tanh_symbol(1.5, h);
            const double s0 = sech_symbol(0.5, h);
            return -eps * eps * s0 * s0 * (g0 * g0 - 9.0 / 4.0) /
                   (4.0 * (g0 - g1));
        }
        case GapPreset::Cos13Gap2: {
            const double th = std::tanh(h), t2h = std::tanh(2.0 * h);
            return eps * eps * sech_h * sech_h *
                   std::abs(4.0 - 2.0 * th * t2h) / std::abs(th - 2.0 * t2h);
        }
    }
    throw ConfigError("unknown gap preset");
}

GapFromA gap_from_A(const Eigen::Matrix2cd& A) {
    if (hermiticity_error(A) > 1e-10 * std::max(A.cwiseAbs().maxCoeff(), 1.0))
        throw InvariantViolation("effective 2x2 block is not Hermitian");
    const double a = A(0, 0).real(), d = A(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(A(0, 1)));
    return {mean - rad, mean + rad, 2.0 * rad};
}

ScalingFit fit_gap_scaling(const std::vector<double>& eps,
                           const std::vector<double>& widths,
                           double closed_threshold) {
    if (eps.size() != widths.size() || eps.size() < 3)
        throw ConfigError("scaling fit needs at least 3 (eps, width) pairs");
    ScalingFit fit;
    for (double w : widths)
        if (w <= closed_threshold) fit.closed = true;
    if (fit.closed) return fit;

    const int n = static_cast<int>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        if (eps[i] <= 0.0) throw ConfigError("eps values must be positive");
        const double x = std::log(eps[i]), y = std::log(widths[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / det;
    const double logc = (sy - fit.exponent * sx) / n;
    fit.coefficient = std::exp(logc);
    double rss = 0;
    for (int i = 0; i < n; ++i) {
        const double r = std::log(widths[i]) - fit.exponent * std::log(eps[i]) - logc;
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

namespace {

bool reachable(const std::set<int>& support, int target, int steps, int max_k) {
    if (target == 0) return true;
    if (steps == 0) return false;
    if (std::abs(target) > steps * max_k) return false;
    for (int k : support)
        if (reachable(support, target - k, steps - 1, max_k)) return true;
    return false;
}

} // namespace

bool gap_opening_predicate(const std::set<int>& beta_support, int gap_index,
                           int max_order) {
    if (gap_index < 1) throw ConfigError("gap index must be >= 1");
    if (max_order < 1) throw ConfigError("max_order must be >= 1");
    if (beta_support.empty()) return false;
    int max_k = 0;
    for (int k : beta_support) max_k = std::max(max_k, std::abs(k));
    if (max_k == 0) return false;
    for (int q = 1; q <= max_order; ++q)
        if (reachable(beta_support, gap_index, q, max_k)) return true;
    return false;
}

std::pair<int, int> colliding_pair(double theta_star, double h, int max_mode) {
    if (max_mode < 1) throw ConfigError("max_mode must be >= 1");
    BlochParameter th(theta_star);
    double best = std::numeric_limits<double>::infinity();
    double best_level = std::numeric_limits<double>::infinity();
    std::pair<int, int> pair{0, 0};
    for (int j = -max_mode; j <= max_mode; ++j)
        for (int jp = j + 1; jp <= max_mode; ++jp) {
            const double ga = tanh_symbol(j + th.theta, h);
            const double gb = tanh_symbol(jp + th.theta, h);
            const double d = std::abs(ga - gb);
            const double level = std::min(ga, gb);
            // exact double points tie across many pairs; take the lowest bands
            const bool closer = d < best - 1e-12 * (1.0 + best);
            const bool tied = std::abs(d - best) <= 1e-12 * (1.0 + best);
            if (closer || (tied && level < best_level)) {
                best = d;
                best_level = level;
                pair = {j, jp};
            }
        }
    return pair;
}

} // namespace wwbloch
