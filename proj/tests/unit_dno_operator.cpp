#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "wwbloch/dno_operator.hpp"

using namespace wwbloch;

namespace {

FourierField smooth_random_trace(int N, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    FourierField psi(N);
    for (int j = -N; j <= N; ++j)
        psi.set_coeff(j, Complex(normal(rng), normal(rng)) *
                              std::exp(-0.5 * std::abs(j)));
    return psi;
}

Vector to_vector(const FourierField& f, Truncation t) {
    Vector v = Vector::Zero(t.dim());
    for (int j = -t.N; j <= t.N; ++j) v[t.row(j)] = f.coeff(j);
    return v;
}

} // namespace

TEST_CASE("first-order term matches its closed form") {
    BathymetryProfile p = make_preset_profile("cosx", 0.1);
    Truncation t(6);
    DnoSeries s = build_M_terms(p, BlochParameter(0.0), t, 1);
    // (M_1)_{j,l} = -s_j beta_{j-l} s_l with s_k = k sech(h k).
    const double expected = -sech_symbol(2.0, 1.0) * 0.5 * sech_symbol(1.0, 1.0);
    CHECK(s.terms[1](t.row(2), t.row(1)).real() == doctest::Approx(expected));
    CHECK(s.terms[1](t.row(2), t.row(1)).real() ==
          doctest::Approx(-0.17227).epsilon(2e-4));
    CHECK(s.terms[1](t.row(2), t.row(0)) == Complex(0.0));
}

TEST_CASE("series terms are Hermitian and band-limited") {
    BathymetryProfile p = make_preset_profile("cosx", 0.1);
    Truncation t(12);
    DnoSeries s = build_M_terms(p, BlochParameter(0.3), t, 4);
    for (int q = 1; q <= 4; ++q) {
        const double scale = s.terms[q].cwiseAbs().maxCoeff();
        CHECK(hermiticity_error(s.terms[q]) < 1e-13 * scale);
        // support: beta enters q times, so entries vanish beyond |j - l| > q
        for (int r = 0; r < t.dim(); ++r)
            for (int c = 0; c < t.dim(); ++c)
                if (std::abs(t.mode(r) - t.mode(c)) > q)
                    CHECK(std::abs(s.terms[q](r, c)) == doctest::Approx(0.0));
    }
}

TEST_CASE("interior entries are free of truncation error") {
    BathymetryProfile p = make_preset_profile("cos13", 0.05);
    Truncation small(6), big(14);
    DnoSeries a = build_M_terms(p, BlochParameter(0.2), small, 4);
    DnoSeries b = build_M_terms(p, BlochParameter(0.2), big, 4);
    const int off = big.N - small.N;
    for (int q = 1; q <= 4; ++q) {
        Matrix crop = b.terms[q].block(off, off, small.dim(), small.dim());
        CHECK((a.terms[q] - crop).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("flat bottom short-circuits to the diagonal symbol") {
    BathymetryProfile p = make_preset_profile("cosx", 0.0);
    Truncation t(5);
    Matrix G = assemble_G_theta(p, BlochParameter(0.25), t, 4);
    for (int r = 0; r < t.dim(); ++r)
        for (int c = 0; c < t.dim(); ++c) {
            if (r == c)
                CHECK(G(r, r).real() ==
                      doctest::Approx(tanh_symbol(t.mode(r) + 0.25, 1.0)));
            else
                CHECK(std::abs(G(r, c)) == doctest::Approx(0.0));
        }
}

TEST_CASE("higher-order smoothing: off-diagonals decay with the row index") {
    BathymetryProfile p = make_preset_profile("cosx", 0.1);
    Truncation t(10);
    DnoSeries s = build_M_terms(p, BlochParameter(0.0), t, 1);
    const double near = std::abs(s.terms[1](t.row(2), t.row(1)));
    const double far = std::abs(s.terms[1](t.row(9), t.row(8)));
    CHECK(far < 1e-2 * near);
}

TEST_CASE("oracle reproduces the flat-bottom symbol") {
    BathymetryProfile p = make_preset_profile("cosx", 0.0);
    FourierField psi = smooth_random_trace(4, 3);
    FourierField out =
        apply_dno_oracle(p, BlochParameter(0.3), psi, {64, 64, true});
    for (int j = -4; j <= 4; ++j) {
        const Complex expected = tanh_symbol(j + 0.3, 1.0) * psi.coeff(j);
        CHECK(std::abs(out.coeff(j) - expected) < 1e-3);
    }
}

TEST_CASE("oracle agrees with the order-4 series off the flat bottom") {
    BathymetryProfile p = make_preset_profile("cosx", 0.02);
    Truncation t(6);
    FourierField psi = smooth_random_trace(6, 11);
    Vector pv = to_vector(psi, t);
    Matrix G = assemble_G_theta(p, BlochParameter(0.3), t, 4);
    Vector series = G * pv;

    FourierField single =
        apply_dno_oracle(p, BlochParameter(0.3), psi, {64, 64, false});
    FourierField extrap =
        apply_dno_oracle(p, BlochParameter(0.3), psi, {64, 64, true});
    Vector sv = to_vector(single, t), ev = to_vector(extrap, t);
    const double base = series.norm();
    const double err_single = (sv - series).norm() / base;
    const double err_extrap = (ev - series).norm() / base;
    CHECK(err_single < 5e-2);
    CHECK(err_extrap < err_single);  // extrapolation removes the leading error
    CHECK(err_extrap < 5e-5);
}

TEST_CASE("oracle input validation") {
    BathymetryProfile p = make_preset_profile("cosx", 0.02);
    FourierField psi = smooth_random_trace(8, 1);
    CHECK_THROWS_AS(apply_dno_oracle(p, BlochParameter(0.0), psi, {12, 64, false}),
                    ConfigError);
    CHECK_THROWS_AS(build_M_terms(p, BlochParameter(0.0), Truncation(4), 5),
                    ConfigError);
}
