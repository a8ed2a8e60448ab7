#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wwbloch/bloch_spectrum.hpp"
#include "wwbloch/perturbation.hpp"

namespace py = pybind11;
using namespace wwbloch;

namespace {

BathymetryProfile profile_from_args(const std::string& preset, double eps,
                                    double h) {
    return make_preset_profile(preset, eps, h);
}

BathymetryProfile profile_from_pairs(
    double h, double eps,
    const std::vector<std::tuple<int, std::complex<double>>>& beta, double c0) {
    BathymetryProfile p;
    p.h = h;
    p.eps = eps;
    p.c0 = c0;
    std::vector<std::pair<int, Complex>> pairs;
    int max_mode = 1;
    for (const auto& [j, c] : beta) {
        pairs.emplace_back(j, c);
        max_mode = std::max(max_mode, std::abs(j));
    }
    p.beta = FourierField::from_pairs(max_mode, pairs);
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bloch band structure of the water-wave Dirichlet-Neumann operator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<InvariantViolation>(m, "InvariantViolation",
                                               PyExc_RuntimeError);

    py::class_<BathymetryProfile>(m, "BathymetryProfile")
        .def_readonly("h", &BathymetryProfile::h)
        .def_readonly("eps", &BathymetryProfile::eps)
        .def("beta_support", &BathymetryProfile::beta_support);

    m.def("preset_profile", &profile_from_args, py::arg("preset"), py::arg("eps"),
          py::arg("h") = 1.0,
          "Named bottom profile: 'cosx', 'cos2x' or 'cos13'.");
    m.def("profile", &profile_from_pairs, py::arg("h"), py::arg("eps"),
          py::arg("beta"), py::arg("c0") = 1e-3,
          "Profile from explicit (mode, coefficient) pairs.");

    m.def(
        "assemble_G_theta",
        [](const BathymetryProfile& p, double theta, int N, int order) {
            return assemble_G_theta(p, BlochParameter(theta), Truncation(N), order);
        },
        py::arg("profile"), py::arg("theta"), py::arg("N"), py::arg("order") = 4,
        "Truncated Taylor approximation of the Bloch-conjugated operator.");

    m.def(
        "apply_dno_oracle",
        [](const BathymetryProfile& p, double theta,
           const Eigen::VectorXcd& psi_modes, int nx, int nsigma, bool richardson) {
            const int N = (static_cast<int>(psi_modes.size()) - 1) / 2;
            FourierField psi(N);
            for (int j = -N; j <= N; ++j) psi.set_coeff(j, psi_modes[j + N]);
            FourierField out = apply_dno_oracle(p, BlochParameter(theta), psi,
                                                {nx, nsigma, richardson});
            Eigen::VectorXcd v(2 * N + 1);
            for (int j = -N; j <= N; ++j) v[j + N] = out.coeff(j);
            return v;
        },
        py::arg("profile"), py::arg("theta"), py::arg("psi_modes"),
        py::arg("nx") = 128, py::arg("nsigma") = 128, py::arg("richardson") = true,
        "Finite-difference reference application of G_theta to the mode vector.");

    m.def(
        "band_sweep",
        [](const BathymetryProfile& p, int N, int order, int n_max,
           int theta_points, int threads) {
            auto grid = default_theta_grid(theta_points);
            BandStructure bs =
                band_sweep(p, grid, Truncation(N), order, n_max, threads);
            return py::make_tuple(grid, bs.bands);
        },
        py::arg("profile"), py::arg("N"), py::arg("order") = 4,
        py::arg("n_max") = 7, py::arg("theta_points") = 257, py::arg("threads") = 1,
        "Returns (theta_grid, bands) with bands[i, n] = Lambda_n(theta_i).");

    m.def(
        "band_gaps",
        [](const BathymetryProfile& p, int N, int order, int n_max,
           int theta_points, int threads) {
            BandStructure bs = band_sweep(p, default_theta_grid(theta_points),
                                          Truncation(N), order, n_max, threads);
            py::list out;
            for (const auto& g : band_edges(bs)) {
                py::dict d;
                d["index"] = g.index;
                d["lower_edge"] = g.lower_edge;
                d["upper_edge"] = g.upper_edge;
                d["width"] = g.width;
                d["center"] = g.center;
                d["closed"] = g.closed;
                out.append(d);
            }
            return out;
        },
        py::arg("profile"), py::arg("N"), py::arg("order") = 4,
        py::arg("n_max") = 7, py::arg("theta_points") = 257, py::arg("threads") = 1,
        "Spectral gaps between consecutive bands over the Brillouin cell.");

    m.def(
        "flat_bottom_reference",
        [](double theta, int band, double h) {
            return flat_bottom_reference(BlochParameter(theta), band, h);
        },
        py::arg("theta"), py::arg("band"), py::arg("h") = 1.0);

    m.def(
        "analytic_gap_width",
        [](const std::string& preset, double h, double eps) {
            if (preset == "cosx_gap1")
                return analytic_gap_formulas(GapPreset::CosxGap1, h, eps);
            if (preset == "cosx_gap2")
                return analytic_gap_formulas(GapPreset::CosxGap2, h, eps);
            if (preset == "cosx_center_shift")
                return analytic_gap_formulas(GapPreset::CosxCenterShift, h, eps);
            if (preset == "cos13_gap2")
                return analytic_gap_formulas(GapPreset::Cos13Gap2, h, eps);
            throw ConfigError("unknown formula preset: " + preset);
        },
        py::arg("preset"), py::arg("h"), py::arg("eps"));

    m.def(
        "fit_gap_scaling",
        [](const std::vector<double>& eps, const std::vector<double>& widths) {
            ScalingFit f = fit_gap_scaling(eps, widths);
            py::dict d;
            d["exponent"] = f.exponent;
            d["coefficient"] = f.coefficient;
            d["residual"] = f.residual;
            d["closed"] = f.closed;
            return d;
        },
        py::arg("eps"), py::arg("widths"));

    m.def(
        "gap_opening_predicate",
        [](const std::vector<int>& support, int gap_index, int max_order) {
            return gap_opening_predicate(
                std::set<int>(support.begin(), support.end()), gap_index, max_order);
        },
        py::arg("beta_support"), py::arg("gap_index"), py::arg("max_order") = 4);

    m.def("colliding_pair", &colliding_pair, py::arg("theta_star"), py::arg("h"),
          py::arg("max_mode"));
}
