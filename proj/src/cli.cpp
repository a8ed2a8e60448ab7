#include "wwbloch/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace wwbloch::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& obj, const std::string& key, double fallback,
                  bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing required key '" + key + "'");
        return fallback;
    }
    if (!obj[key].is_number())
        throw ConfigError("key '" + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError("key '" + key + "' must be an integer");
    return obj[key].get<int>();
}

FourierField parse_field(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ConfigError(where + " must be an array of [mode, re, im]");
    std::vector<std::pair<int, Complex>> pairs;
    int max_mode = 1;
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 3)
            throw ConfigError(where + " entries must be [mode, re, im] triples");
        const int j = e[0].get<int>();
        pairs.emplace_back(j, Complex(e[1].get<double>(), e[2].get<double>()));
        max_mode = std::max(max_mode, std::abs(j));
    }
    return FourierField::from_pairs(max_mode, pairs);
}

BathymetryProfile parse_profile(const json& p, std::string* preset_out) {
    check_keys(p, {"preset", "h", "eps", "c0", "beta"}, "profile");
    const double h = get_number(p, "h", 1.0);
    const double eps = get_number(p, "eps", 0.0, true);
    BathymetryProfile prof;
    if (p.contains("preset")) {
        if (p.contains("beta"))
            throw ConfigError("profile takes either 'preset' or 'beta', not both");
        if (!p["preset"].is_string())
            throw ConfigError("profile preset must be a string");
        *preset_out = p["preset"].get<std::string>();
        prof = make_preset_profile(*preset_out, eps, h);
    } else if (p.contains("beta")) {
        preset_out->clear();
        prof.h = h;
        prof.eps = eps;
        prof.beta = parse_field(p["beta"], "profile.beta");
    } else {
        throw ConfigError("profile needs a 'preset' or an explicit 'beta'");
    }
    if (p.contains("c0")) prof.c0 = get_number(p, "c0", prof.c0);
    prof.validate();
    return prof;
}

struct CsvWriter {
    std::FILE* f = nullptr;

    explicit CsvWriter(const std::string& path) {
        f = std::fopen(path.c_str(), "wb");  // binary: LF line endings everywhere
        if (!f) throw ConfigError("cannot open output file: " + path);
    }
    ~CsvWriter() {
        if (f) std::fclose(f);
    }
    void header(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i)
            std::fprintf(f, "%s%s", i ? "," : "", cols[i].c_str());
        std::fputc('\n', f);
    }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i)
            std::fprintf(f, "%s%.15e", i ? "," : "", vals[i]);
        std::fputc('\n', f);
    }
};

void write_json(const json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

json gap_to_json(const GapReport& g) {
    return json{{"index", g.index},
                {"lower_edge", g.lower_edge},
                {"upper_edge", g.upper_edge},
                {"theta_at_lower", g.theta_at_lower},
                {"theta_at_upper", g.theta_at_upper},
                {"width", g.width},
                {"center", g.center},
                {"closed", g.closed}};
}

BandStructure sweep_from_setup(const RunSetup& s, int threads) {
    return band_sweep(s.profile, default_theta_grid(s.theta_points),
                      Truncation(s.N), s.order, s.bands - 1, threads);
}

} // namespace

RunSetup parse_setup(const json& cfg) {
    if (!cfg.contains("profile")) throw ConfigError("config needs a 'profile' object");
    RunSetup s;
    s.profile = parse_profile(cfg["profile"], &s.preset);
    s.N = get_int(cfg, "N", 16);
    s.order = get_int(cfg, "order", 4);
    s.theta_points = get_int(cfg, "theta_points", 257);
    s.bands = get_int(cfg, "bands", 8);
    if (s.order < 1 || s.order > 4) throw ConfigError("order must be in 1..4");
    if (s.bands < 2) throw ConfigError("need at least 2 bands");
    Truncation check(s.N);  // range check
    (void)check;
    return s;
}

void run_band_structure(const json& cfg, const std::string& out_prefix,
                        int threads) {
    check_keys(cfg, {"profile", "N", "order", "theta_points", "bands"}, "config");
    RunSetup s = parse_setup(cfg);
    BandStructure bs = sweep_from_setup(s, threads);
    std::vector<GapReport> gaps = band_edges(bs);

    CsvWriter csv(out_prefix + "_bands.csv");
    std::vector<std::string> cols{"theta"};
    for (int b = 0; b < s.bands; ++b) cols.push_back("band" + std::to_string(b));
    csv.header(cols);
    for (size_t i = 0; i < bs.theta_grid.size(); ++i) {
        std::vector<double> vals{bs.theta_grid[i]};
        for (int b = 0; b < s.bands; ++b)
            vals.push_back(bs.bands(static_cast<Eigen::Index>(i), b));
        csv.row(vals);
    }

    json doc{{"h", s.profile.h},      {"eps", s.profile.eps}, {"N", s.N},
             {"order", s.order},      {"bands", s.bands},
             {"theta_points", s.theta_points}, {"gaps", json::array()}};
    for (const auto& g : gaps) doc["gaps"].push_back(gap_to_json(g));
    write_json(doc, out_prefix + "_gaps.json");
}

void run_gap_scan(const json& cfg, const std::string& out_prefix, int threads) {
    check_keys(cfg, {"profile", "N", "order", "theta_points", "bands"}, "config");
    RunSetup s = parse_setup(cfg);
    BandStructure bs = sweep_from_setup(s, threads);
    json doc{{"h", s.profile.h}, {"eps", s.profile.eps}, {"N", s.N},
             {"order", s.order}, {"gaps", json::array()}};
    for (const auto& g : band_edges(bs)) doc["gaps"].push_back(gap_to_json(g));
    write_json(doc, out_prefix + "_gaps.json");
}

void run_gap_scaling(const json& cfg, const std::string& out_prefix, int threads) {
    check_keys(cfg,
               {"profile", "N", "order", "theta_points", "bands", "eps_ladder",
                "gaps"},
               "config");
    RunSetup s = parse_setup(cfg);
    if (!cfg.contains("eps_ladder") || !cfg["eps_ladder"].is_array() ||
        cfg["eps_ladder"].size() < 4)
        throw ConfigError("gap-scaling needs an 'eps_ladder' of at least 4 values");
    std::vector<double> ladder;
    for (const auto& e : cfg["eps_ladder"]) {
        if (!e.is_number() || e.get<double>() <= 0.0)
            throw ConfigError("eps_ladder values must be positive numbers");
        ladder.push_back(e.get<double>());
    }
    std::vector<int> which;
    if (cfg.contains("gaps")) {
        for (const auto& e : cfg["gaps"]) which.push_back(e.get<int>());
    } else {
        for (int n = 1; n < s.bands; ++n) which.push_back(n);
    }

    std::map<int, std::vector<double>> widths;
    for (double eps : ladder) {
        BathymetryProfile prof = s.profile;
        prof.eps = eps;
        BandStructure bs =
            band_sweep(prof, default_theta_grid(s.theta_points), Truncation(s.N),
                       s.order, s.bands - 1, threads);
        for (const auto& g : band_edges(bs))
            widths[g.index].push_back(g.width);
    }

    json doc{{"h", s.profile.h}, {"order", s.order}, {"eps_ladder", ladder},
             {"fits", json::array()}};
    for (int n : which) {
        if (!widths.count(n)) throw ConfigError("requested gap index out of range");
        ScalingFit fit = fit_gap_scaling(ladder, widths[n]);
        json jf{{"gap", n},
                {"widths", widths[n]},
                {"closed", fit.closed},
                {"predicted_open",
                 gap_opening_predicate(
                     [&] {
                         std::set<int> supp;
                         for (int k = -s.profile.beta.max_mode();
                              k <= s.profile.beta.max_mode(); ++k)
                             if (s.profile.beta.coeff(k) != 0.0) supp.insert(k);
                         return supp;
                     }(),
                     n, s.order)}};
        if (!fit.closed) {
            jf["exponent"] = fit.exponent;
            jf["coefficient"] = fit.coefficient;
            jf["residual"] = fit.residual;
        }
        if (s.preset == "cosx" && n == 1)
            jf["analytic_width_at_eps"] = analytic_gap_formulas(
                GapPreset::CosxGap1, s.profile.h, ladder.back());
        if (s.preset == "cosx" && n == 2)
            jf["analytic_width_at_eps"] = analytic_gap_formulas(
                GapPreset::CosxGap2, s.profile.h, ladder.back());
        if (s.preset == "cos13" && n == 2)
            jf["analytic_width_at_eps"] = analytic_gap_formulas(
                GapPreset::Cos13Gap2, s.profile.h, ladder.back());
        doc["fits"].push_back(jf);
    }
    write_json(doc, out_prefix + "_scaling.json");
}

void run_validate_oracle(const json& cfg, const std::string& out_prefix,
                         int threads) {
    (void)threads;
    check_keys(cfg, {"profile", "N", "orders", "theta", "oracle", "seed"},
               "config");
    std::string preset;
    if (!cfg.contains("profile")) throw ConfigError("config needs a 'profile' object");
    BathymetryProfile prof = parse_profile(cfg["profile"], &preset);
    const int N = get_int(cfg, "N", 8);
    const double theta = get_number(cfg, "theta", 0.3);
    std::vector<int> orders{1, 2, 3, 4};
    if (cfg.contains("orders")) {
        orders.clear();
        for (const auto& e : cfg["orders"]) orders.push_back(e.get<int>());
    }
    OracleResolution res;
    res.richardson = true;
    if (cfg.contains("oracle")) {
        check_keys(cfg["oracle"], {"nx", "nsigma", "richardson"}, "oracle");
        res.nx = get_int(cfg["oracle"], "nx", res.nx);
        res.nsigma = get_int(cfg["oracle"], "nsigma", res.nsigma);
        if (cfg["oracle"].contains("richardson"))
            res.richardson = cfg["oracle"]["richardson"].get<bool>();
    }
    const unsigned seed = static_cast<unsigned>(get_int(cfg, "seed", 7));

    // Smooth random surface trace: unit normal coefficients damped by e^{-|j|/2}.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    FourierField psi(N);
    for (int j = -N; j <= N; ++j) {
        const double damp = std::exp(-0.5 * std::abs(j));
        psi.set_coeff(j, Complex(normal(rng), normal(rng)) * damp);
    }

    FourierField ref = apply_dno_oracle(prof, BlochParameter(theta), psi, res);
    double ref_norm = ref.l2_norm();

    json doc{{"h", prof.h},   {"eps", prof.eps}, {"theta", theta},
             {"N", N},        {"nx", res.nx},    {"nsigma", res.nsigma},
             {"richardson", res.richardson},     {"residuals", json::array()}};
    for (int order : orders) {
        Matrix G = assemble_G_theta(prof, BlochParameter(theta), Truncation(N), order);
        Vector pv(2 * N + 1), rv(2 * N + 1);
        for (int j = -N; j <= N; ++j) {
            pv[j + N] = psi.coeff(j);
            rv[j + N] = ref.coeff(j);
        }
        const double resid = (G * pv - rv).norm() / ref_norm;
        doc["residuals"].push_back(json{{"order", order}, {"relative", resid}});
    }
    write_json(doc, out_prefix + "_oracle.json");
}

void run_evolve(const json& cfg, const std::string& out_prefix, int threads) {
    (void)threads;
    check_keys(cfg,
               {"profile", "N", "order", "theta", "gravity", "t_max", "steps",
                "grid_size", "initial"},
               "config");
    std::string preset;
    if (!cfg.contains("profile")) throw ConfigError("config needs a 'profile' object");
    BathymetryProfile prof = parse_profile(cfg["profile"], &preset);
    const int N = get_int(cfg, "N", 16);
    const int order = get_int(cfg, "order", 4);
    const double theta = get_number(cfg, "theta", 0.0);
    const double gravity = get_number(cfg, "gravity", 1.0);
    const double t_max = get_number(cfg, "t_max", 0.0, true);
    const int steps = get_int(cfg, "steps", 100);
    const int grid_size = get_int(cfg, "grid_size", 64);
    if (steps < 1 || t_max <= 0.0)
        throw ConfigError("evolve needs t_max > 0 and steps >= 1");
    if (!cfg.contains("initial"))
        throw ConfigError("evolve needs an 'initial' state");
    check_keys(cfg["initial"], {"eta", "eta_dot"}, "initial");
    WaveState state{FourierField(N), FourierField(N)};
    if (cfg["initial"].contains("eta")) {
        FourierField f = parse_field(cfg["initial"]["eta"], "initial.eta");
        for (int j = -f.max_mode(); j <= f.max_mode(); ++j)
            state.eta.set_coeff(j, f.coeff(j));
    }
    if (cfg["initial"].contains("eta_dot")) {
        FourierField f = parse_field(cfg["initial"]["eta_dot"], "initial.eta_dot");
        for (int j = -f.max_mode(); j <= f.max_mode(); ++j)
            state.eta_dot.set_coeff(j, f.coeff(j));
    }

    Matrix G = assemble_G_theta(prof, BlochParameter(theta), Truncation(N), order);
    EigenSystem sys = eigen_decompose(G);

    CsvWriter csv(out_prefix + "_evolve.csv");
    std::vector<std::string> cols{"t", "energy"};
    for (int m = 0; m < grid_size; ++m) {
        cols.push_back("eta_re_" + std::to_string(m));
        cols.push_back("eta_im_" + std::to_string(m));
    }
    csv.header(cols);
    for (int k = 0; k <= steps; ++k) {
        const double t = t_max * k / steps;
        WaveState st = evolve_linearized(sys, state, gravity, t);
        std::vector<double> vals{t, wave_energy(G, st, gravity)};
        Vector samples = synthesize(st.eta, grid_size);
        for (int m = 0; m < grid_size; ++m) {
            vals.push_back(samples[m].real());
            vals.push_back(samples[m].imag());
        }
        csv.row(vals);
    }
}

void run_command(const std::string& command, const std::string& config_path,
                 const std::string& out_prefix, int threads) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (command == "band-structure")
        run_band_structure(cfg, out_prefix, threads);
    else if (command == "gap-scan")
        run_gap_scan(cfg, out_prefix, threads);
    else if (command == "gap-scaling")
        run_gap_scaling(cfg, out_prefix, threads);
    else if (command == "validate-oracle")
        run_validate_oracle(cfg, out_prefix, threads);
    else if (command == "evolve")
        run_evolve(cfg, out_prefix, threads);
    else
        throw ConfigError("unknown command: " + command);
}

} // namespace wwbloch::cli
