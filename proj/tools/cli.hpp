#pragma once

// Command-line front end. run_cli() holds all logic so tests can drive it
// in-process; main.cpp only forwards argv.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include "displacemon/displacemon.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <optional>
#include <string>
#include <vector>

namespace displacemon::cli {

enum ExitCode { ok = 0, config_error = 1, numerical_failure = 2 };

struct OutputOptions {
    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    std::string svg_path;
};

inline void add_output_options(CLI::App* sub, OutputOptions& o)
{
    sub->add_option("--config", o.config_path, "device configuration (JSON); built-in devices if omitted");
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out_path, "output file (default: standard output)");
    sub->add_option("--svg", o.svg_path, "also write an SVG plot to this path");
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text))
        throw InvalidArgument("output", "cannot write " + path);
}

inline void emit(const OutputOptions& o, std::ostream& out, const std::string& text)
{
    if (o.out_path.empty())
        out << text;
    else
        write_file(o.out_path, text);
}

inline std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline LoadedConfig read_config(const OutputOptions& o)
{
    return o.config_path.empty() ? builtin_config() : load_config(o.config_path);
}

inline const DeviceSpec& select_device(const LoadedConfig& cfg, const std::string& name)
{
    if (name.empty())
        return cfg.devices.front();
    for (const auto& d : cfg.devices)
        if (d.name == name)
            return d;
    throw InvalidArgument("--device", "no device named '" + name + "' in the configuration");
}

inline void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
        throw NumericalError(std::string("non-finite ") + what);
}

// ---------------------------------------------------------------------------

struct DeviceTableArgs {
    OutputOptions out;
    std::string device;
};

inline void run_device_table(const DeviceTableArgs& a, std::ostream& os)
{
    const auto cfg = read_config(a.out);
    std::vector<Device> devices;
    for (const auto& spec : cfg.devices)
        if (a.device.empty() || spec.name == a.device)
            devices.push_back(build_device(spec));
    if (devices.empty())
        select_device(cfg, a.device);

    std::vector<std::string> cols{"parameter", "symbol", "unit"};
    std::vector<std::vector<ReportRow>> tables;
    for (const auto& d : devices) {
        cols.push_back(d.spec.name);
        tables.push_back(device_table(d));
    }
    report::Table t(cols);
    for (std::size_t r = 0; r < tables.front().size(); ++r) {
        const auto& row = tables.front()[r];
        std::vector<report::Cell> cells{row.parameter, row.symbol, row.display_unit};
        for (const auto& tab : tables) {
            require_finite(tab[r].display_value, "table value");
            cells.emplace_back(tab[r].display_value);
        }
        t.add(std::move(cells));
    }

    if (a.out.format == "json") {
        nlohmann::ordered_json params;
        params["device"] = a.device.empty() ? "all" : a.device;
        nlohmann::ordered_json doc;
        doc["meta"] = report::make_meta("device-table", cfg.hash, params);
        doc["rows"] = t.to_json();
        emit(a.out, os, dump_json(doc));
    } else {
        emit(a.out, os, t.to_csv());
    }

    if (!a.out.svg_path.empty()) {
        std::vector<report::svg::Series> series;
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
        for (std::size_t i = 0; i < devices.size(); ++i) {
            report::svg::Series s{devices[i].spec.name, {}, {}, colors[i % 4], true};
            int idx = 0;
            for (const auto& row : tables[i])
                if (row.symbol == "t_DP") {
                    s.x.push_back(++idx);
                    s.y.push_back(row.value);
                }
            series.push_back(std::move(s));
        }
        write_file(a.out.svg_path,
                   report::svg::line_plot("DP lifetime: 1 nuclear, 2 beam_zpa, 3 atom_zpa",
                                          {"sigma choice", false}, {"t_DP (s)", true}, series));
    }
}

// ---------------------------------------------------------------------------

struct DpReportArgs {
    OutputOptions out;
    std::string device;
};

inline void run_dp_report(const DpReportArgs& a, std::ostream& os)
{
    const auto cfg = read_config(a.out);
    report::Table t({"device", "quantity", "value", "unit"});
    std::vector<report::svg::Series> series;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (const auto& spec : cfg.devices) {
        if (!a.device.empty() && spec.name != a.device)
            continue;
        const auto dev = build_device(spec);
        const auto body = dev.body();
        report::svg::Series s{spec.name, {}, {}, colors[series.size() % 4], true};
        t.add({spec.name, std::string("N_n"), nucleon_count(body.mass), std::string("1")});
        int idx = 0;
        for (SigmaChoice c : all_sigma_choices) {
            DpConfig dp = spec.dp;
            dp.sigma_choice = c;
            const std::string tag(to_string(c));
            const double E = dp_self_energy(body, dp);
            const auto th = dp_max_occupation(body, spec.Q, dp);
            const double sxx = required_sxx(body.mass, th.T_eff_max, spec.Q, body.Omega);
            for (double v : {E, th.n_bar_max, th.T_eff_max, sxx})
                require_finite(v, "DP quantity");
            t.add({spec.name, "E_G_" + tag, E / constants::eV, std::string("eV")});
            t.add({spec.name, "t_DP_" + tag, dp_lifetime(E), std::string("s")});
            t.add({spec.name, "N_bar_max_" + tag, th.n_bar_max, std::string("1")});
            t.add({spec.name, "T_eff_max_" + tag, th.T_eff_max, std::string("K")});
            t.add({spec.name, "physical_" + tag, static_cast<long long>(th.physical),
                   std::string("bool")});
            t.add({spec.name, "required_sqrt_Sxx_" + tag, std::sqrt(sxx), std::string("m/sqrt(Hz)")});
            s.x.push_back(++idx);
            s.y.push_back(th.n_bar_max);
        }
        series.push_back(std::move(s));
    }
    if (t.rows().empty())
        select_device(cfg, a.device);

    if (a.out.format == "json") {
        nlohmann::ordered_json params;
        params["device"] = a.device.empty() ? "all" : a.device;
        nlohmann::ordered_json doc;
        doc["meta"] = report::make_meta("dp-report", cfg.hash, params);
        doc["rows"] = t.to_json();
        emit(a.out, os, dump_json(doc));
    } else {
        emit(a.out, os, t.to_csv());
    }
    if (!a.out.svg_path.empty())
        write_file(a.out.svg_path,
                   report::svg::line_plot("DP threshold occupation: 1 nuclear, 2 beam_zpa, 3 atom_zpa",
                                          {"sigma choice", false}, {"N_bar_max", true}, series));
}

// ---------------------------------------------------------------------------

struct ProtocolArgs {
    std::string device;
    std::optional<double> lambda_csl;
    std::optional<double> r_csl;
    std::optional<double> n_bar;
    std::optional<double> n_bar_init;
    std::optional<int> k_max;
};

inline void add_protocol_options(CLI::App* sub, ProtocolArgs& p)
{
    sub->add_option("--device", p.device, "device name (default: first in the config)");
    sub->add_option("--lambda-csl", p.lambda_csl, "CSL collapse rate (Hz)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--r-csl", p.r_csl, "CSL localisation length (m)")->check(CLI::PositiveNumber);
    sub->add_option("--n-bar", p.n_bar, "bath occupation")->check(CLI::NonNegativeNumber);
    sub->add_option("--n-bar-init", p.n_bar_init, "initial occupation of the beam")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--k-max", p.k_max, "largest number of half periods")
        ->check(CLI::PositiveNumber);
}

struct ResolvedProtocol {
    Device device;
    CslConfig csl;
    double n_bar;
    double n_bar_init;
    int k_max;
};

inline ResolvedProtocol resolve(const LoadedConfig& cfg, const ProtocolArgs& p)
{
    const auto& spec = select_device(cfg, p.device);
    auto dev = build_device(spec, true);
    ResolvedProtocol r{dev, spec.csl, dev.environment.N_bar, spec.n_bar_init, spec.k_max};
    if (p.lambda_csl)
        r.csl.lambda_csl = *p.lambda_csl;
    if (p.r_csl)
        r.csl.r_csl = *p.r_csl;
    if (p.n_bar)
        r.n_bar = *p.n_bar;
    if (p.n_bar_init)
        r.n_bar_init = *p.n_bar_init;
    if (p.k_max)
        r.k_max = *p.k_max;
    return r;
}

inline nlohmann::ordered_json protocol_json(const ResolvedProtocol& r)
{
    nlohmann::ordered_json j;
    j["device"] = r.device.spec.name;
    j["alpha_mag"] = r.device.grating.alpha_mag;
    j["lambda_csl_hz"] = r.csl.lambda_csl;
    j["r_csl_m"] = r.csl.r_csl;
    j["n_bar"] = r.n_bar;
    j["n_bar_init"] = r.n_bar_init;
    j["k_max"] = r.k_max;
    return j;
}

struct CurveArgs {
    OutputOptions out;
    ProtocolArgs protocol;
};

inline void run_csl_curve(const CurveArgs& a, std::ostream& os)
{
    const auto cfg = read_config(a.out);
    const auto r = resolve(cfg, a.protocol);
    const auto curve = decay_curve(r.device, r.csl, r.n_bar, r.n_bar_init, r.k_max);

    report::Table t({"k", "t_s", "p_std", "p_csl", "delta"});
    for (const auto& row : curve.rows) {
        for (double v : {row.p_std, row.p_csl, row.delta})
            require_finite(v, "probability");
        t.add({static_cast<long long>(row.k), row.t_s, row.p_std, row.p_csl, row.delta});
    }
    if (a.out.format == "json") {
        auto params = protocol_json(r);
        params["k_star"] = curve.k_star;
        params["delta_max"] = curve.delta_max;
        nlohmann::ordered_json doc;
        doc["meta"] = report::make_meta("csl-curve", cfg.hash, params);
        doc["rows"] = t.to_json();
        emit(a.out, os, dump_json(doc));
    } else {
        emit(a.out, os, t.to_csv());
    }
    if (!a.out.svg_path.empty()) {
        report::svg::Series s_std{"standard", {}, {}, "#1f77b4"};
        report::svg::Series s_csl{"CSL", {}, {}, "#d62728"};
        for (const auto& row : curve.rows) {
            s_std.x.push_back(row.k);
            s_std.y.push_back(row.p_std);
            s_csl.x.push_back(row.k);
            s_csl.y.push_back(row.p_csl);
        }
        write_file(a.out.svg_path,
                   report::svg::line_plot(r.device.spec.name + ": P(+) after k half periods",
                                          {"k", false}, {"probability", false}, {s_std, s_csl},
                                          {double(curve.k_star)}));
    }
}

// ---------------------------------------------------------------------------

struct MapArgs {
    OutputOptions out;
    ProtocolArgs protocol;
    double lambda_min = 1e-14;
    double lambda_max = 1e-6;
    double nbar_min = 1e2;
    double nbar_max = 1e12;
    int grid_points = 60;
    unsigned threads = 0;
};

inline void run_delta_map(const MapArgs& a, std::ostream& os)
{
    const auto cfg = read_config(a.out);
    const auto r = resolve(cfg, a.protocol);
    const auto lg = log_grid(a.lambda_min, a.lambda_max, a.grid_points);
    const auto ng = log_grid(a.nbar_min, a.nbar_max, a.grid_points);
    const auto map = delta_max_map(r.device, lg, ng, r.csl.r_csl, r.n_bar_init, r.k_max, a.threads);

    report::Table t({"lambda_csl_hz", "n_bar", "t_eff_k", "delta_max", "k_star", "excluded"});
    for (std::size_t i = 0; i < ng.size(); ++i)
        for (std::size_t j = 0; j < lg.size(); ++j) {
            const auto c = map.index(i, j);
            require_finite(map.delta_max[c], "delta_max");
            t.add({lg[j], ng[i], map.t_eff_grid[i], map.delta_max[c],
                   static_cast<long long>(map.k_star[c]), static_cast<long long>(map.excluded[c])});
        }

    if (a.out.format == "json") {
        auto params = protocol_json(r);
        params["grid_points"] = a.grid_points;
        nlohmann::ordered_json m;
        m["lambda_csl_hz"] = lg;
        m["n_bar"] = ng;
        m["t_eff_k"] = map.t_eff_grid;
        auto rows = [&](auto pick) {
            auto out = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < ng.size(); ++i) {
                auto row = nlohmann::ordered_json::array();
                for (std::size_t j = 0; j < lg.size(); ++j)
                    row.push_back(pick(map.index(i, j)));
                out.push_back(std::move(row));
            }
            return out;
        };
        m["delta_max"] = rows([&](std::size_t c) { return map.delta_max[c]; });
        m["k_star"] = rows([&](std::size_t c) { return map.k_star[c]; });
        m["excluded"] = rows([&](std::size_t c) { return bool(map.excluded[c]); });
        nlohmann::ordered_json doc;
        doc["meta"] = report::make_meta("delta-map", cfg.hash, params);
        doc["matrix"] = std::move(m);
        emit(a.out, os, dump_json(doc));
    } else {
        emit(a.out, os, t.to_csv());
    }
    if (!a.out.svg_path.empty())
        write_file(a.out.svg_path,
                   report::svg::heat_map(r.device.spec.name + ": maximum percentage difference",
                                         {"lambda_CSL (Hz)", true}, {"N_bar", true}, lg, ng,
                                         map.delta_max, map.excluded, {1e-10, 1e-8, 1e-6}));
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    OutputOptions out;
    ProtocolArgs protocol;
    std::vector<int> ks{1, 5, 25};
    long long n_samples = 100'000;
    unsigned long long seed = 20240607;
    double dt_fraction = 1e-3;
    std::string increments = "two-point";
    unsigned threads = 0;
};

inline void run_oracle_check(const OracleArgs& a, std::ostream& os)
{
    const auto cfg = read_config(a.out);
    const auto r = resolve(cfg, a.protocol);
    const auto& dev = r.device;
    const double D_th_si = thermal_diffusion(
        dev.mode.mass, dev.environment.gamma, temperature_from_occupation(r.n_bar, dev.mode.Omega));
    const double D_si = D_th_si + csl_diffusion(dev.body(), r.csl);
    const double D = dimensionless_diffusion(D_si, dev.mode.X_ZP);
    detail::require(r.n_bar >= r.n_bar_init, "--n-bar", "bath occupation must be at least n_bar_init");

    OracleConfig oc;
    oc.n_samples = a.n_samples;
    oc.seed = a.seed;
    oc.dt_fraction = a.dt_fraction;
    oc.increments = a.increments == "gaussian" ? Increment::Gaussian : Increment::TwoPoint;
    oc.threads = a.threads;
    for (int k : a.ks)
        detail::require(k >= 0, "--k", "values must be non-negative");

    ProtocolParams p = dev.protocol();
    p.n_bar = r.n_bar_init;
    const auto mc = oracle_probability_mc(p, a.ks, D_si, dev.mode.X_ZP, oc);

    report::Table t({"k", "p_closed_form", "p_cf_oracle", "p_mc", "mc_stderr", "z_score"});
    report::svg::Series closed{"closed form", {}, {}, "#1f77b4"};
    report::svg::Series mcs{"Monte Carlo", {}, {}, "#d62728", true};
    for (std::size_t i = 0; i < a.ks.size(); ++i) {
        const auto pk = p.with_k(a.ks[i]);
        const double pc = probability_full(pk, D);
        const double cf = oracle_probability_cf(pk, D, oc.quadrature_tol).p_hat;
        const double z = mc[i].std_err > 0 ? (mc[i].p_hat - pc) / mc[i].std_err : 0.0;
        for (double v : {pc, cf, mc[i].p_hat, mc[i].std_err})
            require_finite(v, "oracle estimate");
        t.add({static_cast<long long>(a.ks[i]), pc, cf, mc[i].p_hat, mc[i].std_err, z});
        closed.x.push_back(a.ks[i]);
        closed.y.push_back(pc);
        mcs.x.push_back(a.ks[i]);
        mcs.y.push_back(mc[i].p_hat);
    }

    if (a.out.format == "json") {
        auto params = protocol_json(r);
        params["n_samples"] = a.n_samples;
        params["seed"] = a.seed;
        params["dt_fraction"] = a.dt_fraction;
        params["increments"] = a.increments;
        nlohmann::ordered_json doc;
        doc["meta"] = report::make_meta("oracle-check", cfg.hash, params);
        doc["rows"] = t.to_json();
        emit(a.out, os, dump_json(doc));
    } else {
        emit(a.out, os, t.to_csv());
    }
    if (!a.out.svg_path.empty())
        write_file(a.out.svg_path,
                   report::svg::line_plot(dev.spec.name + ": closed form vs Monte Carlo",
                                          {"k", false}, {"probability", false}, {closed, mcs}));
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Displacemon decoherence and collapse-model predictions", "displacemon"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for every subcommand");

    DeviceTableArgs table_args;
    auto* table = app.add_subcommand("device-table", "derived device parameters");
    add_output_options(table, table_args.out);
    table->add_option("--device", table_args.device, "only this device");

    DpReportArgs dp_args;
    auto* dp = app.add_subcommand("dp-report", "Diosi-Penrose energies, lifetimes and thresholds");
    add_output_options(dp, dp_args.out);
    dp->add_option("--device", dp_args.device, "only this device");

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("csl-curve", "P(k) with and without CSL diffusion");
    add_output_options(curve, curve_args.out);
    add_protocol_options(curve, curve_args.protocol);

    MapArgs map_args;
    auto* map = app.add_subcommand("delta-map", "maximum percentage difference over (lambda_CSL, N_bar)");
    add_output_options(map, map_args.out);
    add_protocol_options(map, map_args.protocol);
    map->add_option("--lambda-min", map_args.lambda_min)->check(CLI::PositiveNumber);
    map->add_option("--lambda-max", map_args.lambda_max)->check(CLI::PositiveNumber);
    map->add_option("--nbar-min", map_args.nbar_min)->check(CLI::PositiveNumber);
    map->add_option("--nbar-max", map_args.nbar_max)->check(CLI::PositiveNumber);
    map->add_option("--grid-points", map_args.grid_points)->check(CLI::Range(1, 2000));
    map->add_option("--threads", map_args.threads, "worker threads (0: all cores)");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle-check", "closed form against both reference computations");
    add_output_options(oracle, oracle_args.out);
    add_protocol_options(oracle, oracle_args.protocol);
    oracle->add_option("--k", oracle_args.ks, "comma-separated half-period counts")->delimiter(',');
    oracle->add_option("--n-samples", oracle_args.n_samples)->check(CLI::Range(10'000LL, 1'000'000'000LL));
    oracle->add_option("--seed", oracle_args.seed);
    oracle->add_option("--dt-fraction", oracle_args.dt_fraction, "time step per period")
        ->check(CLI::Range(1e-7, 1e-3));
    oracle->add_option("--increments", oracle_args.increments)
        ->check(CLI::IsMember({"two-point", "gaussian"}));
    oracle->add_option("--threads", oracle_args.threads, "worker threads (0: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return config_error;
    }

    try {
        if (*table)
            run_device_table(table_args, out);
        else if (*dp)
            run_dp_report(dp_args, out);
        else if (*curve)
            run_csl_curve(curve_args, out);
        else if (*map)
            run_delta_map(map_args, out);
        else if (*oracle)
            run_oracle_check(oracle_args, out);
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    }
    return ok;
}

} // namespace displacemon::cli
