#pragma once

// Strict JSON device configuration. A document is {"devices": [ ... ]}; each
// device object uses SI field names and unknown keys are rejected. A
// "derived" key is tolerated and ignored, since derived values are always
// recomputed.

#include "displacemon/constants.hpp"
#include "displacemon/decoherence.hpp"
#include "displacemon/device.hpp"
#include "displacemon/error.hpp"
#include "displacemon/qubit.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace displacemon {

struct LoadedConfig {
    std::vector<DeviceSpec> devices;
    std::uint64_t hash = 0; ///< FNV-1a of the source bytes
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace detail {

class FieldReader {
public:
    FieldReader(const nlohmann::json& obj, std::string path)
        : obj_(obj)
        , path_(std::move(path))
    {
        if (!obj_.is_object())
            throw InvalidArgument(path_, "must be a JSON object");
    }

    std::string field(const std::string& key) const { return path_ + "." + key; }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return obj_.contains(key);
    }

    double number(const std::string& key)
    {
        if (!has(key))
            throw InvalidArgument(field(key), "is required");
        return as_number(key);
    }

    std::optional<double> optional_number(const std::string& key)
    {
        if (!has(key))
            return std::nullopt;
        return as_number(key);
    }

    std::string string(const std::string& key)
    {
        if (!has(key))
            throw InvalidArgument(field(key), "is required");
        const auto& v = obj_.at(key);
        if (!v.is_string())
            throw InvalidArgument(field(key), "must be a string");
        return v.get<std::string>();
    }

    const nlohmann::json& raw(const std::string& key)
    {
        seen_.insert(key);
        return obj_.at(key);
    }

    void ignore(const std::string& key) { seen_.insert(key); }

    void reject_unknown() const
    {
        for (const auto& [key, _] : obj_.items())
            if (!seen_.count(key))
                throw InvalidArgument(field(key), "unknown field");
    }

private:
    double as_number(const std::string& key) const
    {
        const auto& v = obj_.at(key);
        if (!v.is_number())
            throw InvalidArgument(field(key), "must be a number");
        return v.get<double>();
    }

    const nlohmann::json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Material parse_material(const nlohmann::json& j, const std::string& path)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "aluminium")
            return aluminium();
        throw InvalidArgument(path, "unknown material name (only \"aluminium\" is built in)");
    }
    FieldReader r(j, path);
    Material m{
        .rho0 = r.number("rho0"),
        .youngs_E = r.number("youngs_E"),
        .m_a = r.number("m_a"),
        .a_lattice = r.number("a_lattice"),
        .sigma_nuc = r.number("sigma_nuc"),
        .Omega_p = r.number("Omega_p"),
    };
    r.reject_unknown();
    return m;
}

inline DeviceSpec parse_device(const nlohmann::json& j, const std::string& path)
{
    FieldReader r(j, path);
    DeviceSpec d{};
    d.name = r.string("name");
    d.geometry = {r.number("D_m"), r.number("ell_m")};
    d.material = r.has("material") ? parse_material(r.raw("material"), r.field("material"))
                                   : aluminium();

    const auto f_q0 = r.optional_number("omega_q0_hz");
    const auto e_j0 = r.optional_number("E_J0_J");
    const auto e_c = r.optional_number("E_C_J");
    if (f_q0 && (e_j0 || e_c))
        throw InvalidArgument(r.field("omega_q0_hz"), "give either omega_q0_hz or E_J0_J/E_C_J");
    if (f_q0) {
        d.qubit.omega_q0 = two_pi * *f_q0;
    } else if (e_j0 && e_c) {
        d.qubit.omega_q0 = transmon_frequency(*e_j0, *e_c);
    } else {
        throw InvalidArgument(r.field("omega_q0_hz"),
                              "is required (or both E_J0_J and E_C_J)");
    }
    d.qubit.delta_phi_frac = r.number("delta_phi_frac");
    d.qubit.T2_star = r.number("T2_star_s");
    d.qubit.B_par = r.number("B_par_T");
    d.B_par_override = r.optional_number("B_par_override_T");

    d.Q = r.number("Q");
    d.N_bar = r.optional_number("N_bar");
    d.T_eff = r.optional_number("T_eff_K");
    if (d.N_bar.has_value() == d.T_eff.has_value())
        throw InvalidArgument(r.field("N_bar"), "exactly one of N_bar and T_eff_K must be given");

    if (auto v = r.optional_number("lambda_csl_hz"))
        d.csl.lambda_csl = *v;
    if (auto v = r.optional_number("r_csl_m"))
        d.csl.r_csl = *v;
    if (r.has("sigma_choice")) {
        const auto s = r.string("sigma_choice");
        const auto c = parse_sigma_choice(s);
        if (!c)
            throw InvalidArgument(r.field("sigma_choice"),
                                  "must be one of nuclear, beam_zpa, atom_zpa");
        d.dp.sigma_choice = *c;
    }
    if (auto v = r.optional_number("gamma_dp"))
        d.dp.gamma_dp = *v;
    if (auto v = r.optional_number("n_bar_init"))
        d.n_bar_init = *v;
    if (auto v = r.optional_number("k_max")) {
        if (*v != std::floor(*v) || *v < 1 || *v > 1e7)
            throw InvalidArgument(r.field("k_max"), "must be a positive integer");
        d.k_max = int(*v);
    }
    r.ignore("derived");
    r.reject_unknown();
    return d;
}

} // namespace detail

inline LoadedConfig parse_config(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("config", std::string("invalid JSON: ") + e.what());
    }
    detail::FieldReader top(doc, "config");
    if (!top.has("devices") || !doc.at("devices").is_array() || doc.at("devices").empty())
        throw InvalidArgument("config.devices", "must be a non-empty array");
    top.reject_unknown();

    LoadedConfig cfg;
    cfg.hash = fnv1a64(text);
    std::set<std::string> names;
    const auto& arr = doc.at("devices");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        auto dev = detail::parse_device(arr[i], "devices[" + std::to_string(i) + "]");
        if (!names.insert(dev.name).second)
            throw InvalidArgument("devices[" + std::to_string(i) + "].name", "duplicate name");
        cfg.devices.push_back(std::move(dev));
    }
    return cfg;
}

inline LoadedConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("config", "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

/// The two reference devices with their default bath and CSL settings.
/// Device B carries the reduced field used for its protocol runs.
inline LoadedConfig builtin_config()
{
    static const char* text = R"({
  "devices": [
    {
      "name": "Device A",
      "D_m": 1e-6, "ell_m": 1.9e-3, "material": "aluminium",
      "omega_q0_hz": 8e9, "delta_phi_frac": 0.62, "T2_star_s": 1e-6, "B_par_T": 4e-3,
      "Q": 1.1e6, "N_bar": 1e3,
      "lambda_csl_hz": 1e-11, "r_csl_m": 1e-7, "sigma_choice": "nuclear",
      "n_bar_init": 100, "k_max": 2000
    },
    {
      "name": "Device B",
      "D_m": 1e-5, "ell_m": 8e-2, "material": "aluminium",
      "omega_q0_hz": 8e9, "delta_phi_frac": 0.62, "T2_star_s": 1e-6, "B_par_T": 4e-3,
      "B_par_override_T": 1e-5,
      "Q": 1.1e6, "N_bar": 5e6,
      "lambda_csl_hz": 1e-11, "r_csl_m": 1e-7, "sigma_choice": "nuclear",
      "n_bar_init": 100, "k_max": 200
    }
  ]
})";
    return parse_config(text);
}

} // namespace displacemon
