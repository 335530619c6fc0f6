#include "displacemon/config.hpp"
#include "displacemon/device.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace displacemon;

namespace {

Device device(int i, bool reduced_field = false)
{
    return build_device(builtin_config().devices[std::size_t(i)], reduced_field);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(BuildDevice, DerivedQuantities)
{
    const auto a = device(0);
    EXPECT_EQ(a.spec.name, "Device A");
    EXPECT_NEAR(a.mode.mass / 5.1e-12, 1.0, 0.03);
    EXPECT_NEAR(a.environment.N_bar, 1e3, 1e-9);
    EXPECT_NEAR(a.environment.gamma, a.mode.Omega / 1.1e6, 1e-15);
    EXPECT_NEAR(device(1).grating.alpha_mag / 39.0, 1.0, 0.03);
    EXPECT_NEAR(device(1, true).grating.alpha_mag, 0.0972, 1e-3);
    // the override is ignored for devices without one
    EXPECT_EQ(device(0, true).grating.alpha_mag, a.grating.alpha_mag);
}

TEST(BuildDevice, ErrorsNameTheField)
{
    auto spec = builtin_config().devices[0];
    spec.geometry.ell = spec.geometry.D;
    try {
        build_device(spec);
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        EXPECT_EQ(e.field(), "Device A.BeamGeometry.ell");
    }
    spec = builtin_config().devices[0];
    spec.T_eff = 1e-3;
    EXPECT_THROW(build_device(spec), InvalidArgument);
    spec = builtin_config().devices[0];
    spec.qubit.T2_star = -1;
    EXPECT_THROW(build_device(spec), InvalidArgument);
}

TEST(DeviceTable, RowsAndValues)
{
    const auto rows = device_table(device(1));
    ASSERT_EQ(rows.size(), 14u);
    EXPECT_EQ(rows[0].symbol, "D");
    EXPECT_EQ(rows[3].symbol, "Omega/2pi");
    EXPECT_NEAR(rows[3].display_value / 8.1, 1.0, 0.03);
    EXPECT_NEAR(rows[5].display_value / 6.2e6, 1.0, 0.03);
    EXPECT_EQ(rows[8].symbol, "E_G");
    EXPECT_NEAR(rows[8].display_value / 1.6e-10, 1.0, 0.05);
    EXPECT_EQ(rows[9].symbol, "t_DP");
    EXPECT_NEAR(rows[9].display_value / 4.2e-6, 1.0, 0.05);
    for (const auto& r : rows)
        EXPECT_TRUE(std::isfinite(r.value)) << r.parameter;
}

TEST(DecayCurve, DeviceAShape)
{
    const auto a = device(0);
    const auto c = decay_curve(a, a.spec.csl, 1e3, 100, 2000);
    ASSERT_EQ(c.rows.size(), 2001u);
    EXPECT_GE(c.rows[0].p_std, 0.74);
    EXPECT_LE(c.rows[0].p_std, 0.76);
    // one half period of the 1e3 bath already costs e^{-0.23} of the fringe
    EXPECT_NEAR(c.rows[1].p_std, 0.6984, 1e-4);
    EXPECT_NEAR(c.rows.back().p_std, 0.5, 0.005);
    EXPECT_NEAR(c.rows.back().p_csl, 0.5, 0.005);
    EXPECT_GE(c.k_star, 1);
    EXPECT_GT(c.delta_max, 0.0);
    for (std::size_t k = 1; k < c.rows.size(); ++k) {
        EXPECT_LE(c.rows[k].p_csl, c.rows[k].p_std);
        EXPECT_NEAR(c.rows[k].t_s, double(k) * pi / a.mode.Omega, 1e-15);
    }
}

TEST(DecayCurve, DeviceBReducedField)
{
    const auto b = device(1, true);
    const auto c = decay_curve(b, b.spec.csl, 5e6, 100, 200);
    EXPECT_GE(c.rows[0].p_csl, 0.74);
    EXPECT_LE(c.rows[0].p_csl, 0.76);
    EXPECT_NEAR(c.rows.back().p_csl, 0.5, 0.005);
    EXPECT_THROW(decay_curve(b, b.spec.csl, 10, 100, 200), InvalidArgument);
}

TEST(LogGrid, Endpoints)
{
    const auto g = log_grid(1e-14, 1e-6, 60);
    ASSERT_EQ(g.size(), 60u);
    EXPECT_EQ(g.front(), 1e-14);
    EXPECT_EQ(g.back(), 1e-6);
    EXPECT_NEAR(g[1] / g[0], std::pow(1e8, 1.0 / 59), 1e-12);
    EXPECT_THROW(log_grid(0.0, 1.0, 3), InvalidArgument);
    EXPECT_EQ(log_grid(2.0, 2.0, 1).size(), 1u);
}

TEST(DeltaMap, SpotCell)
{
    const auto b = device(1, true);
    const auto m = delta_max_map(b, {1e-10}, {2e7}, 1e-7, 100, 200, 1);
    EXPECT_GE(m.delta_max[0], 0.05);
    EXPECT_FALSE(m.excluded[0]);
}

TEST(DeltaMap, ExclusionAndThreads)
{
    const auto b = device(1, true);
    const auto lg = log_grid(1e-14, 1e-6, 12);
    const auto ng = log_grid(1e2, 1e12, 10);
    const auto m1 = delta_max_map(b, lg, ng, 1e-7, 100, 200, 1);
    const auto m3 = delta_max_map(b, lg, ng, 1e-7, 100, 200, 3);
    EXPECT_EQ(m1.delta_max, m3.delta_max);
    EXPECT_EQ(m1.k_star, m3.k_star);
    EXPECT_EQ(m1.excluded, m3.excluded);
    for (std::size_t i = 0; i < ng.size(); ++i) {
        for (std::size_t j = 1; j < lg.size(); ++j) {
            // larger λ never re-enters the excluded region, and Δ_max grows
            EXPECT_LE(m1.excluded[m1.index(i, j)], m1.excluded[m1.index(i, j - 1)]);
            EXPECT_GE(m1.delta_max[m1.index(i, j)], m1.delta_max[m1.index(i, j - 1)]);
        }
        for (std::size_t j = 0; j < lg.size() && i > 0; ++j)
            EXPECT_GE(m1.excluded[m1.index(i, j)], m1.excluded[m1.index(i - 1, j)]);
    }
    EXPECT_THROW(delta_max_map(b, {1e-10, 1e-11}, {2e7}, 1e-7, 100, 200), InvalidArgument);
}

TEST(Config, ShippedFileMatchesBuiltin)
{
    const auto file = load_config(std::string(DISPLACEMON_SOURCE_DIR) + "/configs/devices.json");
    const auto builtin = builtin_config();
    ASSERT_EQ(file.devices.size(), builtin.devices.size());
    for (std::size_t i = 0; i < file.devices.size(); ++i) {
        const auto a = device_table(build_device(file.devices[i]));
        const auto b = device_table(build_device(builtin.devices[i]));
        for (std::size_t r = 0; r < a.size(); ++r)
            EXPECT_EQ(a[r].value, b[r].value);
        EXPECT_EQ(file.devices[i].k_max, builtin.devices[i].k_max);
        EXPECT_EQ(file.devices[i].B_par_override, builtin.devices[i].B_par_override);
    }
    EXPECT_EQ(file.hash, fnv1a64(read_file(std::string(DISPLACEMON_SOURCE_DIR)
                                           + "/configs/devices.json")));
}

TEST(Config, StrictParsing)
{
    const std::string base = R"({"devices":[{"name":"X","D_m":1e-6,"ell_m":2e-3,
        "omega_q0_hz":8e9,"delta_phi_frac":0.62,"T2_star_s":1e-6,"B_par_T":4e-3,"Q":1e6,)";
    EXPECT_NO_THROW(parse_config(base + R"("N_bar":100}]})"));
    EXPECT_NO_THROW(parse_config(base + R"("T_eff_K":0.01,"derived":{"x":1}}]})"));

    auto field_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const InvalidArgument& e) {
            return e.field();
        }
        return std::string("none");
    };
    EXPECT_EQ(field_of(base + R"("N_bar":100,"colour":"red"}]})"), "devices[0].colour");
    EXPECT_EQ(field_of(base + R"("N_bar":100,"T_eff_K":1}]})"), "devices[0].N_bar");
    EXPECT_EQ(field_of(base + R"("N_bar":"many"}]})"), "devices[0].N_bar");
    EXPECT_EQ(field_of(base + R"("N_bar":1,"sigma_choice":"huge"}]})"), "devices[0].sigma_choice");
    EXPECT_EQ(field_of(base + R"("N_bar":1,"k_max":2.5}]})"), "devices[0].k_max");
    EXPECT_EQ(field_of(R"({"devices":[]})"), "config.devices");
    EXPECT_EQ(field_of("{not json"), "config");
    EXPECT_EQ(field_of(R"({"devices":[1], "extra":1})"), "config.extra");
}

TEST(Config, TransmonEnergiesAlternative)
{
    const double ej = 20e9 * two_pi * constants::hbar;
    const double ec = 0.25e9 * two_pi * constants::hbar;
    nlohmann::json j = nlohmann::json::parse(R"({"devices":[{"name":"X","D_m":1e-6,
        "ell_m":2e-3,"delta_phi_frac":0.62,"T2_star_s":1e-6,"B_par_T":4e-3,"Q":1e6,"N_bar":1}]})");
    j["devices"][0]["E_J0_J"] = ej;
    j["devices"][0]["E_C_J"] = ec;
    const auto cfg = parse_config(j.dump());
    EXPECT_NEAR(cfg.devices[0].qubit.omega_q0, transmon_frequency(ej, ec), 1e-3);
}
