#include "displacemon/qubit.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace displacemon;

namespace {

const BeamGeometry device_a{1e-6, 1.9e-3};
const BeamGeometry device_b{1e-5, 8e-2};

QubitConfig reference_qubit(double B = 4e-3) { return {two_pi * 8e9, 0.62, 1e-6, B}; }

} // namespace

TEST(Transmon, OperatingPointGivesSixGigahertz)
{
    EXPECT_NEAR(qubit_frequency(two_pi * 8e9, 0.62) / two_pi / 6e9, 1.0, 2e-3);
    EXPECT_DOUBLE_EQ(qubit_frequency(1.0, 0.0), 1.0);
}

TEST(Transmon, SquidAndFrequency)
{
    EXPECT_DOUBLE_EQ(josephson_energy_squid(2.0, 0.0), 2.0);
    EXPECT_NEAR(josephson_energy_squid(2.0, 0.5), 0.0, 1e-15);
    const double ej = 20e9 * two_pi * constants::hbar;
    const double ec = 0.25e9 * two_pi * constants::hbar;
    EXPECT_NEAR(transmon_frequency(ej, ec) / two_pi / 6.3245553e9, 1.0, 1e-7);
    EXPECT_THROW(transmon_frequency(0.0, ec), InvalidArgument);
}

TEST(Transmon, CouplingPrefactor)
{
    EXPECT_NEAR(effective_coupling_prefactor(0.62), 1.15, 0.01);
    EXPECT_DOUBLE_EQ(effective_coupling_prefactor(0.0), 0.0);
    EXPECT_THROW(effective_coupling_prefactor(1.0), InvalidArgument);
}

TEST(Coupling, ReferenceDevices)
{
    const auto a = solve_fundamental_mode(device_a, aluminium());
    const auto b = solve_fundamental_mode(device_b, aluminium());
    const auto ga = grating_alpha(reference_qubit(), a, device_a);
    const auto gb = grating_alpha(reference_qubit(), b, device_b);
    EXPECT_NEAR(ga.lambda_on / two_pi / 7.2e5, 1.0, 0.03);
    EXPECT_NEAR(gb.lambda_on / two_pi / 6.2e6, 1.0, 0.03);
    EXPECT_NEAR(ga.alpha_mag / 4.5, 1.0, 0.03);
    EXPECT_NEAR(gb.alpha_mag / 39.0, 1.0, 0.03);
    EXPECT_NEAR(ga.delta_x_max / 6.1e-13, 1.0, 0.03);
    EXPECT_NEAR(gb.delta_x_max / 1.1e-12, 1.0, 0.03);
    EXPECT_TRUE(ga.stationary_ok);
    EXPECT_TRUE(gb.stationary_ok);
}

TEST(Coupling, ReducedFieldForDeviceB)
{
    const auto b = solve_fundamental_mode(device_b, aluminium());
    EXPECT_NEAR(grating_alpha(reference_qubit(1e-5), b, device_b).alpha_mag, 0.1, 0.005);
}

TEST(Coupling, LinearInFieldAndSignInvariant)
{
    const auto a = solve_fundamental_mode(device_a, aluminium());
    const double l1 = coupling_rate(reference_qubit(1e-3), a, device_a);
    const double l2 = coupling_rate(reference_qubit(2e-3), a, device_a);
    EXPECT_NEAR(l2 / l1, 2.0, 1e-14);
    auto q = reference_qubit();
    const auto g = grating_alpha(q, a, device_a);
    q.delta_phi_frac = -0.62;
    const auto flipped = grating_alpha(q, a, device_a);
    EXPECT_NEAR(flipped.alpha_mag / g.alpha_mag, 1.0, 1e-14);
    EXPECT_NEAR(flipped.delta_x_max / g.delta_x_max, 1.0, 1e-14);
    EXPECT_EQ(coupling_rate(reference_qubit(0.0), a, device_a), 0.0);
}

TEST(Coupling, SlowBeamBreaksStationarity)
{
    const auto a = solve_fundamental_mode(device_a, aluminium());
    auto q = reference_qubit();
    q.T2_star = 1e-4;
    EXPECT_FALSE(grating_alpha(q, a, device_a).stationary_ok);
}

TEST(Coupling, RejectsBadQubit)
{
    const auto a = solve_fundamental_mode(device_a, aluminium());
    auto q = reference_qubit();
    q.T2_star = 0;
    try {
        coupling_rate(q, a, device_a);
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        EXPECT_EQ(e.field(), "QubitConfig.T2_star");
    }
    q = reference_qubit();
    q.delta_phi_frac = 1.2;
    EXPECT_THROW(coupling_rate(q, a, device_a), InvalidArgument);
}

TEST(Precession, PlusProbability)
{
    EXPECT_DOUBLE_EQ(plus_probability(0.0), 1.0);
    EXPECT_NEAR(plus_probability(0.5 * pi), 0.0, 1e-30);
    EXPECT_NEAR(plus_probability(precession_angle(2.0, 0.25, 0.5 * pi)), 0.5, 1e-15);
}
