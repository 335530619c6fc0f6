#include "displacemon/beam.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace displacemon;

namespace {

const BeamGeometry device_a{1e-6, 1.9e-3};
const BeamGeometry device_b{1e-5, 8e-2};

// mpmath reference values (tests/oracles/golden_values.py)
constexpr double golden_k_ell = 4.730040744862704;
constexpr double golden_prefactor = 6.4586111880472711;
constexpr double golden_beta0 = 0.83086152324868107;
constexpr double golden_atom_zpa = 7.9015979274192548e-12;

double rel(double a, double b) { return std::abs(a / b - 1.0); }

} // namespace

TEST(ModeWavenumber, RootAndResidual)
{
    const double k = solve_mode_wavenumber();
    EXPECT_NEAR(k, 4.730, 5e-4);
    EXPECT_NEAR(k, golden_k_ell, 1e-12);
    EXPECT_LT(std::abs(clamped_characteristic(k)), 1e-12);
}

TEST(ModeWavenumber, BracketSigns)
{
    EXPECT_GT(clamped_characteristic(pi), 0.0);
    EXPECT_LT(clamped_characteristic(5.0), 0.0);
}

TEST(ModeWavenumber, AnalyticDerivative)
{
    for (double x : {3.5, 4.0, 4.73, 4.9}) {
        const double h = 1e-6;
        const double fd = (clamped_characteristic(x + h) - clamped_characteristic(x - h)) / (2 * h);
        EXPECT_NEAR(clamped_characteristic_derivative(x), fd, 1e-7);
    }
}

TEST(ModeShape, ClampedEndsAndSymmetry)
{
    const auto mode = solve_fundamental_mode(device_a, aluminium());
    const double half = 0.5 * device_a.ell;
    const double peak = mode_shape(0.0, mode, device_a);
    EXPECT_GT(peak, 0.0);
    EXPECT_NEAR(mode_shape(half, mode, device_a) / peak, 0.0, 1e-14);
    EXPECT_NEAR(mode_shape(-half, mode, device_a) / peak, 0.0, 1e-14);
    for (double f : {0.05, 0.17, 0.31, 0.42, 0.49})
        EXPECT_NEAR(mode_shape(f * device_a.ell, mode, device_a),
                    mode_shape(-f * device_a.ell, mode, device_a), 1e-12 * peak);
}

TEST(ModeShape, ZeroSlopeAtClamps)
{
    const double k = solve_mode_wavenumber();
    const double h = 1e-5;
    double max_slope = 0;
    for (int i = 0; i <= 1000; ++i) {
        const double z = -0.5 + h + (1 - 2 * h) * i / 1000.0;
        const double d = (unit_mode_shape(z + h, k) - unit_mode_shape(z - h, k)) / (2 * h);
        max_slope = std::max(max_slope, std::abs(d));
    }
    // second-order one-sided differences at both ends
    const double right = (3 * unit_mode_shape(0.5, k) - 4 * unit_mode_shape(0.5 - h, k)
                          + unit_mode_shape(0.5 - 2 * h, k)) / (2 * h);
    const double left = (-3 * unit_mode_shape(-0.5, k) + 4 * unit_mode_shape(-0.5 + h, k)
                         - unit_mode_shape(-0.5 + 2 * h, k)) / (2 * h);
    EXPECT_LT(std::abs(right), 1e-8 * max_slope);
    EXPECT_LT(std::abs(left), 1e-8 * max_slope);
}

TEST(ModeShape, UnitNormInSi)
{
    for (const auto& g : {device_a, device_b}) {
        const auto mode = solve_fundamental_mode(g, aluminium());
        auto u2 = [&](double z) {
            const double u = mode_shape(z, mode, g);
            return u * u;
        };
        const double h = 0.5 * g.ell;
        EXPECT_NEAR(numerics::adaptive_simpson(u2, -h, h, 1e-12), 1.0, 1e-9);
        EXPECT_NEAR(numerics::adaptive_simpson(u2, -h, h, 1e-13), 1.0, 1e-9);
    }
}

TEST(ModeShape, RejectsPointsOutsideBeam)
{
    const auto mode = solve_fundamental_mode(device_a, aluminium());
    EXPECT_THROW(mode_shape(0.51 * device_a.ell, mode, device_a), InvalidArgument);
}

TEST(FundamentalFrequency, Prefactor)
{
    const double k = solve_mode_wavenumber();
    const double pref = k * k / std::sqrt(12.0);
    EXPECT_NEAR(pref, golden_prefactor, 1e-12);
    // The commonly quoted 6.47 is 0.2% above the exact value.
    EXPECT_NEAR(pref / 6.47, 1.0, 3e-3);
}

TEST(FundamentalFrequency, ReferenceDevices)
{
    const auto al = aluminium();
    // Device A lands 2.1% above the rounded 1400 Hz.
    EXPECT_NEAR(fundamental_frequency(device_a, al) / two_pi / 1400.0, 1.0, 0.03);
    EXPECT_NEAR(fundamental_frequency(device_a, al) / two_pi, 1428.98, 0.01);
    EXPECT_NEAR(fundamental_frequency(device_b, al) / two_pi / 8.1, 1.0, 0.02);
}

TEST(FundamentalFrequency, Scaling)
{
    const auto al = aluminium();
    const double w = fundamental_frequency(device_a, al);
    EXPECT_LT(rel(fundamental_frequency({2 * device_a.D, device_a.ell}, al), 2 * w), 1e-12);
    EXPECT_LT(rel(fundamental_frequency({device_a.D, 2 * device_a.ell}, al), w / 4), 1e-12);
}

TEST(BeamMass, ReferenceDevicesAndScaling)
{
    const auto al = aluminium();
    EXPECT_NEAR(beam_mass(device_a, al) / 5.1e-12, 1.0, 0.02);
    EXPECT_NEAR(beam_mass(device_b, al) / 2.2e-8, 1.0, 0.03);
    EXPECT_LT(rel(beam_mass({2 * device_a.D, device_a.ell}, al), 4 * beam_mass(device_a, al)),
              1e-14);
}

TEST(ZeroPointAmplitude, ReferenceDevices)
{
    const auto a = solve_fundamental_mode(device_a, aluminium());
    const auto b = solve_fundamental_mode(device_b, aluminium());
    EXPECT_NEAR(a.X_ZP / 3.4e-14, 1.0, 0.02);
    EXPECT_NEAR(b.X_ZP / 6.9e-15, 1.0, 0.02);
    for (const auto& m : {a, b})
        EXPECT_NEAR(m.X_ZP * std::sqrt(2 * m.mass * m.Omega / constants::hbar), 1.0, 1e-15);
}

TEST(ZeroPointAmplitude, ScalingAndErrors)
{
    EXPECT_LT(rel(zero_point_amplitude(4e-12, 1e4), 0.5 * zero_point_amplitude(1e-12, 1e4)), 1e-15);
    EXPECT_THROW(zero_point_amplitude(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(zero_point_amplitude(1.0, -1.0), InvalidArgument);
}

TEST(Beta0, ValueAndGeometryIndependence)
{
    const auto a = solve_fundamental_mode(device_a, aluminium());
    const auto b = solve_fundamental_mode(device_b, aluminium());
    EXPECT_NEAR(a.beta0, 0.831, 1e-3);
    EXPECT_NEAR(a.beta0, golden_beta0, 1e-10);
    EXPECT_NEAR(geometric_coupling_beta0(a, device_a), geometric_coupling_beta0(b, device_b), 1e-9);
    EXPECT_GT(a.beta0, 0.0);
    EXPECT_LT(a.beta0, 1.0);
}

TEST(Beta0, QuadratureConverged)
{
    const double k = solve_mode_wavenumber();
    EXPECT_NEAR(geometric_coupling_beta0(k, 1e-10), geometric_coupling_beta0(k, 1e-13), 1e-9);
}

TEST(Beta0, SiIntegralOfModeShape)
{
    // ∫u₀ dZ over the physical beam is β₀ √ℓ.
    const auto mode = solve_fundamental_mode(device_b, aluminium());
    const double h = 0.5 * device_b.ell;
    const double si = numerics::adaptive_simpson(
        [&](double z) { return mode_shape(z, mode, device_b); }, -h, h, 1e-13);
    EXPECT_NEAR(si / std::sqrt(device_b.ell), mode.beta0, 1e-9);
}

TEST(SingleAtomZpa, ValueAndScaling)
{
    auto al = aluminium();
    const double x = single_atom_zpa(al);
    EXPECT_NEAR(x / 8e-12, 1.0, 0.15);
    EXPECT_NEAR(x / golden_atom_zpa, 1.0, 1e-12);
    al.Omega_p *= 4;
    EXPECT_LT(rel(single_atom_zpa(al), 0.5 * x), 1e-15);
}

TEST(BeamGeometry, RejectsStubbyBeam)
{
    try {
        solve_fundamental_mode({1e-3, 1e-3}, aluminium());
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        EXPECT_EQ(e.field(), "BeamGeometry.ell");
    }
    EXPECT_THROW(solve_fundamental_mode({-1e-6, 1e-3}, aluminium()), InvalidArgument);
}
