#pragma once

#include <cstdint>
#include <vector>

#include "polcor/core.hpp"

namespace polcor {

/// Birefringent waveplate acting on the polarization Bloch sphere.
struct Waveplate {
    double retardance;  // phase delay delta, radians, in [0, 2 pi)
    double axis_angle;  // physical fast-axis angle theta, radians, in [0, pi)

    /// Throws std::domain_error outside the stated ranges.
    Waveplate(double retardance, double axis_angle);
};

/// Retardance arccos(1/sqrt(3)) of the partner plate in the two-plate
/// depolarizer; together with a half-wave plate it makes the time-averaged
/// second moment of the output isotropic.
[[nodiscard]] double depolarizer_partner_retardance();

/// Rotation realized by a waveplate: right-handed by the retardance about
/// the linear-polarization axis (sin 2 theta, 0, cos 2 theta).  The physical
/// fast-axis angle doubles on the Bloch sphere.
[[nodiscard]] Rotation3 waveplate_rotation(const Waveplate& wp);

/// Two waveplates spinning in opposite directions at a common angular
/// velocity, acting on a fixed linear input polarization.  Both plate axes
/// start parallel at the shared angle initial_alignment; plate1 is upstream
/// (applied first) and advances as +omega t, plate2 retreats as -omega t.
struct DepolarizerConfig {
    Waveplate plate1;
    Waveplate plate2;
    double angular_velocity;        // rad/s, > 0
    BlochVector input_polarization; // unit and linear (zero circular component)
    double initial_alignment;       // common plate axis angle at t = 0

    /// Validates: positive angular velocity; unit, linear (|y| <= 1e-12)
    /// input; both plate axis angles equal to initial_alignment.  Throws
    /// std::domain_error on violation.
    DepolarizerConfig(Waveplate plate1, Waveplate plate2, double angular_velocity,
                      BlochVector input_polarization, double initial_alignment = 0.0);

    /// Rotation period of the composite: pi / angular_velocity (a waveplate
    /// is unchanged by a half-turn of its axis).
    [[nodiscard]] double period() const;

    /// The accepted configuration: retardances pi and arccos(1/sqrt(3)),
    /// axes initially parallel at angle 0, linear input at Bloch angle
    /// input_angle from +z in the xz plane (default 0, horizontal).  The
    /// half-wave plate is upstream by default; both orders pass the isotropy
    /// test.
    static DepolarizerConfig nominal(double angular_velocity, double input_angle = 0.0,
                                     bool half_wave_first = true);
};

/// Composite rotation of the spinning pair at time t >= 0 (throws
/// std::domain_error for negative t).  Periodic with period().
[[nodiscard]] Rotation3 depolarizer_at(const DepolarizerConfig& config, double t);

struct TrajectoryMoments {
    BlochVector mean;    // <s>
    Mat3 second_moment;  // <s s^T>
};

/// Time-averaged first and second moments of the output Bloch vector scaled
/// to the given intensity, sampled uniformly over exactly one period
/// (endpoint excluded, so trigonometric averages are exact).  For the
/// anticorrelated pair, <s_b> = -<s_a> and <s_a s_b^T> = -<s_a s_a^T>
/// follow directly.  Throws std::domain_error for n_samples < 1.
[[nodiscard]] TrajectoryMoments trajectory_moments(const DepolarizerConfig& config,
                                                   double intensity,
                                                   std::int64_t n_samples);

/// The closed curve drawn by the unit output polarization over one period:
/// n_samples points at times j * period / (n_samples - 1), endpoint
/// included so the first and last points coincide.  Throws
/// std::domain_error for n_samples < 2.
[[nodiscard]] std::vector<BlochVector> trajectory_path(const DepolarizerConfig& config,
                                                       std::int64_t n_samples);

}  // namespace polcor
