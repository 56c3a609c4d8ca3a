#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polcor/core.hpp"
#include "polcor/optics.hpp"
#include "polcor/rng.hpp"

namespace polcor {

/// Parameters of the virtual coincidence experiment: a pulsed source whose
/// two anticorrelated beams pass through the collective depolarizer, one
/// polarization analyzer and one on/off detector per beam.
struct ExperimentConfig {
    double rep_rate = 8e7;              // pulses per second
    double duration_per_setting = 60.0; // seconds of data per analyzer angle
    double intensity_s = 2.5e-3;        // |s_a| = |s_b| per pulse
    DetectorModel detector{1.0};
    DepolarizerConfig depolarizer = DepolarizerConfig::nominal(default_angular_velocity());
    std::int64_t rotations_per_point = 10; // full plate turns per analyzer angle
    std::int64_t pulse_subsample = 4800;   // simulate every k-th pulse, scale counts by k

    /// Plate angular velocity completing rotations_per_point full turns in
    /// one dwell: 2 pi * 10 / 60 s by default.
    static double default_angular_velocity();

    /// Throws std::domain_error unless rates, durations and counts are
    /// positive and the intensity is nonnegative (zero intensity is the
    /// valid dark-source limit: no clicks anywhere).
    void validate() const;
};

enum class GreatCircle { xz, yz, xy };

/// Point on a great circle of the Bloch sphere at angle phi:
///   xz: (sin phi, 0, cos phi)   phi = 0 at +z
///   yz: (0, sin phi, cos phi)   phi = 0 at +z
///   xy: (cos phi, sin phi, 0)   phi = 0 at +x
[[nodiscard]] BlochVector great_circle_point(GreatCircle circle, double phi);

/// One sweep: beam a's analyzer fixed to one of the six axis directions,
/// beam b's analyzer stepped around the great circle containing both
/// +-beam_a_setting.  Angles advance in Bloch-sphere degrees (twice the
/// physical polarizer angle).
struct SweepSpec {
    BlochVector beam_a_setting; // one of +-x, +-y, +-z
    GreatCircle circle;
    double step_deg = 20.0;

    /// Throws std::domain_error if beam_a_setting is not a unit vector lying
    /// on the chosen circle, or the step does not divide the full circle
    /// into at least four points.
    void validate() const;

    /// Circle angle at which u_b = -beam_a_setting, in [0, 2 pi).
    [[nodiscard]] double anti_aligned_angle() const;
};

/// Least-squares fit of y(phi) = a0 + a1 cos(phi) + a2 sin(phi).
struct SinusoidFit {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double rms_residual = 0.0;
};

/// Linear least squares against the basis {1, cos, sin}.  Requires at least
/// four points spanning at least half a period; throws std::domain_error on
/// too few points or mismatched lengths, std::runtime_error on a degenerate
/// design matrix.
[[nodiscard]] SinusoidFit fit_sinusoid(std::span<const double> angles,
                                       std::span<const double> values);

struct SweepResult {
    std::vector<double> angles;        // great-circle angle, radians
    std::vector<double> coincidences;  // counts (expected, or scaled samples)
    std::vector<double> singles_a;
    std::vector<double> singles_b;
    SinusoidFit fit;                   // fit of the coincidence counts
    double visibility = 0.0;           // sqrt(a1^2 + a2^2) / a0
    double visibility_error = 0.0;     // Poisson statistics through the fit
    double count_scale = 1.0;          // raw-count multiplier (pulse_subsample)
};

/// Deterministic mode: per analyzer angle, the exact per-pulse coincidence
/// and singles probabilities are averaged over one depolarizer period
/// (uniform samples, machine-precision for this band-limited integrand) and
/// multiplied by the full pulse count.  visibility_error is the Poisson
/// prediction for those expected counts.
[[nodiscard]] SweepResult run_sweep_expectation(const ExperimentConfig& cfg,
                                                const SweepSpec& sweep);

/// Sampled mode: every pulse_subsample-th pulse of the dwell is simulated
/// along the actual depolarizer schedule; both detectors draw independent
/// Bernoulli clicks, and counts are scaled back by pulse_subsample.  Each
/// sweep point owns a child stream forked off rng, so results are
/// deterministic per seed and independent of evaluation order.
[[nodiscard]] SweepResult run_sweep_stochastic(const ExperimentConfig& cfg,
                                               const SweepSpec& sweep,
                                               RandomStream& rng);

enum class SweepMode { expectation, stochastic };

/// The six standard sweeps: +-z against the xz circle, +-y against yz,
/// +-x against xy.
[[nodiscard]] std::vector<SweepSpec> standard_sweeps(double step_deg = 20.0);

/// Runs all six standard sweeps in the given mode.  rng is consumed only in
/// stochastic mode.
[[nodiscard]] std::vector<SweepResult> full_experiment(const ExperimentConfig& cfg,
                                                       SweepMode mode,
                                                       RandomStream& rng);

}  // namespace polcor
