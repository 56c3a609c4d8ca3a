#pragma once

#include <span>
#include <string>
#include <vector>

#include "polcor/csv.hpp"
#include "polcor/experiment.hpp"
#include "polcor/optics.hpp"

namespace polcor {

/// Coincidence probability against the angle between analyzer settings.
/// Columns: alpha_rad, p_singlet_normalized, then one p_s<value> column per
/// entry of s_values holding coincidence_closed_anti(s, alpha) divided by
/// the analyzer-free pair probability p_total(s, s).  The singlet column is
/// the bare quantum probability (its own normalization is 1).  alpha runs
/// over [0, pi] with alpha_points samples.
[[nodiscard]] Table figure1_table(std::span<const double> s_values, int alpha_points);

/// Coincidence visibility of two equal-intensity anticorrelated beams as a
/// function of the intensity parameter.  Columns: s, visibility; s runs over
/// a logarithmic grid [s_min, s_max] with points samples.
[[nodiscard]] Table figure2_table(double s_min, double s_max, int points);

/// Upper bound on the visibility over a linear grid of beam intensities.
/// Columns: s_a, s_b, visibility_bound; s_a is the outer (slow) index.
[[nodiscard]] Table figure3_table(double lo, double hi, int points_per_axis);

/// Path of the unit Bloch vector behind the depolarizer over one period.
/// Columns: t, x, y, z (endpoint included, so the closure x(0) = x(T) is
/// visible in the data).
[[nodiscard]] Table figure4_table(const DepolarizerConfig& cfg, int samples);

/// Sweep data of a full six-sweep run, one row per analyzer angle.
/// Columns: sweep, angle_deg, coincidence, single_a, single_b; sweep is the
/// row's index into the sweep list (0-5 in standard order).
[[nodiscard]] Table experiment_table(std::span<const SweepResult> results);

/// Human-oriented axis name of a unit Bloch vector ("+z", "-x", ...); used
/// to label sweeps in the experiment summary.
[[nodiscard]] std::string axis_label(const BlochVector& u);

/// JSON fit summary of a full run: per sweep the analyzed axis, circle,
/// fit coefficients, RMS residual, visibility with its statistical error,
/// and the angle of the expected coincidence maximum.
[[nodiscard]] std::string experiment_summary_json(std::span<const SweepSpec> sweeps,
                                                  std::span<const SweepResult> results);

}  // namespace polcor
