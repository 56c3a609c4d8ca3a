#include "polcor/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polcor {

Waveplate::Waveplate(double retardance_in, double axis_angle_in)
    : retardance(retardance_in), axis_angle(axis_angle_in) {
    if (!(retardance >= 0.0) || retardance >= 2.0 * std::numbers::pi) {
        throw std::domain_error("Waveplate: retardance must lie in [0, 2 pi)");
    }
    if (!(axis_angle >= 0.0) || axis_angle >= std::numbers::pi) {
        throw std::domain_error("Waveplate: axis angle must lie in [0, pi)");
    }
}

double depolarizer_partner_retardance() {
    return std::acos(1.0 / std::sqrt(3.0));
}

Rotation3 waveplate_rotation(const Waveplate& wp) {
    const BlochVector axis{std::sin(2.0 * wp.axis_angle), 0.0, std::cos(2.0 * wp.axis_angle)};
    return rotation_about(axis, wp.retardance);
}

namespace {

// physical plate angles live on [0, pi)
double wrap_axis_angle(double theta) {
    const double pi = std::numbers::pi;
    double wrapped = std::fmod(theta, pi);
    if (wrapped < 0.0) {
        wrapped += pi;
    }
    if (wrapped >= pi) {
        wrapped = 0.0;  // rounding at the seam
    }
    return wrapped;
}

}  // namespace

DepolarizerConfig::DepolarizerConfig(Waveplate plate1_in, Waveplate plate2_in,
                                     double angular_velocity_in,
                                     BlochVector input_polarization_in,
                                     double initial_alignment_in)
    : plate1(plate1_in),
      plate2(plate2_in),
      angular_velocity(angular_velocity_in),
      input_polarization(input_polarization_in),
      initial_alignment(initial_alignment_in) {
    if (!(angular_velocity > 0.0)) {
        throw std::domain_error("DepolarizerConfig: angular velocity must be positive");
    }
    if (!is_unit(input_polarization)) {
        throw std::domain_error("DepolarizerConfig: input polarization must be unit");
    }
    if (std::abs(input_polarization.y) > 1e-12) {
        throw std::domain_error("DepolarizerConfig: input polarization must be linear");
    }
    const double aligned = wrap_axis_angle(initial_alignment);
    if (std::abs(plate1.axis_angle - aligned) > 1e-12 ||
        std::abs(plate2.axis_angle - aligned) > 1e-12) {
        throw std::domain_error(
            "DepolarizerConfig: plate axes must start parallel at initial_alignment");
    }
}

double DepolarizerConfig::period() const {
    return std::numbers::pi / angular_velocity;
}

DepolarizerConfig DepolarizerConfig::nominal(double angular_velocity, double input_angle,
                                             bool half_wave_first) {
    const Waveplate half_wave{std::numbers::pi, 0.0};
    const Waveplate partner{depolarizer_partner_retardance(), 0.0};
    const BlochVector input{std::sin(input_angle), 0.0, std::cos(input_angle)};
    if (half_wave_first) {
        return DepolarizerConfig(half_wave, partner, angular_velocity, input);
    }
    return DepolarizerConfig(partner, half_wave, angular_velocity, input);
}

Rotation3 depolarizer_at(const DepolarizerConfig& config, double t) {
    if (t < 0.0) {
        throw std::domain_error("depolarizer_at: time must be nonnegative");
    }
    const double swept = config.angular_velocity * t;
    const Waveplate p1{config.plate1.retardance,
                       wrap_axis_angle(config.initial_alignment + swept)};
    const Waveplate p2{config.plate2.retardance,
                       wrap_axis_angle(config.initial_alignment - swept)};
    // plate1 is upstream: its rotation acts first
    return waveplate_rotation(p2) * waveplate_rotation(p1);
}

TrajectoryMoments trajectory_moments(const DepolarizerConfig& config, double intensity,
                                     std::int64_t n_samples) {
    if (n_samples < 1) {
        throw std::domain_error("trajectory_moments: need at least one sample");
    }
    const double period = config.period();
    TrajectoryMoments result;
    for (std::int64_t j = 0; j < n_samples; ++j) {
        const double t = period * static_cast<double>(j) / static_cast<double>(n_samples);
        const BlochVector v =
            intensity * depolarizer_at(config, t).apply(config.input_polarization);
        result.mean = result.mean + v;
        const double c[3] = {v.x, v.y, v.z};
        for (int r = 0; r < 3; ++r) {
            for (int col = 0; col < 3; ++col) {
                result.second_moment.at(r, col) += c[r] * c[col];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(n_samples);
    result.mean = inv * result.mean;
    for (auto& entry : result.second_moment.m) {
        entry *= inv;
    }
    return result;
}

std::vector<BlochVector> trajectory_path(const DepolarizerConfig& config,
                                         std::int64_t n_samples) {
    if (n_samples < 2) {
        throw std::domain_error("trajectory_path: need at least two samples");
    }
    const double period = config.period();
    std::vector<BlochVector> path;
    path.reserve(static_cast<std::size_t>(n_samples));
    for (std::int64_t j = 0; j < n_samples; ++j) {
        const double t = period * static_cast<double>(j) / static_cast<double>(n_samples - 1);
        path.push_back(depolarizer_at(config, t).apply(config.input_polarization));
    }
    return path;
}

}  // namespace polcor
