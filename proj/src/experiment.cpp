#include "polcor/experiment.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polcor {

double ExperimentConfig::default_angular_velocity() {
    return 2.0 * std::numbers::pi * 10.0 / 60.0;
}

void ExperimentConfig::validate() const {
    if (!(rep_rate > 0.0) || !(duration_per_setting > 0.0) || intensity_s < 0.0 ||
        rotations_per_point < 1 || pulse_subsample < 1) {
        throw std::domain_error("ExperimentConfig: rates, durations and counts must be positive");
    }
}

BlochVector great_circle_point(GreatCircle circle, double phi) {
    switch (circle) {
        case GreatCircle::xz:
            return {std::sin(phi), 0.0, std::cos(phi)};
        case GreatCircle::yz:
            return {0.0, std::sin(phi), std::cos(phi)};
        case GreatCircle::xy:
            return {std::cos(phi), std::sin(phi), 0.0};
    }
    throw std::logic_error("great_circle_point: unknown circle");
}

namespace {

// angle of u on the circle, assuming u lies on it
double circle_angle(GreatCircle circle, const BlochVector& u) {
    switch (circle) {
        case GreatCircle::xz:
            return std::atan2(u.x, u.z);
        case GreatCircle::yz:
            return std::atan2(u.y, u.z);
        case GreatCircle::xy:
            return std::atan2(u.y, u.x);
    }
    throw std::logic_error("circle_angle: unknown circle");
}

double wrap_two_pi(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(phi, two_pi);
    if (wrapped < 0.0) {
        wrapped += two_pi;
    }
    if (wrapped >= two_pi) {
        wrapped = 0.0;
    }
    return wrapped;
}

}  // namespace

void SweepSpec::validate() const {
    if (!is_unit(beam_a_setting)) {
        throw std::domain_error("SweepSpec: beam a setting must be a unit vector");
    }
    const BlochVector on_circle =
        great_circle_point(circle, circle_angle(circle, beam_a_setting));
    if (norm(on_circle - beam_a_setting) > 1e-12) {
        throw std::domain_error("SweepSpec: the circle must contain the beam a setting");
    }
    if (!(step_deg > 0.0) || step_deg > 90.0) {
        throw std::domain_error("SweepSpec: step must divide the circle into >= 4 points");
    }
}

double SweepSpec::anti_aligned_angle() const {
    return wrap_two_pi(circle_angle(circle, -beam_a_setting));
}

SinusoidFit fit_sinusoid(std::span<const double> angles, std::span<const double> values) {
    if (angles.size() != values.size()) {
        throw std::domain_error("fit_sinusoid: angle and value lists must match");
    }
    const std::size_t n = angles.size();
    if (n < 4) {
        throw std::domain_error("fit_sinusoid: need at least four points");
    }
    double lo = angles[0];
    double hi = angles[0];
    for (double phi : angles) {
        lo = std::min(lo, phi);
        hi = std::max(hi, phi);
    }
    if (hi - lo < std::numbers::pi) {
        throw std::domain_error("fit_sinusoid: angles must span at least half a period");
    }

    // normal equations for the basis {1, cos, sin}
    std::array<double, 9> m{};
    std::array<double, 3> rhs{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 3> row{1.0, std::cos(angles[i]), std::sin(angles[i])};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += row[r] * values[i];
            for (int c = 0; c < 3; ++c) {
                m[3 * r + c] += row[r] * row[c];
            }
        }
    }

    // Cramer solve; the determinant vanishes only for degenerate angle sets
    const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                       m[1] * (m[3] * m[8] - m[5] * m[6]) +
                       m[2] * (m[3] * m[7] - m[4] * m[6]);
    const double scale = (m[0] + m[4] + m[8]) / 3.0;
    if (std::abs(det) <= 1e-12 * scale * scale * scale) {
        throw std::runtime_error("fit_sinusoid: degenerate design matrix");
    }
    auto solve_col = [&](int col) {
        std::array<double, 9> t = m;
        t[col] = rhs[0];
        t[col + 3] = rhs[1];
        t[col + 6] = rhs[2];
        return (t[0] * (t[4] * t[8] - t[5] * t[7]) -
                t[1] * (t[3] * t[8] - t[5] * t[6]) +
                t[2] * (t[3] * t[7] - t[4] * t[6])) / det;
    };

    SinusoidFit fit;
    fit.a0 = solve_col(0);
    fit.a1 = solve_col(1);
    fit.a2 = solve_col(2);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double model = fit.a0 + fit.a1 * std::cos(angles[i]) + fit.a2 * std::sin(angles[i]);
        const double r = values[i] - model;
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

namespace {

// number of analyzer angles covering the full circle once
int sweep_point_count(double step_deg) {
    return static_cast<int>(std::floor(360.0 / step_deg + 0.5));
}

struct FitErrors {
    double visibility = 0.0;
    double visibility_error = 0.0;
};

// Propagates per-point count variances var_i through the unweighted
// least-squares normal equations, then the delta method through
// V = sqrt(a1^2 + a2^2) / a0.
FitErrors visibility_with_error(const SinusoidFit& fit, std::span<const double> angles,
                                std::span<const double> variances) {
    FitErrors out;
    if (fit.a0 <= 0.0) {
        return out;
    }
    const std::size_t n = angles.size();
    std::array<double, 9> m{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 3> row{1.0, std::cos(angles[i]), std::sin(angles[i])};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                m[3 * r + c] += row[r] * row[c];
            }
        }
    }
    const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                       m[1] * (m[3] * m[8] - m[5] * m[6]) +
                       m[2] * (m[3] * m[7] - m[4] * m[6]);
    if (det == 0.0) {
        return out;
    }
    // inverse of the symmetric normal matrix
    std::array<double, 9> inv;
    inv[0] = (m[4] * m[8] - m[5] * m[7]) / det;
    inv[1] = (m[2] * m[7] - m[1] * m[8]) / det;
    inv[2] = (m[1] * m[5] - m[2] * m[4]) / det;
    inv[3] = inv[1];
    inv[4] = (m[0] * m[8] - m[2] * m[6]) / det;
    inv[5] = (m[2] * m[3] - m[0] * m[5]) / det;
    inv[6] = inv[2];
    inv[7] = inv[5];
    inv[8] = (m[1] * m[3] - m[0] * m[4]) / det;

    // Cov(coef) = inv * X^T diag(var) X * inv
    std::array<double, 9> mid{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 3> row{1.0, std::cos(angles[i]), std::sin(angles[i])};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                mid[3 * r + c] += variances[i] * row[r] * row[c];
            }
        }
    }
    std::array<double, 9> cov{};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) {
                for (int l = 0; l < 3; ++l) {
                    acc += inv[3 * r + k] * mid[3 * k + l] * inv[3 * l + c];
                }
            }
            cov[3 * r + c] = acc;
        }
    }

    const double amp = std::hypot(fit.a1, fit.a2);
    out.visibility = amp / fit.a0;
    std::array<double, 3> grad;
    if (amp > 0.0) {
        grad = {-amp / (fit.a0 * fit.a0), fit.a1 / (amp * fit.a0), fit.a2 / (amp * fit.a0)};
    } else {
        grad = {0.0, 1.0 / fit.a0, 1.0 / fit.a0};
    }
    double var_v = 0.0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            var_v += grad[r] * cov[3 * r + c] * grad[c];
        }
    }
    out.visibility_error = std::sqrt(std::max(0.0, var_v));
    return out;
}

// band-limited periodic integrand: uniform samples converge exponentially
constexpr int kPeriodSamples = 4096;

}  // namespace

SweepResult run_sweep_expectation(const ExperimentConfig& cfg, const SweepSpec& sweep) {
    cfg.validate();
    sweep.validate();

    const double s = cfg.intensity_s;
    const double eff = cfg.detector.efficiency;
    const double period = cfg.depolarizer.period();
    const double pulses = cfg.rep_rate * cfg.duration_per_setting;
    const int n_points = sweep_point_count(sweep.step_deg);

    // one trajectory pass serves every analyzer angle
    std::vector<BlochVector> beam_a(kPeriodSamples);
    for (int j = 0; j < kPeriodSamples; ++j) {
        const double t = period * static_cast<double>(j) / kPeriodSamples;
        beam_a[j] = (eff * s) * depolarizer_at(cfg.depolarizer, t)
                                    .apply(cfg.depolarizer.input_polarization);
    }
    const double na = eff * s;

    SweepResult result;
    result.count_scale = 1.0;
    std::vector<double> variances(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double phi = k * sweep.step_deg * std::numbers::pi / 180.0;
        const BlochVector u_b = great_circle_point(sweep.circle, phi);
        double p_co = 0.0, p_a = 0.0, p_b = 0.0;
        for (const BlochVector& va : beam_a) {
            const double ia = 0.5 * (na + dot(sweep.beam_a_setting, va));
            const double ib = 0.5 * (na - dot(u_b, va));  // s_b = -s_a
            const double ca = -std::expm1(-ia);
            const double cb = -std::expm1(-ib);
            p_co += ca * cb;
            p_a += ca;
            p_b += cb;
        }
        p_co /= kPeriodSamples;
        p_a /= kPeriodSamples;
        p_b /= kPeriodSamples;

        result.angles.push_back(phi);
        result.coincidences.push_back(p_co * pulses);
        result.singles_a.push_back(p_a * pulses);
        result.singles_b.push_back(p_b * pulses);
        variances[static_cast<std::size_t>(k)] = p_co * pulses;  // Poisson prediction
    }

    result.fit = fit_sinusoid(result.angles, result.coincidences);
    const FitErrors fe = visibility_with_error(result.fit, result.angles, variances);
    result.visibility = fe.visibility;
    result.visibility_error = fe.visibility_error;
    return result;
}

SweepResult run_sweep_stochastic(const ExperimentConfig& cfg, const SweepSpec& sweep,
                                 RandomStream& rng) {
    cfg.validate();
    sweep.validate();

    const double s = cfg.intensity_s;
    const double eff = cfg.detector.efficiency;
    const double pulses_total = cfg.rep_rate * cfg.duration_per_setting;
    const std::int64_t k_sub = cfg.pulse_subsample;
    const std::int64_t n_sim = static_cast<std::int64_t>(pulses_total) / k_sub;
    if (n_sim < 1) {
        throw std::domain_error("run_sweep_stochastic: subsampling leaves no pulses");
    }
    const double dt = static_cast<double>(k_sub) / cfg.rep_rate;
    const double period = cfg.depolarizer.period();
    const int n_points = sweep_point_count(sweep.step_deg);
    const double scale = static_cast<double>(k_sub);

    SweepResult result;
    result.count_scale = scale;
    std::vector<double> variances(static_cast<std::size_t>(n_points));
    const RandomStream base(rng.next_u64());
    for (int k = 0; k < n_points; ++k) {
        const double phi = k * sweep.step_deg * std::numbers::pi / 180.0;
        const BlochVector u_b = great_circle_point(sweep.circle, phi);
        RandomStream point_stream = base.fork(static_cast<std::uint64_t>(k));

        std::int64_t n_co = 0, n_a = 0, n_b = 0;
        for (std::int64_t i = 0; i < n_sim; ++i) {
            // the plates restart their schedule at each analyzer angle
            const double t = std::fmod(static_cast<double>(i) * dt, period);
            const BlochVector va =
                (eff * s) * depolarizer_at(cfg.depolarizer, t)
                                .apply(cfg.depolarizer.input_polarization);
            const double ia = 0.5 * (eff * s + dot(sweep.beam_a_setting, va));
            const double ib = 0.5 * (eff * s - dot(u_b, va));
            const bool click_a = point_stream.uniform() < -std::expm1(-ia);
            const bool click_b = point_stream.uniform() < -std::expm1(-ib);
            n_a += click_a;
            n_b += click_b;
            n_co += (click_a && click_b);
        }

        result.angles.push_back(phi);
        result.coincidences.push_back(scale * static_cast<double>(n_co));
        result.singles_a.push_back(scale * static_cast<double>(n_a));
        result.singles_b.push_back(scale * static_cast<double>(n_b));
        // Poisson-scale variance of the scaled count: scale * scaled value,
        // floored at one raw count
        variances[static_cast<std::size_t>(k)] =
            scale * std::max(result.coincidences.back(), scale);
    }

    result.fit = fit_sinusoid(result.angles, result.coincidences);
    const FitErrors fe = visibility_with_error(result.fit, result.angles, variances);
    result.visibility = fe.visibility;
    result.visibility_error = fe.visibility_error;
    return result;
}

std::vector<SweepSpec> standard_sweeps(double step_deg) {
    return {
        SweepSpec{{0.0, 0.0, 1.0}, GreatCircle::xz, step_deg},
        SweepSpec{{0.0, 0.0, -1.0}, GreatCircle::xz, step_deg},
        SweepSpec{{0.0, 1.0, 0.0}, GreatCircle::yz, step_deg},
        SweepSpec{{0.0, -1.0, 0.0}, GreatCircle::yz, step_deg},
        SweepSpec{{1.0, 0.0, 0.0}, GreatCircle::xy, step_deg},
        SweepSpec{{-1.0, 0.0, 0.0}, GreatCircle::xy, step_deg},
    };
}

std::vector<SweepResult> full_experiment(const ExperimentConfig& cfg, SweepMode mode,
                                         RandomStream& rng) {
    std::vector<SweepResult> results;
    for (const SweepSpec& sweep : standard_sweeps()) {
        if (mode == SweepMode::expectation) {
            results.push_back(run_sweep_expectation(cfg, sweep));
        } else {
            results.push_back(run_sweep_stochastic(cfg, sweep, rng));
        }
    }
    return results;
}

}  // namespace polcor
