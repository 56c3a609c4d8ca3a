#include "polcor/figures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "polcor/quantum.hpp"
#include "polcor/semiclassical.hpp"

namespace polcor {

namespace {

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

Table figure1_table(std::span<const double> s_values, int alpha_points) {
    if (alpha_points < 2) {
        throw std::domain_error("figure1_table: need at least two angles");
    }
    for (double s : s_values) {
        if (!(s > 0.0)) {
            throw std::domain_error("figure1_table: intensities must be positive");
        }
    }
    const DetectorModel ideal{1.0};

    Table table;
    table.columns = {"alpha_rad", "p_singlet_normalized"};
    for (double s : s_values) {
        table.columns.push_back("p_s" + short_number(s));
    }

    const WernerParameter singlet = WernerParameter::singlet();
    const BlochVector u_a{0.0, 0.0, 1.0};
    for (int i = 0; i < alpha_points; ++i) {
        const double alpha = std::numbers::pi * static_cast<double>(i) / (alpha_points - 1);
        const BlochVector u_b{std::sin(alpha), 0.0, std::cos(alpha)};
        std::vector<double> row;
        row.reserve(table.columns.size());
        row.push_back(alpha);
        row.push_back(werner_coincidence(singlet, u_a, u_b));
        for (double s : s_values) {
            row.push_back(coincidence_closed_anti(s, alpha) / p_total(s, s, ideal));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table figure2_table(double s_min, double s_max, int points) {
    if (!(s_min > 0.0) || !(s_max > s_min)) {
        throw std::domain_error("figure2_table: need 0 < s_min < s_max");
    }
    if (points < 2) {
        throw std::domain_error("figure2_table: need at least two points");
    }
    Table table;
    table.columns = {"s", "visibility"};
    const double log_lo = std::log(s_min);
    const double log_hi = std::log(s_max);
    for (int i = 0; i < points; ++i) {
        const double s =
            std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / (points - 1));
        table.rows.push_back({s, visibility_symmetric(s)});
    }
    return table;
}

Table figure3_table(double lo, double hi, int points_per_axis) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw std::domain_error("figure3_table: need 0 < lo < hi");
    }
    if (points_per_axis < 2) {
        throw std::domain_error("figure3_table: need at least two points per axis");
    }
    Table table;
    table.columns = {"s_a", "s_b", "visibility_bound"};
    const int n = points_per_axis;
    for (int i = 0; i < n; ++i) {
        const double sa = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double sb = lo + (hi - lo) * static_cast<double>(j) / (n - 1);
            table.rows.push_back({sa, sb, visibility_bound_surface(sa, sb)});
        }
    }
    return table;
}

Table figure4_table(const DepolarizerConfig& cfg, int samples) {
    const std::vector<BlochVector> path = trajectory_path(cfg, samples);
    const double period = cfg.period();
    Table table;
    table.columns = {"t", "x", "y", "z"};
    for (int j = 0; j < samples; ++j) {
        const double t = period * static_cast<double>(j) / (samples - 1);
        table.rows.push_back({t, path[static_cast<std::size_t>(j)].x,
                              path[static_cast<std::size_t>(j)].y,
                              path[static_cast<std::size_t>(j)].z});
    }
    return table;
}

Table experiment_table(std::span<const SweepResult> results) {
    Table table;
    table.columns = {"sweep", "angle_deg", "coincidence", "single_a", "single_b"};
    for (std::size_t k = 0; k < results.size(); ++k) {
        const SweepResult& r = results[k];
        for (std::size_t i = 0; i < r.angles.size(); ++i) {
            table.rows.push_back({static_cast<double>(k),
                                  r.angles[i] * 180.0 / std::numbers::pi,
                                  r.coincidences[i], r.singles_a[i], r.singles_b[i]});
        }
    }
    return table;
}

std::string axis_label(const BlochVector& u) {
    const struct {
        BlochVector axis;
        const char* name;
    } axes[] = {
        {{1.0, 0.0, 0.0}, "+x"},  {{-1.0, 0.0, 0.0}, "-x"},
        {{0.0, 1.0, 0.0}, "+y"},  {{0.0, -1.0, 0.0}, "-y"},
        {{0.0, 0.0, 1.0}, "+z"},  {{0.0, 0.0, -1.0}, "-z"},
    };
    for (const auto& entry : axes) {
        if (norm(u - entry.axis) < 1e-9) {
            return entry.name;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%.3g,%.3g,%.3g)", u.x, u.y, u.z);
    return buf;
}

std::string experiment_summary_json(std::span<const SweepSpec> sweeps,
                                    std::span<const SweepResult> results) {
    if (sweeps.size() != results.size()) {
        throw std::domain_error("experiment_summary_json: sweep/result count mismatch");
    }
    const char* circle_names[] = {"xz", "yz", "xy"};
    nlohmann::json j;
    j["sweeps"] = nlohmann::json::array();
    for (std::size_t k = 0; k < results.size(); ++k) {
        const SweepSpec& spec = sweeps[k];
        const SweepResult& r = results[k];
        nlohmann::json entry;
        entry["beam_a"] = axis_label(spec.beam_a_setting);
        entry["circle"] = circle_names[static_cast<int>(spec.circle)];
        entry["step_deg"] = spec.step_deg;
        entry["fit"] = {{"a0", r.fit.a0},
                        {"a1", r.fit.a1},
                        {"a2", r.fit.a2},
                        {"rms_residual", r.fit.rms_residual}};
        entry["visibility"] = r.visibility;
        entry["visibility_error"] = r.visibility_error;
        // + 0.0 folds the negative zero that the angle wrap can produce
        entry["max_angle_deg"] = spec.anti_aligned_angle() * 180.0 / std::numbers::pi + 0.0;
        entry["count_scale"] = r.count_scale;
        j["sweeps"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

}  // namespace polcor
