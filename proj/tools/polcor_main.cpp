#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polcor/csv.hpp"
#include "polcor/experiment.hpp"
#include "polcor/figures.hpp"
#include "polcor/optics.hpp"
#include "polcor/rng.hpp"
#include "polcor/validate.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct OutputOptions {
    std::string path;            // empty = stdout
    std::string format = "csv";  // csv | json
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--out", out.path, "Output file (default: stdout)");
    cmd->add_option("--format", out.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

// Emits a table per --out/--format.  May throw std::runtime_error on I/O.
void emit_table(const polcor::Table& table, const OutputOptions& out) {
    const std::string text =
        out.format == "json" ? polcor::to_json(table) : polcor::to_csv(table);
    if (out.path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        polcor::write_text_file(out.path, text);
    }
}

struct DepolarizerFlags {
    double angular_velocity = polcor::ExperimentConfig::default_angular_velocity();
    double input_angle_rad = 0.0;
    bool partner_first = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--omega", angular_velocity,
                        "Plate angular velocity, rad/s")
            ->capture_default_str();
        cmd->add_option("--input-angle-rad", input_angle_rad,
                        "Bloch-space angle of the linear input polarization in the xz "
                        "plane, radians from +z")
            ->capture_default_str();
        cmd->add_flag("--partner-first", partner_first,
                      "Put the arccos(1/sqrt(3)) plate upstream of the half-wave plate");
    }

    [[nodiscard]] polcor::DepolarizerConfig build() const {
        return polcor::DepolarizerConfig::nominal(angular_velocity, input_angle_rad,
                                                  !partner_first);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarization-correlation model: figure data, virtual experiment, self-checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML file (flags win)")
        ->configurable(false);

    // figure1
    auto* fig1 = app.add_subcommand(
        "figure1", "Coincidence probability vs analyzer angle, quantum and classical");
    std::vector<double> f1_s{0.0025, 1.0, 10.0};
    int f1_alpha_points = 181;
    OutputOptions f1_out;
    fig1->add_option("--s-values", f1_s, "Classical intensity parameters")
        ->delimiter(',')
        ->capture_default_str();
    fig1->add_option("--alpha-points", f1_alpha_points, "Samples of alpha in [0, pi]")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    add_output_options(fig1, f1_out);

    // figure2
    auto* fig2 = app.add_subcommand(
        "figure2", "Visibility of equal-intensity anticorrelated beams vs intensity");
    double f2_min = 1e-3, f2_max = 20.0;
    int f2_points = 200;
    OutputOptions f2_out;
    fig2->add_option("--s-min", f2_min, "Lower end of the log grid")->capture_default_str();
    fig2->add_option("--s-max", f2_max, "Upper end of the log grid")->capture_default_str();
    fig2->add_option("--points", f2_points, "Grid size")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    add_output_options(fig2, f2_out);

    // figure3
    auto* fig3 = app.add_subcommand(
        "figure3", "Visibility upper bound over a grid of beam intensities");
    double f3_lo = 0.1, f3_hi = 10.0;
    int f3_points = 40;
    OutputOptions f3_out;
    fig3->add_option("--lo", f3_lo, "Lower end of both axes")->capture_default_str();
    fig3->add_option("--hi", f3_hi, "Upper end of both axes")->capture_default_str();
    fig3->add_option("--points", f3_points, "Points per axis")
        ->check(CLI::Range(2, 10000))
        ->capture_default_str();
    add_output_options(fig3, f3_out);

    // figure4
    auto* fig4 = app.add_subcommand(
        "figure4", "Bloch-vector path behind the rotating-waveplate depolarizer");
    int f4_points = 1001;
    DepolarizerFlags f4_dep;
    OutputOptions f4_out;
    fig4->add_option("--points", f4_points, "Samples over one period (endpoint included)")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
    f4_dep.attach(fig4);
    add_output_options(fig4, f4_out);

    // experiment
    auto* exp = app.add_subcommand(
        "experiment", "Six-sweep coincidence experiment; emits sweep CSV and a JSON fit summary");
    std::string exp_mode = "expectation";
    std::uint64_t exp_seed = 1;
    double exp_rep_rate = 8e7, exp_duration = 60.0, exp_intensity = 2.5e-3, exp_efficiency = 1.0;
    double exp_step_deg = 20.0;
    std::int64_t exp_subsample = 4800;
    DepolarizerFlags exp_dep;
    OutputOptions exp_out;
    std::string exp_summary_path;
    exp->add_option("--mode", exp_mode, "expectation: exact probabilities; stochastic: sampled clicks")
        ->check(CLI::IsMember({"expectation", "stochastic"}))
        ->capture_default_str();
    exp->add_option("--seed", exp_seed, "Random seed (stochastic mode)")->capture_default_str();
    exp->add_option("--rep-rate", exp_rep_rate, "Pulse rate, Hz")->capture_default_str();
    exp->add_option("--duration", exp_duration, "Seconds per analyzer angle")
        ->capture_default_str();
    exp->add_option("--intensity", exp_intensity, "Intensity parameter per pulse")
        ->capture_default_str();
    exp->add_option("--efficiency", exp_efficiency, "Detector efficiency in (0, 1]")
        ->capture_default_str();
    exp->add_option("--subsample", exp_subsample,
                    "Simulate every k-th pulse, scale counts by k (stochastic mode)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exp->add_option("--step-deg", exp_step_deg, "Great-circle step between analyzer angles")
        ->capture_default_str();
    exp_dep.attach(exp);
    add_output_options(exp, exp_out);
    exp->add_option("--summary-out", exp_summary_path,
                    "JSON fit summary file (default: stdout)");

    // validate
    auto* val = app.add_subcommand("validate", "Run the library's invariant self-checks");
    polcor::ValidateOptions vopts;
    std::string val_out_path;
    val->add_option("--seed", vopts.seed, "Seed for all stochastic checks")
        ->capture_default_str();
    val->add_option("--samples", vopts.mc_samples, "MC samples per closed-form comparison")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    val->add_option("--sandwich-inputs", vopts.sandwich_inputs,
                    "Random inputs for the bound sandwich")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    val->add_option("--sandwich-samples", vopts.sandwich_samples,
                    "MC samples per sandwich input")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    val->add_option("--nodes", vopts.quadrature_nodes, "Quadrature nodes per Euler axis")
        ->check(CLI::Range(4, 200))
        ->capture_default_str();
    val->add_option("--threads", vopts.threads, "Worker threads (0 = hardware)")
        ->check(CLI::Range(0, 1024))
        ->capture_default_str();
    val->add_option("--out", val_out_path, "Also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (fig1->parsed()) {
            emit_table(polcor::figure1_table(f1_s, f1_alpha_points), f1_out);
        } else if (fig2->parsed()) {
            emit_table(polcor::figure2_table(f2_min, f2_max, f2_points), f2_out);
        } else if (fig3->parsed()) {
            emit_table(polcor::figure3_table(f3_lo, f3_hi, f3_points), f3_out);
        } else if (fig4->parsed()) {
            emit_table(polcor::figure4_table(f4_dep.build(), f4_points), f4_out);
        } else if (exp->parsed()) {
            polcor::ExperimentConfig cfg;
            cfg.rep_rate = exp_rep_rate;
            cfg.duration_per_setting = exp_duration;
            cfg.intensity_s = exp_intensity;
            cfg.detector = polcor::DetectorModel{exp_efficiency};
            cfg.depolarizer = exp_dep.build();
            cfg.pulse_subsample = exp_subsample;
            const polcor::SweepMode mode = exp_mode == "stochastic"
                                               ? polcor::SweepMode::stochastic
                                               : polcor::SweepMode::expectation;
            polcor::RandomStream rng(exp_seed);
            const std::vector<polcor::SweepSpec> sweeps =
                polcor::standard_sweeps(exp_step_deg);
            std::vector<polcor::SweepResult> results;
            for (const polcor::SweepSpec& sweep : sweeps) {
                results.push_back(mode == polcor::SweepMode::expectation
                                      ? polcor::run_sweep_expectation(cfg, sweep)
                                      : polcor::run_sweep_stochastic(cfg, sweep, rng));
            }
            emit_table(polcor::experiment_table(results), exp_out);
            const std::string summary = polcor::experiment_summary_json(sweeps, results);
            if (exp_summary_path.empty()) {
                std::fputs(summary.c_str(), stdout);
            } else {
                polcor::write_text_file(exp_summary_path, summary);
            }
        } else if (val->parsed()) {
            const std::vector<polcor::CheckResult> results = polcor::run_validation(vopts);
            const std::string report = polcor::format_report(results);
            std::fputs(report.c_str(), stdout);
            if (!val_out_path.empty()) {
                polcor::write_text_file(val_out_path, report);
            }
            if (!polcor::all_passed(results)) {
                return kExitValidationFailure;
            }
        }
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitSuccess;
}
