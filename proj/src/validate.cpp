#include "polcor/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "polcor/core.hpp"
#include "polcor/experiment.hpp"
#include "polcor/optics.hpp"
#include "polcor/quantum.hpp"
#include "polcor/rng.hpp"
#include "polcor/semiclassical.hpp"

namespace polcor {

namespace {

CheckResult make_result(std::string name, double measured, double tolerance,
                        std::string detail) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.tolerance = tolerance;
    r.passed = measured <= tolerance;
    r.detail = std::move(detail);
    return r;
}

BlochVector random_unit(RandomStream& rng) {
    // isotropic direction from a Haar rotation of a fixed axis
    return haar_rotation(rng).apply({0.0, 0.0, 1.0});
}

int effective_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

CheckResult check_rotation_closure(RandomStream rng) {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const Rotation3 r = haar_rotation(rng) * haar_rotation(rng);
        const Rotation3 rt = r.transposed();
        const Rotation3 ident = r * rt;
        double dev = std::abs(r.determinant() - 1.0);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                dev = std::max(dev, std::abs(ident.at(a, b) - (a == b ? 1.0 : 0.0)));
            }
        }
        worst = std::max(worst, dev);
    }
    return make_result("core.rotation_closure", worst, 1e-10,
                       "500 composed Haar pairs, orthogonality and det");
}

CheckResult check_haar_moments(RandomStream rng) {
    const std::int64_t n = 1'000'000;
    double mean[3] = {0.0, 0.0, 0.0};
    double second[9] = {0.0};
    for (std::int64_t i = 0; i < n; ++i) {
        const BlochVector v = haar_rotation(rng).apply({0.0, 0.0, 1.0});
        const double c[3] = {v.x, v.y, v.z};
        for (int a = 0; a < 3; ++a) {
            mean[a] += c[a];
            for (int b = 0; b < 3; ++b) {
                second[3 * a + b] += c[a] * c[b];
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const double sig_mean = std::sqrt((1.0 / 3.0) * inv_n);
    const double sig_diag = std::sqrt((1.0 / 5.0 - 1.0 / 9.0) * inv_n);
    const double sig_off = std::sqrt((1.0 / 15.0) * inv_n);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a) {
        worst = std::max(worst, std::abs(mean[a] * inv_n) / sig_mean);
        for (int b = 0; b < 3; ++b) {
            const double target = (a == b) ? 1.0 / 3.0 : 0.0;
            const double sig = (a == b) ? sig_diag : sig_off;
            worst = std::max(worst, std::abs(second[3 * a + b] * inv_n - target) / sig);
        }
    }
    return make_result("core.haar_moments", worst, 3.0,
                       "max z over 12 moment entries, 1e6 samples");
}

CheckResult check_click_concavity() {
    const DetectorModel det{1.0};
    double worst = -1.0;  // most positive second difference
    const double h = 0.05;
    for (int i = 1; i < 200; ++i) {
        const double s = i * h;
        const double d2 = click_probability(s + h, det) - 2.0 * click_probability(s, det) +
                          click_probability(s - h, det);
        worst = std::max(worst, d2);
    }
    return make_result("core.click_concavity", worst, 0.0,
                       "max second difference over s in (0, 10]");
}

CheckResult check_quantum_rotation_invariance(RandomStream rng) {
    const WernerParameter w{-0.7};
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BlochVector u_a = random_unit(rng);
        const BlochVector u_b = random_unit(rng);
        const double base = werner_coincidence(w, u_a, u_b);
        const Rotation3 r = haar_rotation(rng);
        const double rotated = werner_coincidence(w, r.apply(u_a), r.apply(u_b));
        worst = std::max(worst, std::abs(rotated - base));
    }
    return make_result("quantum.rotation_invariance", worst, 1e-12,
                       "1000 random common rotations");
}

CheckResult check_quantum_visibility_consistency() {
    double worst = 0.0;
    for (double eta : {-1.0, -0.5, -0.1, 0.1, 1.0 / 3.0}) {
        const WernerParameter w{eta};
        double pmax = 0.0;
        double pmin = 1.0;
        for (int i = 0; i <= 360; ++i) {
            const double alpha = std::numbers::pi * i / 360.0;
            const double p =
                werner_coincidence(w, {0.0, 0.0, 1.0}, {std::sin(alpha), 0.0, std::cos(alpha)});
            pmax = std::max(pmax, p);
            pmin = std::min(pmin, p);
        }
        const double numeric = (pmax - pmin) / (pmax + pmin);
        worst = std::max(worst, std::abs(numeric - quantum_visibility(w)));
    }
    return make_result("quantum.visibility_consistency", worst, 1e-12,
                       "sampled extremes vs |eta| for five eta values");
}

CheckResult check_quantum_physical_range() {
    int failures = 0;
    for (double eta : {-1.0, -0.9, 0.0, 0.2, 1.0 / 3.0}) {
        const WernerParameter w{eta};
        if (std::abs(eta) <= 1.0 / 3.0 && !is_separable(w)) {
            ++failures;
        }
    }
    if (is_separable(WernerParameter::singlet())) {
        ++failures;  // the singlet must register as entangled
    }
    bool rejected = false;
    try {
        const WernerParameter bad{0.5};
        (void)bad;
    } catch (const std::domain_error&) {
        rejected = true;
    }
    if (!rejected) {
        ++failures;
    }
    return make_result("quantum.physical_range", failures, 0.0,
                       "separability and physicality edges");
}

CheckResult check_bound_sandwich(RandomStream rng, const ValidateOptions& opts) {
    const int threads = effective_threads(opts.threads);
    double worst = 0.0;
    for (int i = 0; i < opts.sandwich_inputs; ++i) {
        const double sa = rng.uniform(0.01, 10.0);
        const double sb = rng.uniform(0.01, 10.0);
        const BlochVector u_a = random_unit(rng);
        const BlochVector u_b = random_unit(rng);
        const McEstimate u = u_kernel_mc({sa * random_unit(rng), sb * random_unit(rng)},
                                         u_a, u_b, opts.sandwich_samples, rng, threads);
        const double sigma = std::max(u.std_error, 1e-300);
        const double z_low = (u_lower_bound(sa, sb) - u.value) / sigma;
        const double z_high = (u.value - u_upper_bound(sa, sb)) / sigma;
        worst = std::max({worst, z_low, z_high});
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%d random inputs, %lld samples each",
                  opts.sandwich_inputs, static_cast<long long>(opts.sandwich_samples));
    return make_result("semiclassical.bound_sandwich", worst, 3.0, detail);
}

CheckResult check_closed_vs_mc(RandomStream rng, const ValidateOptions& opts) {
    const int threads = effective_threads(opts.threads);
    const DetectorModel det{1.0};
    double worst = 0.0;
    for (double s : {0.0025, 1.0, 10.0}) {
        for (int k = 0; k < 13; ++k) {
            const double alpha = std::numbers::pi * k / 12.0;
            const BlochVector u_a{0.0, 0.0, 1.0};
            const BlochVector u_b{std::sin(alpha), 0.0, std::cos(alpha)};
            const BeamPair pair{{0.0, 0.0, s}, {0.0, 0.0, -s}};
            const McEstimate mc = omega_averaged_coincidence_mc(pair, u_a, u_b, det,
                                                                opts.mc_samples, rng, threads);
            const double closed = coincidence_closed_anti(s, alpha);
            worst = std::max(worst, std::abs(mc.value - closed) /
                                        std::max(mc.std_error, 1e-300));
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "13 angles x s in {0.0025,1,10}, %lld samples",
                  static_cast<long long>(opts.mc_samples));
    return make_result("semiclassical.closed_vs_mc", worst, 3.0, detail);
}

CheckResult check_closed_vs_quadrature(const ValidateOptions& opts) {
    const DetectorModel det{1.0};
    double worst = 0.0;
    for (double s : {0.0025, 0.1, 1.0, 10.0}) {
        for (int k = 0; k <= 6; ++k) {
            const double alpha = std::numbers::pi * k / 6.0;
            const BlochVector u_a{0.0, 0.0, 1.0};
            const BlochVector u_b{std::sin(alpha), 0.0, std::cos(alpha)};
            const BeamPair anti{{0.0, 0.0, s}, {0.0, 0.0, -s}};
            const double quad = omega_averaged_coincidence_quadrature(
                anti, u_a, u_b, det, opts.quadrature_nodes);
            const double closed = coincidence_closed_anti(s, alpha);
            worst = std::max(worst, std::abs(quad - closed) / closed);

            const BeamPair par{{0.0, 0.0, s}, {0.0, 0.0, s}};
            const double quad_p = omega_averaged_coincidence_quadrature(
                par, u_a, u_b, det, opts.quadrature_nodes);
            const double closed_p = coincidence_closed_parallel(s, alpha);
            worst = std::max(worst, std::abs(quad_p - closed_p) / closed_p);
        }
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "relative, %d^3 nodes", opts.quadrature_nodes);
    return make_result("semiclassical.closed_vs_quadrature", worst, 1e-8, detail);
}

CheckResult check_parallel_anti_identity() {
    double worst = 0.0;
    for (double s : {0.01, 0.5, 1.0, 4.0, 10.0}) {
        for (int k = 0; k <= 24; ++k) {
            const double alpha = std::numbers::pi * k / 24.0;
            const double lhs = coincidence_closed_parallel(s, alpha);
            const double rhs = coincidence_closed_anti(s, std::numbers::pi - alpha);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return make_result("semiclassical.parallel_anti_identity", worst, 1e-12,
                       "p_par(s,a) vs p_anti(s,pi-a) on a 5x25 grid");
}

CheckResult check_quadrature_rotation_invariance(RandomStream rng,
                                                 const ValidateOptions& opts) {
    const DetectorModel det{1.0};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const BeamPair pair{rng.uniform(0.1, 5.0) * random_unit(rng),
                            rng.uniform(0.1, 5.0) * random_unit(rng)};
        const BlochVector u_a = random_unit(rng);
        const BlochVector u_b = random_unit(rng);
        const double base =
            omega_averaged_coincidence_quadrature(pair, u_a, u_b, det, opts.quadrature_nodes);
        const Rotation3 r = haar_rotation(rng);
        const double rotated = omega_averaged_coincidence_quadrature(
            {r.apply(pair.s_a), r.apply(pair.s_b)}, r.apply(u_a), r.apply(u_b), det,
            opts.quadrature_nodes);
        worst = std::max(worst, std::abs(rotated - base));
    }
    return make_result("semiclassical.rotation_invariance", worst, 1e-9,
                       "common rotation of settings and beams, quadrature");
}

CheckResult check_visibility_cross_formula() {
    double worst = 0.0;
    for (double s : {0.1, 1.0, 5.0, 10.0}) {
        const double pmax = coincidence_closed_anti(s, std::numbers::pi);
        const double pmin = coincidence_closed_anti(s, 0.0);
        const double from_extremes = (pmax - pmin) / (pmax + pmin);
        worst = std::max(worst, std::abs(from_extremes - visibility_symmetric(s)));
    }
    return make_result("semiclassical.visibility_cross_formula", worst, 1e-12,
                       "closed-form extremes vs visibility_symmetric");
}

CheckResult check_probability_range(RandomStream rng) {
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double s = std::exp(rng.uniform(std::log(1e-4), std::log(20.0)));
        const double alpha = rng.uniform(0.0, std::numbers::pi);
        for (double p : {coincidence_closed_anti(s, alpha),
                         coincidence_closed_parallel(s, alpha)}) {
            worst = std::max({worst, -p, p - 1.0});
        }
    }
    return make_result("semiclassical.probability_range", worst, 1e-12,
                       "closed forms stay inside [0,1], 2000 random (s, alpha)");
}

CheckResult check_u_at_least_one(RandomStream rng, const ValidateOptions& opts) {
    const int threads = effective_threads(opts.threads);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double s = rng.uniform(0.05, 8.0);
        const McEstimate u =
            u_kernel_mc({s * random_unit(rng), s * random_unit(rng)}, random_unit(rng),
                        random_unit(rng), opts.sandwich_samples, rng, threads);
        worst = std::max(worst, 1.0 - (u.value + 3.0 * u.std_error));
    }
    return make_result("semiclassical.u_at_least_one", worst, 0.0,
                       "equal intensities keep U >= 1 within 3 sigma");
}

CheckResult check_optics_norm_preservation() {
    const DepolarizerConfig cfg =
        DepolarizerConfig::nominal(ExperimentConfig::default_angular_velocity());
    double worst = 0.0;
    for (const BlochVector& v : trajectory_path(cfg, 2001)) {
        worst = std::max(worst, std::abs(norm(v) - 1.0));
    }
    return make_result("optics.norm_preservation", worst, 1e-12,
                       "2001 trajectory samples over one period");
}

CheckResult check_optics_periodicity() {
    const DepolarizerConfig cfg =
        DepolarizerConfig::nominal(ExperimentConfig::default_angular_velocity());
    const double period = cfg.period();
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double t = period * i / 32.0;
        const Mat3 a{depolarizer_at(cfg, t).m};
        const Mat3 b{depolarizer_at(cfg, t + period).m};
        worst = std::max(worst, max_abs_diff(a, b));
    }
    return make_result("optics.periodicity", worst, 1e-9,
                       "rotation matrices at t and t + pi/omega");
}

CheckResult check_optics_isotropy() {
    const DepolarizerConfig cfg =
        DepolarizerConfig::nominal(ExperimentConfig::default_angular_velocity());
    const double s = 1.0;
    const TrajectoryMoments m = trajectory_moments(cfg, s, 20000);
    double worst = norm(m.mean) / s;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double target = (a == b) ? s * s / 3.0 : 0.0;
            worst = std::max(worst, std::abs(m.second_moment.at(a, b) - target) / (s * s));
        }
    }
    return make_result("optics.isotropy", worst, 1e-6,
                       "nominal depolarizer, 20000 period samples, relative");
}

CheckResult check_experiment_weak_limit() {
    const ExperimentConfig cfg;
    const SweepSpec sweep = standard_sweeps()[0];
    const SweepResult r = run_sweep_expectation(cfg, sweep);
    const double pulses = cfg.rep_rate * cfg.duration_per_setting;
    const double s = cfg.intensity_s;
    double worst = 0.0;
    for (std::size_t i = 0; i < r.angles.size(); ++i) {
        // the depolarizer makes the pair isotropic to second moments, so the
        // weak limit reduces to p = s^2 (1 - u_a.u_b / 3) / 4
        const BlochVector u_b = great_circle_point(sweep.circle, r.angles[i]);
        const double cos_ab = dot(sweep.beam_a_setting, u_b);
        const double predicted = 0.25 * s * s * (1.0 - cos_ab / 3.0);
        const double actual = r.coincidences[i] / pulses;
        worst = std::max(worst, std::abs(actual - predicted) / predicted);
    }
    return make_result("experiment.weak_limit_first_order", worst, cfg.intensity_s,
                       "sweep probabilities vs weak-limit prediction, relative");
}

CheckResult check_experiment_modes_agree(RandomStream rng) {
    const ExperimentConfig cfg;
    const SweepSpec sweep = standard_sweeps()[0];
    const SweepResult expect = run_sweep_expectation(cfg, sweep);
    const SweepResult sampled = run_sweep_stochastic(cfg, sweep, rng);
    double worst = 0.0;
    for (std::size_t i = 0; i < expect.angles.size(); ++i) {
        const double mean = expect.coincidences[i];
        const double sigma = std::sqrt(sampled.count_scale * mean);
        worst = std::max(worst, std::abs(sampled.coincidences[i] - mean) / sigma);
    }
    return make_result("experiment.modes_agree", worst, 3.0,
                       "stochastic vs expectation coincidences, one sweep");
}

CheckResult check_experiment_counting(const std::vector<SweepResult>& sweeps) {
    double worst = 0.0;
    for (const SweepResult& r : sweeps) {
        for (std::size_t i = 0; i < r.angles.size(); ++i) {
            const double cap = std::min(r.singles_a[i], r.singles_b[i]);
            worst = std::max(worst, r.coincidences[i] - cap);
        }
    }
    return make_result("experiment.coincidence_within_singles", worst, 1e-9,
                       "coincidences never exceed either singles channel");
}

CheckResult check_experiment_visibility_ceiling(const std::vector<SweepResult>& sweeps) {
    double worst = 0.0;
    for (const SweepResult& r : sweeps) {
        worst = std::max(worst, r.visibility);
    }
    return make_result("experiment.visibility_ceiling", worst, 1.0 / 3.0 + 0.005,
                       "max fitted visibility over the six standard sweeps");
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
    RandomStream master(opts.seed);
    std::vector<CheckResult> out;

    out.push_back(check_rotation_closure(master.fork(1)));
    out.push_back(check_haar_moments(master.fork(2)));
    out.push_back(check_click_concavity());

    out.push_back(check_quantum_rotation_invariance(master.fork(3)));
    out.push_back(check_quantum_visibility_consistency());
    out.push_back(check_quantum_physical_range());

    {
        RandomStream stream = master.fork(4);
        out.push_back(check_bound_sandwich(stream, opts));
    }
    {
        RandomStream stream = master.fork(5);
        out.push_back(check_closed_vs_mc(stream, opts));
    }
    out.push_back(check_closed_vs_quadrature(opts));
    out.push_back(check_parallel_anti_identity());
    {
        RandomStream stream = master.fork(6);
        out.push_back(check_quadrature_rotation_invariance(stream, opts));
    }
    out.push_back(check_visibility_cross_formula());
    {
        RandomStream stream = master.fork(7);
        out.push_back(check_probability_range(stream));
    }
    {
        RandomStream stream = master.fork(8);
        out.push_back(check_u_at_least_one(stream, opts));
    }

    out.push_back(check_optics_norm_preservation());
    out.push_back(check_optics_periodicity());
    out.push_back(check_optics_isotropy());

    out.push_back(check_experiment_weak_limit());
    {
        RandomStream stream = master.fork(9);
        out.push_back(check_experiment_modes_agree(stream));
    }
    {
        const ExperimentConfig cfg;
        RandomStream unused(0);
        const std::vector<SweepResult> sweeps =
            full_experiment(cfg, SweepMode::expectation, unused);
        out.push_back(check_experiment_counting(sweeps));
        out.push_back(check_experiment_visibility_ceiling(sweeps));
    }
    return out;
}

std::string format_report(std::span<const CheckResult> results) {
    std::string out;
    char line[256];
    int failed = 0;
    for (const CheckResult& r : results) {
        std::snprintf(line, sizeof(line), "[%s] %-42s measured=%.12g tolerance=%.12g  %s\n",
                      r.passed ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.tolerance,
                      r.detail.c_str());
        out += line;
        failed += r.passed ? 0 : 1;
    }
    std::snprintf(line, sizeof(line), "%zu checks, %d failed\n", results.size(), failed);
    out += line;
    return out;
}

bool all_passed(std::span<const CheckResult> results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

}  // namespace polcor
