#include "polcor/semiclassical.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gauss_legendre.hpp"

namespace polcor {

namespace series {

double sinhc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-6) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

double haar_no_click(double s) {
    if (std::abs(s) < 1e-6) {
        return 1.0 - s / 2.0 + s * s / 6.0;
    }
    return -std::expm1(-s) / s;
}

double haar_click(double s) {
    if (std::abs(s) < 1e-6) {
        return (s / 2.0) * (1.0 - s / 3.0 + s * s / 12.0);
    }
    // s + expm1(-s) loses no more than one digit: expm1 is exact and the
    // sum's leading term is s^2/2.
    return (s + std::expm1(-s)) / s;
}

double cosh_minus_sinhc(double x) {
    const double ax = std::abs(x);
    if (ax < 0.05) {
        // sum_k x^{2k} * 2k/(2k+1)!
        const double x2 = x * x;
        return x2 * (1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (1.0 / 840.0 + x2 / 45360.0)));
    }
    return std::cosh(x) - std::sinh(x) / x;
}

}  // namespace series

double polarizer_intensity(const BlochVector& s, const BlochVector& u) {
    if (!is_unit(u)) {
        throw std::domain_error("polarizer_intensity: setting must be a unit vector");
    }
    return 0.5 * (norm(s) + dot(u, s));
}

namespace {

constexpr std::int64_t kChunkSamples = 1 << 14;

void require_unit_settings(const BlochVector& u_a, const BlochVector& u_b, const char* where) {
    if (!is_unit(u_a) || !is_unit(u_b)) {
        throw std::domain_error(std::string(where) + ": settings must be unit vectors");
    }
}

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

/// Chunked Haar-MC mean of per_sample(rng).  Chunk c draws from a child
/// stream forked at index c off one master draw, and partial sums are
/// reduced in chunk order, so the value is bit-identical for any thread
/// count.
template <typename PerSample>
McEstimate chunked_mc(std::int64_t samples, RandomStream& rng, int threads,
                      PerSample per_sample) {
    if (samples < 1) {
        throw std::domain_error("monte carlo estimate: need at least one sample");
    }
    if (threads < 1) {
        throw std::invalid_argument("monte carlo estimate: thread count must be positive");
    }
    const RandomStream base(rng.next_u64());
    const std::int64_t n_chunks = (samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<ChunkSums> parts(static_cast<std::size_t>(n_chunks));

    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) {
                return;
            }
            RandomStream stream = base.fork(static_cast<std::uint64_t>(c));
            const std::int64_t count =
                std::min(kChunkSamples, samples - c * kChunkSamples);
            ChunkSums sums;
            for (std::int64_t i = 0; i < count; ++i) {
                const double v = per_sample(stream);
                sums.sum += v;
                sums.sum_sq += v * v;
            }
            parts[static_cast<std::size_t>(c)] = sums;
        }
    };

    if (threads == 1 || n_chunks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int active = static_cast<int>(
            std::min<std::int64_t>(threads, n_chunks));
        pool.reserve(static_cast<std::size_t>(active));
        for (int t = 0; t < active; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    for (const ChunkSums& part : parts) {
        sum += part.sum;
        sum_sq += part.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    McEstimate est;
    est.value = mean;
    if (samples > 1) {
        const double var = std::max(0.0, sum_sq / n - mean * mean);
        est.std_error = std::sqrt(var / (n - 1.0));
    }
    return est;
}

}  // namespace

McEstimate u_kernel_mc(const BeamPair& pair, const BlochVector& u_a,
                       const BlochVector& u_b, std::int64_t samples,
                       RandomStream& rng, int threads) {
    require_unit_settings(u_a, u_b, "u_kernel_mc");
    const BlochVector s_a = pair.s_a;
    const BlochVector s_b = pair.s_b;
    return chunked_mc(samples, rng, threads, [&](RandomStream& stream) {
        const Rotation3 omega = haar_rotation(stream);
        return std::exp(-0.5 * (dot(u_a, omega * s_a) + dot(u_b, omega * s_b)));
    });
}

McEstimate omega_averaged_coincidence_mc(const BeamPair& pair, const BlochVector& u_a,
                                         const BlochVector& u_b, const DetectorModel& det,
                                         std::int64_t samples, RandomStream& rng,
                                         int threads) {
    require_unit_settings(u_a, u_b, "omega_averaged_coincidence_mc");
    // efficiency rescales the beam vectors before every click evaluation
    const BlochVector s_a = det.efficiency * pair.s_a;
    const BlochVector s_b = det.efficiency * pair.s_b;
    const double na = norm(s_a);
    const double nb = norm(s_b);
    return chunked_mc(samples, rng, threads, [&, na, nb](RandomStream& stream) {
        const Rotation3 omega = haar_rotation(stream);
        const double ia = 0.5 * (na + dot(u_a, omega * s_a));
        const double ib = 0.5 * (nb + dot(u_b, omega * s_b));
        return std::expm1(-ia) * std::expm1(-ib);
    });
}

double omega_averaged_coincidence_quadrature(const BeamPair& pair, const BlochVector& u_a,
                                             const BlochVector& u_b, const DetectorModel& det,
                                             int nodes_per_axis) {
    require_unit_settings(u_a, u_b, "omega_averaged_coincidence_quadrature");
    if (nodes_per_axis < 2) {
        throw std::invalid_argument(
            "omega_averaged_coincidence_quadrature: need at least 2 nodes per axis");
    }
    const BlochVector s_a = det.efficiency * pair.s_a;
    const BlochVector s_b = det.efficiency * pair.s_b;
    const double na = norm(s_a);
    const double nb = norm(s_b);

    const detail::GaussLegendre rule = detail::gauss_legendre(nodes_per_axis);
    const int n = nodes_per_axis;

    std::vector<double> cos1(n), sin1(n), cos2(n), sin2(n);
    for (int i = 0; i < n; ++i) {
        // phi = pi (x + 1) maps [-1,1] onto [0, 2 pi)
        const double phi = std::numbers::pi * (rule.nodes[i] + 1.0);
        cos1[i] = std::cos(phi);
        sin1[i] = std::sin(phi);
        cos2[i] = cos1[i];
        sin2[i] = sin1[i];
    }

    // Omega = Rz(phi1) Ry(theta) Rz(phi2); Haar measure
    // d(phi1) d(cos theta) d(phi2) / (8 pi^2), so the mapped weight is
    // w1 w2 w3 / 8.
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double ct = rule.nodes[j];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int k = 0; k < n; ++k) {
            // v = Ry(theta) Rz(phi2) s, for both beams
            const double ax0 = cos2[k] * s_a.x - sin2[k] * s_a.y;
            const double ay0 = sin2[k] * s_a.x + cos2[k] * s_a.y;
            const double ax = ct * ax0 + st * s_a.z;
            const double az = -st * ax0 + ct * s_a.z;
            const double bx0 = cos2[k] * s_b.x - sin2[k] * s_b.y;
            const double by0 = sin2[k] * s_b.x + cos2[k] * s_b.y;
            const double bx = ct * bx0 + st * s_b.z;
            const double bz = -st * bx0 + ct * s_b.z;
            const double wjk = rule.weights[j] * rule.weights[k];
            for (int i = 0; i < n; ++i) {
                const BlochVector ra{cos1[i] * ax - sin1[i] * ay0,
                                     sin1[i] * ax + cos1[i] * ay0, az};
                const BlochVector rb{cos1[i] * bx - sin1[i] * by0,
                                     sin1[i] * bx + cos1[i] * by0, bz};
                const double ia = 0.5 * (na + dot(u_a, ra));
                const double ib = 0.5 * (nb + dot(u_b, rb));
                acc += rule.weights[i] * wjk * std::expm1(-ia) * std::expm1(-ib);
            }
        }
    }
    return acc / 8.0;
}

double coincidence_closed_anti(double s, double alpha) {
    if (!(s > 0.0)) {
        throw std::domain_error("coincidence_closed_anti: intensity must be positive");
    }
    return 1.0 - 2.0 * series::haar_no_click(s) +
           std::exp(-s) * series::sinhc(s * std::sin(alpha / 2.0));
}

double coincidence_closed_parallel(double s, double alpha) {
    if (!(s > 0.0)) {
        throw std::domain_error("coincidence_closed_parallel: intensity must be positive");
    }
    return 1.0 - 2.0 * series::haar_no_click(s) +
           std::exp(-s) * series::sinhc(s * std::cos(alpha / 2.0));
}

double u_lower_bound(double sa_norm, double sb_norm) {
    if (sa_norm < 0.0 || sb_norm < 0.0) {
        throw std::domain_error("u_lower_bound: intensities must be nonnegative");
    }
    return std::cosh((sa_norm - sb_norm) / 4.0);
}

double u_upper_bound(double sa_norm, double sb_norm) {
    if (sa_norm < 0.0 || sb_norm < 0.0) {
        throw std::domain_error("u_upper_bound: intensities must be nonnegative");
    }
    return std::sqrt(series::sinhc(sa_norm) * series::sinhc(sb_norm));
}

double visibility_symmetric(double s) {
    if (!(s > 0.0)) {
        throw std::domain_error("visibility_symmetric: intensity must be positive");
    }
    if (s < 1e-2) {
        // The denominator cancels at the scale of its O(1) terms, so the
        // direct form is unusable well before the generic 1e-6 series
        // threshold; a fourth-order series keeps the relative error below
        // ~1e-10 up to the switch point.
        return (1.0 - s / 3.0 + 2.0 * s * s / 45.0 + s * s * s / 540.0) / 3.0;
    }
    const double num = std::sinh(s) - s;
    const double den = s + (2.0 * s - 3.0) * std::sinh(s) + 2.0 * (s - 2.0) * std::cosh(s) + 4.0;
    return num / den;
}

namespace {

struct EnsembleMoments {
    double mean_norm_product = 0.0;  // <|s_a||s_b|>
    double mean_dot = 0.0;           // <s_a . s_b>
};

EnsembleMoments ensemble_moments(std::span<const WeightedBeamPair> pairs, const char* where) {
    if (pairs.empty()) {
        throw std::domain_error(std::string(where) + ": empty ensemble");
    }
    double total = 0.0;
    EnsembleMoments moments;
    for (const WeightedBeamPair& member : pairs) {
        if (member.weight < 0.0) {
            throw std::domain_error(std::string(where) + ": negative weight");
        }
        total += member.weight;
        moments.mean_norm_product += member.weight * norm(member.pair.s_a) * norm(member.pair.s_b);
        moments.mean_dot += member.weight * dot(member.pair.s_a, member.pair.s_b);
    }
    if (total <= 0.0) {
        throw std::domain_error(std::string(where) + ": total weight must be positive");
    }
    moments.mean_norm_product /= total;
    moments.mean_dot /= total;
    return moments;
}

}  // namespace

double weak_limit_coincidence(std::span<const WeightedBeamPair> pairs,
                              const BlochVector& u_a, const BlochVector& u_b) {
    require_unit_settings(u_a, u_b, "weak_limit_coincidence");
    const EnsembleMoments m = ensemble_moments(pairs, "weak_limit_coincidence");
    return 0.25 * (m.mean_norm_product + m.mean_dot * dot(u_a, u_b) / 3.0);
}

double weak_limit_visibility(std::span<const WeightedBeamPair> pairs) {
    const EnsembleMoments m = ensemble_moments(pairs, "weak_limit_visibility");
    if (m.mean_norm_product <= 0.0) {
        return 0.0;
    }
    return std::abs(m.mean_dot) / (3.0 * m.mean_norm_product);
}

double small_sa_coincidence(const BlochVector& s_a, const BlochVector& s_b,
                            const BlochVector& u_a, const BlochVector& u_b) {
    require_unit_settings(u_a, u_b, "small_sa_coincidence");
    const double na = norm(s_a);
    const double nb = norm(s_b);
    double u = series::sinhc(nb / 2.0);
    if (nb > 0.0) {
        u += dot(u_a, u_b) * dot(s_a, s_b) / (nb * nb) * series::cosh_minus_sinhc(nb / 2.0);
    }
    return 1.0 - series::haar_no_click(na) - series::haar_no_click(nb) +
           std::exp(-(na + nb) / 2.0) * u;
}

double small_sa_visibility_limit(double sb_norm) {
    if (sb_norm < 0.0) {
        throw std::domain_error("small_sa_visibility_limit: intensity must be nonnegative");
    }
    if (sb_norm == 0.0) {
        return 1.0 / 3.0;
    }
    return 2.0 * std::exp(-sb_norm / 2.0) * series::cosh_minus_sinhc(sb_norm / 2.0) /
           (sb_norm * series::haar_click(sb_norm));
}

double visibility_bound_surface(double sa_norm, double sb_norm) {
    if (!(sa_norm > 0.0) || !(sb_norm > 0.0)) {
        throw std::domain_error("visibility_bound_surface: intensities must be positive");
    }
    const double base = 1.0 - series::haar_no_click(sa_norm) - series::haar_no_click(sb_norm);
    const double damping = std::exp(-(sa_norm + sb_norm) / 2.0);
    const double p_min = base + damping * u_lower_bound(sa_norm, sb_norm);
    const double p_max = base + damping * u_upper_bound(sa_norm, sb_norm);
    return (p_max - p_min) / (p_max + p_min);
}

double p_total(double sa_norm, double sb_norm, const DetectorModel& det) {
    return click_probability(sa_norm, det) * click_probability(sb_norm, det);
}

}  // namespace polcor
