#pragma once

#include <cstdint>
#include <span>

#include "polcor/core.hpp"
#include "polcor/rng.hpp"

namespace polcor {

/// One individual preparation of the two classical beams.  The rotationally
/// invariant ensemble behind the coincidence formulas is represented either
/// by a single pair plus Haar averaging over a common rotation, or by a
/// weighted list of pairs for general mixtures.
struct BeamPair {
    BlochVector s_a;
    BlochVector s_b;
};

/// Beam intensity transmitted by a polarizer set to unit direction u:
/// (norm(s) + u.s) / 2, which lies in [0, norm(s)].  Throws
/// std::domain_error if u is not unit within 1e-12.
[[nodiscard]] double polarizer_intensity(const BlochVector& s, const BlochVector& u);

/// Monte Carlo estimate with the standard error of the mean.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Stable small-argument forms shared by the closed formulas.  Each switches
/// to a truncated Taylor series below a threshold chosen so the truncation
/// error stays below the double-precision noise of the direct expression.
namespace series {

/// sinh(x)/x, extended continuously through x = 0.
[[nodiscard]] double sinhc(double x);

/// (1 - exp(-s))/s: no-click probability of one detector arm behind a
/// polarizer, averaged over uniformly random polarization of a beam of
/// intensity s.  Extended continuously through s = 0 (value 1).
[[nodiscard]] double haar_no_click(double s);

/// 1 - haar_no_click(s), computed without cancellation at small s.
[[nodiscard]] double haar_click(double s);

/// cosh(x) - sinh(x)/x, computed without cancellation at small x.
[[nodiscard]] double cosh_minus_sinhc(double x);

}  // namespace series

/// Haar-MC estimate of the polarization-dependent kernel
///
///   U = integral dOmega exp[-(u_a . Omega s_a + u_b . Omega s_b) / 2]
///
/// over the normalized Haar measure.  The estimate is nonnegative and obeys
/// u_lower_bound / u_upper_bound up to sampling error.
///
/// Work is split into fixed-size chunks with substreams forked from one
/// master draw on rng, so the result is bit-identical for a given seed
/// regardless of the worker count.  Throws std::domain_error for samples < 1
/// and std::invalid_argument for threads < 1.
[[nodiscard]] McEstimate u_kernel_mc(const BeamPair& pair, const BlochVector& u_a,
                                     const BlochVector& u_b, std::int64_t samples,
                                     RandomStream& rng, int threads = 1);

/// Coincidence probability for beams drawn as a common Haar-random rotation
/// of the fixed pair, Monte Carlo method: unbiased estimate of
/// integral dOmega P_click(a) * P_click(b) with the detector efficiency
/// applied by rescaling both beam vectors first.  Chunking contract as in
/// u_kernel_mc.
[[nodiscard]] McEstimate omega_averaged_coincidence_mc(const BeamPair& pair,
                                                       const BlochVector& u_a,
                                                       const BlochVector& u_b,
                                                       const DetectorModel& det,
                                                       std::int64_t samples,
                                                       RandomStream& rng,
                                                       int threads = 1);

/// Same integral by deterministic quadrature: tensor-product Gauss-Legendre
/// over Euler angles (phi1, cos theta, phi2) with nodes_per_axis points per
/// axis.  Throws std::invalid_argument for nodes_per_axis < 2.
[[nodiscard]] double omega_averaged_coincidence_quadrature(const BeamPair& pair,
                                                           const BlochVector& u_a,
                                                           const BlochVector& u_b,
                                                           const DetectorModel& det,
                                                           int nodes_per_axis = 32);

/// Closed form of the Haar-averaged coincidence probability for
/// anti-parallel beams s_b = -s_a of common intensity s, as a function of
/// the angle alpha between the analyzer settings:
///
///   p = 1 - 2 (1 - e^-s)/s + e^-s sinh(s sin(alpha/2)) / (s sin(alpha/2))
///
/// Monotone nondecreasing in alpha on [0, pi]; the removable singularity at
/// alpha = 0 is handled by the series form of sinh(x)/x.  Throws
/// std::domain_error for s <= 0.
[[nodiscard]] double coincidence_closed_anti(double s, double alpha);

/// Parallel-beams counterpart (s_b = s_a): sin(alpha/2) replaced by
/// cos(alpha/2), removable singularity at alpha = pi.  Satisfies
/// coincidence_closed_parallel(s, alpha) = coincidence_closed_anti(s, pi - alpha).
[[nodiscard]] double coincidence_closed_parallel(double s, double alpha);

/// Lower bound on U over analyzer settings: cosh((|s_a| - |s_b|) / 4).
/// Throws std::domain_error for negative arguments.
[[nodiscard]] double u_lower_bound(double sa_norm, double sb_norm);

/// Upper bound on U (Cauchy-Schwarz): sqrt(sinh|s_a| sinh|s_b| / (|s_a||s_b|)),
/// with the limit sinh(x)/x -> 1 at zero intensity.  Throws
/// std::domain_error for negative arguments.
[[nodiscard]] double u_upper_bound(double sa_norm, double sb_norm);

/// Visibility of the anti-parallel closed-form signal at equal intensities:
///
///   V(s) = (sinh s - s) / (s + (2s - 3) sinh s + 2 (s - 2) cosh s + 4)
///
/// Strictly decreasing, with limit 1/3 as s -> 0+ (series form below a small
/// threshold avoids the 0/0).  Throws std::domain_error for s <= 0; use the
/// documented limit value 1/3 for s = 0.
[[nodiscard]] double visibility_symmetric(double s);

/// One ensemble member with a nonnegative relative weight.
struct WeightedBeamPair {
    BeamPair pair;
    double weight = 1.0;
};

/// Weak-intensity approximation of the ensemble-averaged coincidence
/// probability:
///
///   p ~= ( <|s_a||s_b|> + <s_a . s_b> (u_a . u_b) / 3 ) / 4
///
/// with moments taken over the weighted list (weights are normalized
/// internally).  Throws std::domain_error on empty input, negative weights,
/// zero total weight, or non-unit settings.
[[nodiscard]] double weak_limit_coincidence(std::span<const WeightedBeamPair> pairs,
                                            const BlochVector& u_a,
                                            const BlochVector& u_b);

/// Visibility of the weak-limit signal: |<s_a . s_b>| / (3 <|s_a||s_b|>).
/// Never exceeds 1/3 (Cauchy-Schwarz on the moments); returns 0 for an
/// ensemble with no joint intensity.
[[nodiscard]] double weak_limit_visibility(std::span<const WeightedBeamPair> pairs);

/// Coincidence probability from the first-order expansion of U in |s_a|:
///
///   U ~= 2 sinh(|s_b|/2)/|s_b|
///        + (u_a.u_b)(s_a.s_b)/|s_b|^2 [cosh(|s_b|/2) - 2 sinh(|s_b|/2)/|s_b|]
///
/// inserted into the Haar-averaged coincidence formula.  Agrees with
/// omega_averaged_coincidence to first order in |s_a|.  Throws
/// std::domain_error for non-unit settings.
[[nodiscard]] double small_sa_coincidence(const BlochVector& s_a, const BlochVector& s_b,
                                          const BlochVector& u_a, const BlochVector& u_b);

/// Visibility extracted from the expansion in the |s_a| -> 0 limit, as a
/// function of the strong beam's intensity.  Approaches 1/3 as
/// sb_norm -> 0; returns exactly 1/3 at sb_norm = 0.  Throws
/// std::domain_error for negative input.
[[nodiscard]] double small_sa_visibility_limit(double sb_norm);

/// Upper bound on the coincidence visibility attainable at intensities
/// (|s_a|, |s_b|): substitutes u_lower_bound and u_upper_bound for U in the
/// Haar-averaged formula and returns (p_max - p_min)/(p_max + p_min).
/// Tight (equal to visibility_symmetric) at equal intensities.  Throws
/// std::domain_error unless both arguments are > 0.
[[nodiscard]] double visibility_bound_surface(double sa_norm, double sb_norm);

/// Probability of a coincidence when both entire beams are detected without
/// polarization selection: click(|s_a|) * click(|s_b|).  Used to normalize
/// the closed-form curves.  Throws std::domain_error for negative arguments.
[[nodiscard]] double p_total(double sa_norm, double sb_norm, const DetectorModel& det);

}  // namespace polcor
