#pragma once

#include "polcor/core.hpp"

namespace polcor {

/// Scalar parameter eta of the two-qubit Werner family.  The family
/// interpolates between the maximally mixed state (eta = 0) and the singlet
/// (eta = -1); it is a positive-definite density operator only for
/// -1 <= eta <= 1/3 and separable exactly when |eta| <= 1/3.
struct WernerParameter {
    double eta;

    /// Throws std::domain_error outside the physical range [-1, 1/3].
    explicit WernerParameter(double eta);

    static WernerParameter singlet() { return WernerParameter{-1.0}; }

    static constexpr double physical_min = -1.0;
    static constexpr double physical_max = 1.0 / 3.0;
};

/// Joint probability that both polarization analyzers, set to unit Bloch
/// directions u_a and u_b, pass their photons: (1 + eta * u_a.u_b) / 4.
/// Invariant under any common rotation of the two settings.  Throws
/// std::domain_error if either setting is not unit within 1e-12.
[[nodiscard]] double werner_coincidence(const WernerParameter& w,
                                        const BlochVector& u_a,
                                        const BlochVector& u_b);

/// Visibility of the coincidence signal over the analyzer angle: |eta|.
[[nodiscard]] double quantum_visibility(const WernerParameter& w);

/// True exactly when |eta| <= 1/3.
[[nodiscard]] bool is_separable(const WernerParameter& w);

}  // namespace polcor
