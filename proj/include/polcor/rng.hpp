#pragma once

#include <array>
#include <cstdint>

#include "polcor/core.hpp"

namespace polcor {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
///
/// The generator and the distribution transforms are pinned here instead of
/// delegating to <random> because standard-library distributions are not
/// required to produce identical sequences across implementations, and the
/// reproducibility contract is seed in, bit-identical results out, on every
/// platform.
///
/// Every stochastic operation in the library takes one of these explicitly.
/// Parallel work is partitioned into fixed-size chunks, each owning a child
/// stream derived via fork(), so results do not depend on the worker count.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform double in [a, b).
    double uniform(double a, double b);

    /// Standard normal deviate (Box-Muller; one value cached per pair).
    double normal();

    /// Child stream determined purely by the current state and the index.
    /// Does not advance this stream: draw from the parent between forks when
    /// distinct children are needed at the same index.
    [[nodiscard]] RandomStream fork(std::uint64_t index) const;

private:
    std::array<std::uint64_t, 4> state_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// Rotation distributed by the normalized Haar measure on SO(3), obtained
/// from a uniform unit quaternion (four independent standard normals,
/// normalized).  Successive calls are independent.
[[nodiscard]] Rotation3 haar_rotation(RandomStream& rng);

}  // namespace polcor
