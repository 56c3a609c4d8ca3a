#pragma once

#include <array>

namespace polcor {

/// Generalized Bloch vector of a polarized beam: the direction encodes the
/// polarization state and the length the normalized beam intensity (mean
/// photon number scale).
///
/// Axis convention, fixed repo-wide: z <-> horizontal/vertical linear,
/// x <-> +-45 degree diagonal, y <-> right/left circular.  Relative to the
/// standard Stokes parameters this is (S1, S2, S3) = (z, x, y).
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

[[nodiscard]] double dot(const BlochVector& a, const BlochVector& b);
[[nodiscard]] double norm(const BlochVector& v);

/// Unit vector along v.  Throws std::domain_error for the zero vector.
[[nodiscard]] BlochVector normalized(const BlochVector& v);

/// Measurement settings must be unit vectors: |norm(u) - 1| <= tol.
[[nodiscard]] bool is_unit(const BlochVector& u, double tol = 1e-12);

BlochVector operator+(const BlochVector& a, const BlochVector& b);
BlochVector operator-(const BlochVector& a, const BlochVector& b);
BlochVector operator-(const BlochVector& v);
BlochVector operator*(double c, const BlochVector& v);

/// Plain 3x3 matrix of reals, row-major.  Used for second moments; carries
/// no invariants of its own.
struct Mat3 {
    std::array<double, 9> m{};

    double& at(int row, int col) { return m[3 * row + col]; }
    double at(int row, int col) const { return m[3 * row + col]; }

    static Mat3 identity();
};

/// Largest entrywise absolute difference between two matrices.
[[nodiscard]] double max_abs_diff(const Mat3& a, const Mat3& b);

/// Proper rotation in three real dimensions (element of SO(3)).  Entries are
/// row-major; a default-constructed value is the identity.
///
/// Invariants (checked by is_rotation, maintained by every constructor in
/// this library): R^T R = I and det R = 1, both to within 1e-12.
struct Rotation3 {
    std::array<double, 9> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};

    double& at(int row, int col) { return m[3 * row + col]; }
    double at(int row, int col) const { return m[3 * row + col]; }

    [[nodiscard]] BlochVector apply(const BlochVector& v) const;
    [[nodiscard]] Rotation3 transposed() const;
    [[nodiscard]] double determinant() const;

    static Rotation3 identity();
};

/// Composition: (a * b).apply(v) == a.apply(b.apply(v)).
Rotation3 operator*(const Rotation3& a, const Rotation3& b);
BlochVector operator*(const Rotation3& r, const BlochVector& v);

/// True if r satisfies the orthogonality and determinant invariants within
/// tol.
[[nodiscard]] bool is_rotation(const Rotation3& r, double tol = 1e-12);

/// Right-handed rotation by angle about a unit axis.  Throws
/// std::domain_error if |norm(axis) - 1| > 1e-9.
[[nodiscard]] Rotation3 rotation_about(const BlochVector& axis, double angle);

/// Binary on/off detector: clicks with probability 1 - exp(-efficiency * s)
/// for classical light of normalized intensity s.
struct DetectorModel {
    double efficiency = 1.0;

    /// Throws std::domain_error unless 0 < efficiency <= 1.
    explicit DetectorModel(double efficiency = 1.0);
};

/// Click probability 1 - exp(-efficiency * intensity).  Monotone
/// nondecreasing and concave in the intensity; 0 at zero intensity.  Throws
/// std::domain_error for negative intensity.
[[nodiscard]] double click_probability(double intensity, const DetectorModel& det);

}  // namespace polcor
