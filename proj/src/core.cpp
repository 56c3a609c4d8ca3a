#include "polcor/core.hpp"

#include <cmath>
#include <stdexcept>

namespace polcor {

double dot(const BlochVector& a, const BlochVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

double norm(const BlochVector& v) {
    return std::sqrt(dot(v, v));
}

BlochVector normalized(const BlochVector& v) {
    const double n = norm(v);
    if (n == 0.0) {
        throw std::domain_error("normalized: zero vector has no direction");
    }
    return {v.x / n, v.y / n, v.z / n};
}

bool is_unit(const BlochVector& u, double tol) {
    return std::abs(norm(u) - 1.0) <= tol;
}

BlochVector operator+(const BlochVector& a, const BlochVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

BlochVector operator-(const BlochVector& v) {
    return {-v.x, -v.y, -v.z};
}

BlochVector operator*(double c, const BlochVector& v) {
    return {c * v.x, c * v.y, c * v.z};
}

Mat3 Mat3::identity() {
    Mat3 r;
    r.m = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
    return r;
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
    double worst = 0.0;
    for (int i = 0; i < 9; ++i) {
        worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    }
    return worst;
}

BlochVector Rotation3::apply(const BlochVector& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Rotation3 Rotation3::transposed() const {
    Rotation3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.at(i, j) = at(j, i);
        }
    }
    return r;
}

double Rotation3::determinant() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Rotation3 Rotation3::identity() {
    return Rotation3{};
}

Rotation3 operator*(const Rotation3& a, const Rotation3& b) {
    Rotation3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) {
                acc += a.at(i, k) * b.at(k, j);
            }
            r.at(i, j) = acc;
        }
    }
    return r;
}

BlochVector operator*(const Rotation3& r, const BlochVector& v) {
    return r.apply(v);
}

bool is_rotation(const Rotation3& r, double tol) {
    const Rotation3 gram = r.transposed() * r;
    Mat3 g;
    g.m = gram.m;
    if (max_abs_diff(g, Mat3::identity()) > tol) {
        return false;
    }
    return std::abs(r.determinant() - 1.0) <= tol;
}

Rotation3 rotation_about(const BlochVector& axis, double angle) {
    if (std::abs(norm(axis) - 1.0) > 1e-9) {
        throw std::domain_error("rotation_about: axis must be a unit vector");
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double k = 1.0 - c;
    const double x = axis.x, y = axis.y, z = axis.z;
    Rotation3 r;
    r.m = {c + x * x * k,     x * y * k - z * s, x * z * k + y * s,
           y * x * k + z * s, c + y * y * k,     y * z * k - x * s,
           z * x * k - y * s, z * y * k + x * s, c + z * z * k};
    return r;
}

DetectorModel::DetectorModel(double efficiency_in) : efficiency(efficiency_in) {
    if (!(efficiency > 0.0) || efficiency > 1.0) {
        throw std::domain_error("DetectorModel: efficiency must be in (0, 1]");
    }
}

double click_probability(double intensity, const DetectorModel& det) {
    if (intensity < 0.0) {
        throw std::domain_error("click_probability: negative intensity");
    }
    return -std::expm1(-det.efficiency * intensity);
}

}  // namespace polcor
