#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diffshape/errors.hpp"

namespace diffshape {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Mat2 {
    // row-major: [[a, b], [c, d]]
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 transpose() const { return {a, c, b, d}; }

    // spectral norm of a 2x2 matrix (largest singular value)
    double op_norm() const {
        const double s = a * a + b * b + c * c + d * d;
        const double det = a * d - b * c;
        const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * det * det));
        return std::sqrt(0.5 * (s + disc));
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 isotropic(double s) { return {s, 0.0, 0.0, s}; }
};

inline Mat2 mul(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

// A C^2 vector field used to distort the domain through x + eps*V(x).
// Carries its Jacobian plus sup-norm / Lipschitz bounds; the latter gives the
// admissible distortion range eps_max = 0.9 / Lipschitz, which keeps
// I + eps*DV invertible and hence the shift injective.
class PerturbationField {
public:
    using ValueFn = std::function<Vec2(const Vec2&)>;
    using JacobianFn = std::function<Mat2(const Vec2&)>;

    PerturbationField(std::string id, ValueFn value, JacobianFn jacobian);
    PerturbationField(std::string id, ValueFn value, JacobianFn jacobian,
                      double sup_norm, double lipschitz_bound);

    Vec2 operator()(const Vec2& x) const { return value_(x); }
    Mat2 jacobian(const Vec2& x) const { return jacobian_(x); }

    const std::string& id() const { return id_; }
    double sup_norm() const { return sup_norm_; }
    double lipschitz_bound() const { return lipschitz_; }
    double eps_max() const;

    // Catalog of the eight benchmark directions ("V1".."V8") plus "V0" (zero).
    static PerturbationField builtin(const std::string& name);
    static PerturbationField zero();
    static PerturbationField linear_combo(
        const std::vector<std::pair<double, PerturbationField>>& terms);

private:
    std::string id_;
    ValueFn value_;
    JacobianFn jacobian_;
    double sup_norm_ = 0.0;
    double lipschitz_ = 0.0;
};

// Perturbation of the identity: x + eps*V(x). Throws ConfigError when eps is
// outside the field's admissible range.
Vec2 shift(const PerturbationField& field, double eps, const Vec2& x);

// Open region: either the unit disk or a pre-image distortion of a base
// domain (x belongs to the perturbed domain iff x + eps*V(x) belongs to the
// base). Immutable and cheap to copy.
class Domain {
public:
    static Domain unit_disk();
    static Domain perturbed(const Domain& base, PerturbationField field, double eps);

    bool contains(const Vec2& x) const;
    bool is_unit_disk() const { return impl_ == nullptr; }
    int dimension() const { return 2; }

private:
    struct Perturbation {
        std::shared_ptr<const Perturbation> base;  // nullptr = unit disk
        PerturbationField field;
        double eps;
    };
    Domain() = default;
    static bool contains_impl(const Perturbation* p, const Vec2& x);

    std::shared_ptr<const Perturbation> impl_;  // nullptr = unit disk
};

// First crossing of the segment [inside, outside] with the unit circle,
// taking the crossing closest to `outside` (the argmin over the segment's
// intersection with the closed disk). Result is on the boundary to 1e-10.
Vec2 project_exit(const Domain& domain, const Vec2& inside, const Vec2& outside);

// Outer normal at a boundary point of the unit disk (|y| = 1 within 1e-8).
Vec2 outward_normal(const Domain& domain, const Vec2& y);

struct BoundaryQuadrature {
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    std::vector<Vec2> normals;
};

// Equispaced trapezoid rule on the unit circle; spectrally accurate for
// smooth periodic integrands. n_nodes >= 4.
BoundaryQuadrature circle_quadrature(int n_nodes);

}  // namespace diffshape
