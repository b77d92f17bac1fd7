#include "diffshape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace diffshape {

namespace {

// Grid scan on [-2,2]^2 used when no closed-form bounds are supplied.
constexpr int kScanNodes = 201;
constexpr double kScanLo = -2.0;
constexpr double kScanHi = 2.0;

std::pair<double, double> scan_bounds(const PerturbationField::ValueFn& value,
                                      const PerturbationField::JacobianFn& jacobian) {
    double sup = 0.0;
    double lip = 0.0;
    const double h = (kScanHi - kScanLo) / (kScanNodes - 1);
    for (int i = 0; i < kScanNodes; ++i) {
        for (int j = 0; j < kScanNodes; ++j) {
            const Vec2 x{kScanLo + i * h, kScanLo + j * h};
            sup = std::max(sup, value(x).norm());
            lip = std::max(lip, jacobian(x).op_norm());
        }
    }
    return {sup, lip};
}

}  // namespace

PerturbationField::PerturbationField(std::string id, ValueFn value, JacobianFn jacobian,
                                     double sup_norm, double lipschitz_bound)
    : id_(std::move(id)),
      value_(std::move(value)),
      jacobian_(std::move(jacobian)),
      sup_norm_(sup_norm),
      lipschitz_(lipschitz_bound) {}

PerturbationField::PerturbationField(std::string id, ValueFn value, JacobianFn jacobian)
    : id_(std::move(id)), value_(std::move(value)), jacobian_(std::move(jacobian)) {
    auto [sup, lip] = scan_bounds(value_, jacobian_);
    sup_norm_ = sup;
    lipschitz_ = lip;
}

double PerturbationField::eps_max() const {
    if (lipschitz_ <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.9 / lipschitz_;
}

PerturbationField PerturbationField::zero() {
    return PerturbationField(
        "V0", [](const Vec2&) { return Vec2{0.0, 0.0}; },
        [](const Vec2&) { return Mat2{}; }, 0.0, 0.0);
}

PerturbationField PerturbationField::builtin(const std::string& name) {
    if (name == "V0") return zero();
    if (name == "V1") {
        return PerturbationField(
            "V1", [](const Vec2& x) { return x; },
            [](const Vec2&) { return Mat2::identity(); }, 2.0 * std::sqrt(2.0), 1.0);
    }
    if (name == "V2") {
        return PerturbationField(
            "V2", [](const Vec2& x) { return Vec2{x.x - x.y, x.y - x.x}; },
            [](const Vec2&) { return Mat2{1.0, -1.0, -1.0, 1.0}; });
    }
    if (name == "V3") {
        return PerturbationField(
            "V3", [](const Vec2& x) { return Vec2{std::cos(x.x), std::sin(x.y)}; },
            [](const Vec2& x) { return Mat2{-std::sin(x.x), 0.0, 0.0, std::cos(x.y)}; },
            std::sqrt(2.0), 1.0);
    }
    if (name == "V4") {
        return PerturbationField(
            "V4", [](const Vec2& x) { return Vec2{x.x * x.y, x.y}; },
            [](const Vec2& x) { return Mat2{x.y, x.x, 0.0, 1.0}; });
    }
    if (name == "V5") {
        return PerturbationField(
            "V5", [](const Vec2&) { return Vec2{1.0, 0.0}; },
            [](const Vec2&) { return Mat2{}; }, 1.0, 0.0);
    }
    if (name == "V6") {
        return PerturbationField(
            "V6", [](const Vec2& x) { return Vec2{x.x * x.x, x.x * x.y}; },
            [](const Vec2& x) { return Mat2{2.0 * x.x, 0.0, x.y, x.x}; });
    }
    if (name == "V7") {
        return PerturbationField(
            "V7", [](const Vec2& x) { return Vec2{0.3 - x.x, 0.2 - x.y}; },
            [](const Vec2&) { return Mat2{-1.0, 0.0, 0.0, -1.0}; },
            std::hypot(2.3, 2.2), 1.0);
    }
    if (name == "V8") {
        // sin(6*theta) * x with theta the atan2 angle; the angular weight is
        // well-defined away from the origin and the field extends by 0 there.
        auto value = [](const Vec2& x) -> Vec2 {
            if (x.norm2() == 0.0) return {0.0, 0.0};
            return std::sin(6.0 * std::atan2(x.y, x.x)) * x;
        };
        auto jac = [](const Vec2& x) -> Mat2 {
            const double r2 = x.norm2();
            if (r2 == 0.0) return Mat2{};
            const double th = std::atan2(x.y, x.x);
            const double s = std::sin(6.0 * th);
            const double c = std::cos(6.0 * th);
            // d theta / dx = (-y, x) / r^2
            const double tx = -x.y / r2;
            const double ty = x.x / r2;
            return Mat2{s + 6.0 * c * tx * x.x, 6.0 * c * ty * x.x,
                        6.0 * c * tx * x.y, s + 6.0 * c * ty * x.y};
        };
        return PerturbationField("V8", value, jac);
    }
    throw ConfigError("unknown perturbation field: " + name);
}

PerturbationField PerturbationField::linear_combo(
    const std::vector<std::pair<double, PerturbationField>>& terms) {
    std::ostringstream id;
    double sup = 0.0;
    double lip = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) id << "+";
        id << terms[i].first << "*" << terms[i].second.id();
        sup += std::abs(terms[i].first) * terms[i].second.sup_norm();
        lip += std::abs(terms[i].first) * terms[i].second.lipschitz_bound();
    }
    auto shared = std::make_shared<std::vector<std::pair<double, PerturbationField>>>(terms);
    auto value = [shared](const Vec2& x) {
        Vec2 v{};
        for (const auto& [coef, field] : *shared) v += coef * field(x);
        return v;
    };
    auto jac = [shared](const Vec2& x) {
        Mat2 m{};
        for (const auto& [coef, field] : *shared) {
            const Mat2 j = field.jacobian(x);
            m.a += coef * j.a; m.b += coef * j.b;
            m.c += coef * j.c; m.d += coef * j.d;
        }
        return m;
    };
    return PerturbationField(terms.empty() ? "V0" : id.str(), value, jac, sup, lip);
}

Vec2 shift(const PerturbationField& field, double eps, const Vec2& x) {
    if (std::abs(eps) > field.eps_max()) {
        std::ostringstream msg;
        msg << "distortion factor " << eps << " exceeds admissible range +-"
            << field.eps_max() << " for field " << field.id();
        throw ConfigError(msg.str());
    }
    return x + eps * field(x);
}

Domain Domain::unit_disk() { return Domain(); }

Domain Domain::perturbed(const Domain& base, PerturbationField field, double eps) {
    if (std::abs(eps) > field.eps_max()) {
        throw ConfigError("distortion factor exceeds admissible range for field " + field.id());
    }
    Domain d;
    d.impl_ = std::make_shared<const Perturbation>(
        Perturbation{base.impl_, std::move(field), eps});
    return d;
}

bool Domain::contains_impl(const Perturbation* p, const Vec2& x) {
    if (p == nullptr) return x.norm2() < 1.0;
    return contains_impl(p->base.get(), x + p->eps * p->field(x));
}

bool Domain::contains(const Vec2& x) const { return contains_impl(impl_.get(), x); }

Vec2 project_exit(const Domain& domain, const Vec2& inside, const Vec2& outside) {
    if (!domain.is_unit_disk()) {
        throw UnsupportedError("project_exit: boundary projection implemented for the unit disk only");
    }
    // Root of |inside + t*(outside-inside)|^2 = 1 on (0, 1]; with a strictly
    // interior start there is exactly one.
    const Vec2 d = outside - inside;
    const double A = d.norm2();
    const double B = 2.0 * inside.dot(d);
    const double C = inside.norm2() - 1.0;
    const double disc = B * B - 4.0 * A * C;
    if (!(A > 0.0) || disc < 0.0) {
        std::ostringstream msg;
        msg << "project_exit: no boundary crossing on segment (" << inside.x << ","
            << inside.y << ") -> (" << outside.x << "," << outside.y << ")";
        throw SimulationError(msg.str());
    }
    const double t = (-B + std::sqrt(disc)) / (2.0 * A);
    if (!(t > 0.0) || t > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "project_exit: crossing parameter " << t << " outside (0,1] for segment ("
            << inside.x << "," << inside.y << ") -> (" << outside.x << "," << outside.y << ")";
        throw SimulationError(msg.str());
    }
    return inside + std::min(t, 1.0) * d;
}

Vec2 outward_normal(const Domain& domain, const Vec2& y) {
    if (!domain.is_unit_disk()) {
        throw UnsupportedError("outward_normal: implemented for the unit disk only");
    }
    const double r = y.norm();
    if (std::abs(r - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "outward_normal: point (" << y.x << "," << y.y << ") is not on the boundary (|y| = "
            << r << ")";
        throw DomainError(msg.str());
    }
    return y * (1.0 / r);
}

BoundaryQuadrature circle_quadrature(int n_nodes) {
    if (n_nodes < 4) throw ConfigError("circle_quadrature: need at least 4 nodes");
    BoundaryQuadrature q;
    q.nodes.reserve(n_nodes);
    q.weights.assign(n_nodes, 2.0 * M_PI / n_nodes);
    q.normals.reserve(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double th = 2.0 * M_PI * i / n_nodes;
        const Vec2 y{std::cos(th), std::sin(th)};
        q.nodes.push_back(y);
        q.normals.push_back(y);
    }
    return q;
}

}  // namespace diffshape
