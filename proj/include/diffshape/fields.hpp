#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diffshape/geometry.hpp"

namespace diffshape {

// Provider of the state u and its gradient. The benchmark solution is an
// analytic formula valid on all of R^2, so it doubles as its own C^2
// extension beyond the closed disk.
struct SolutionField {
    std::function<double(const Vec2&)> u;
    std::function<Vec2(const Vec2&)> grad_u;
};

// Coefficients of the semilinear PDE in generator form.
struct PDECoefficients {
    std::function<Vec2(const Vec2&)> mu;
    std::function<Mat2(const Vec2&)> sigma;
    std::function<double(const Vec2&, double)> f;
    std::function<double(const Vec2&, double)> df_du;
    std::function<double(const Vec2&)> g;
    std::function<Vec2(const Vec2&)> grad_g;

    // Fast-path hints for the simulation loop; correctness never depends on
    // them being set.
    bool mu_is_zero = false;
    bool sigma_is_const = false;
    Mat2 sigma_const{};
    bool intensity_is_zero = false;
};

// Target data of the tracking functional.
struct TrackingData {
    std::function<double(const Vec2&)> u_dag;
};

// u(x) = (1 - |x|^2)/4 solves Laplacian(u) + 1 = 0 on the unit disk with
// zero boundary values; defined everywhere.
SolutionField benchmark_solution();

// mu = 0, sigma = sqrt(2) I, f = 1, g = 0.
PDECoefficients benchmark_coefficients();

// u_dag(x1, x2) = x1 (1 - x1) x2 (1 - x2).
TrackingData benchmark_tracking();

// Rewrites div(K grad u) + v.grad u + f = 0 into generator form:
// sigma = sqrt(2) * chol(K), mu = v + div(K). Throws CoefficientError when K
// is not symmetric positive definite at an evaluation point.
std::pair<std::function<Vec2(const Vec2&)>, std::function<Mat2(const Vec2&)>>
convert_convection_diffusion(std::function<Mat2(const Vec2&)> K,
                             std::function<Vec2(const Vec2&)> v,
                             std::function<Vec2(const Vec2&)> divK);

// Regular-grid samples of a scalar field, row-major in x (outer) then y.
struct GridData {
    double x0 = 0.0, y0 = 0.0;  // lower-left sample
    double h = 0.0;             // uniform spacing
    int nx = 0, ny = 0;
    std::vector<double> values;  // values[i*ny + j] = u(x0 + i h, y0 + j h)

    double value_at(int i, int j) const { return values[static_cast<size_t>(i) * ny + j]; }
};

// Bilinear interpolation of tabulated values; gradient by central differences
// of the interpolant. Queries outside coverage throw FieldError.
SolutionField grid_field(const GridData& grid);

// CSV with header "x,y,u", row-major over a regular grid; spacing inferred
// and validated to be uniform within 1e-9.
GridData load_grid_csv(const std::string& path);
void save_grid_csv(const std::string& path, const GridData& grid);

// Tabulates fn on an n x n grid over [lo, hi]^2.
GridData tabulate(const std::function<double(const Vec2&)>& fn, double lo, double hi, int n);

}  // namespace diffshape
