#include "diffshape/fields.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace diffshape {

SolutionField benchmark_solution() {
    SolutionField f;
    f.u = [](const Vec2& x) { return 0.25 * (1.0 - x.norm2()); };
    f.grad_u = [](const Vec2& x) { return Vec2{-0.5 * x.x, -0.5 * x.y}; };
    return f;
}

PDECoefficients benchmark_coefficients() {
    PDECoefficients c;
    const Mat2 s = Mat2::isotropic(std::sqrt(2.0));
    c.mu = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    c.sigma = [s](const Vec2&) { return s; };
    c.f = [](const Vec2&, double) { return 1.0; };
    c.df_du = [](const Vec2&, double) { return 0.0; };
    c.g = [](const Vec2&) { return 0.0; };
    c.grad_g = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    c.mu_is_zero = true;
    c.sigma_is_const = true;
    c.sigma_const = s;
    c.intensity_is_zero = true;
    return c;
}

TrackingData benchmark_tracking() {
    TrackingData t;
    t.u_dag = [](const Vec2& x) { return x.x * (1.0 - x.x) * x.y * (1.0 - x.y); };
    return t;
}

namespace {

Mat2 cholesky_lower(const Mat2& K, const Vec2& x) {
    const bool symmetric = std::abs(K.b - K.c) <= 1e-12 * (1.0 + K.max_abs());
    if (!symmetric || K.a <= 0.0) {
        std::ostringstream msg;
        msg << "diffusion matrix not SPD at (" << x.x << "," << x.y << ")";
        throw CoefficientError(msg.str());
    }
    const double l11 = std::sqrt(K.a);
    const double l21 = K.c / l11;
    const double rest = K.d - l21 * l21;
    if (rest <= 0.0) {
        std::ostringstream msg;
        msg << "diffusion matrix not SPD at (" << x.x << "," << x.y << ")";
        throw CoefficientError(msg.str());
    }
    return Mat2{l11, 0.0, l21, std::sqrt(rest)};
}

}  // namespace

std::pair<std::function<Vec2(const Vec2&)>, std::function<Mat2(const Vec2&)>>
convert_convection_diffusion(std::function<Mat2(const Vec2&)> K,
                             std::function<Vec2(const Vec2&)> v,
                             std::function<Vec2(const Vec2&)> divK) {
    auto mu = [v = std::move(v), divK = std::move(divK)](const Vec2& x) {
        return v(x) + divK(x);
    };
    auto sigma = [K = std::move(K)](const Vec2& x) {
        return cholesky_lower(K(x), x) * std::sqrt(2.0);
    };
    return {std::move(mu), std::move(sigma)};
}

namespace {

struct Bilinear {
    GridData grid;

    // Interpolated value; throws when [x-pad, x+pad] leaves the covered box.
    double interp(const Vec2& p, double pad) const {
        const double xmax = grid.x0 + (grid.nx - 1) * grid.h;
        const double ymax = grid.y0 + (grid.ny - 1) * grid.h;
        if (p.x - pad < grid.x0 || p.x + pad > xmax || p.y - pad < grid.y0 || p.y + pad > ymax) {
            std::ostringstream msg;
            msg << "grid field query (" << p.x << "," << p.y << ") outside coverage ["
                << grid.x0 << "," << xmax << "]x[" << grid.y0 << "," << ymax << "]";
            throw FieldError(msg.str());
        }
        double fx = (p.x - grid.x0) / grid.h;
        double fy = (p.y - grid.y0) / grid.h;
        int i = std::min(static_cast<int>(fx), grid.nx - 2);
        int j = std::min(static_cast<int>(fy), grid.ny - 2);
        i = std::max(i, 0);
        j = std::max(j, 0);
        const double tx = fx - i;
        const double ty = fy - j;
        return (1 - tx) * (1 - ty) * grid.value_at(i, j) +
               tx * (1 - ty) * grid.value_at(i + 1, j) +
               (1 - tx) * ty * grid.value_at(i, j + 1) +
               tx * ty * grid.value_at(i + 1, j + 1);
    }
};

}  // namespace

SolutionField grid_field(const GridData& grid) {
    if (grid.nx < 2 || grid.ny < 2 || grid.h <= 0.0 ||
        grid.values.size() != static_cast<size_t>(grid.nx) * grid.ny) {
        throw FieldError("grid_field: malformed grid data");
    }
    auto interp = std::make_shared<Bilinear>(Bilinear{grid});
    const double h = grid.h;
    SolutionField f;
    f.u = [interp](const Vec2& p) { return interp->interp(p, 0.0); };
    f.grad_u = [interp, h](const Vec2& p) {
        const double ux = (interp->interp({p.x + h, p.y}, 0.0) -
                           interp->interp({p.x - h, p.y}, 0.0)) / (2.0 * h);
        const double uy = (interp->interp({p.x, p.y + h}, 0.0) -
                           interp->interp({p.x, p.y - h}, 0.0)) / (2.0 * h);
        return Vec2{ux, uy};
    };
    return f;
}

GridData load_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FieldError("cannot open grid CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw FieldError("empty grid CSV: " + path);
    // tolerate a BOM or whitespace around the header
    if (line.find("x") == std::string::npos || line.find("u") == std::string::npos) {
        throw FieldError("grid CSV missing 'x,y,u' header: " + path);
    }
    std::vector<double> xs, ys, us;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(row, cell, ',')) throw FieldError("short row in grid CSV: " + path);
            vals[k] = std::stod(cell);
        }
        xs.push_back(vals[0]);
        ys.push_back(vals[1]);
        us.push_back(vals[2]);
    }
    if (xs.size() < 4) throw FieldError("grid CSV too small: " + path);

    // Row-major: y varies fastest within a block of constant x.
    size_t ny = 1;
    while (ny < xs.size() && xs[ny] == xs[0]) ++ny;
    if (ny < 2 || xs.size() % ny != 0) throw FieldError("grid CSV is not a regular grid: " + path);
    const size_t nx = xs.size() / ny;
    if (nx < 2) throw FieldError("grid CSV is not a regular grid: " + path);

    const double h = ys[1] - ys[0];
    const double hx = xs[ny] - xs[0];
    if (h <= 0.0 || std::abs(hx - h) > 1e-9) {
        throw FieldError("grid CSV spacing is not uniform: " + path);
    }
    GridData g;
    g.x0 = xs[0];
    g.y0 = ys[0];
    g.h = h;
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    g.values.resize(xs.size());
    for (size_t i = 0; i < nx; ++i) {
        for (size_t j = 0; j < ny; ++j) {
            const size_t r = i * ny + j;
            if (std::abs(xs[r] - (g.x0 + i * h)) > 1e-9 || std::abs(ys[r] - (g.y0 + j * h)) > 1e-9) {
                throw FieldError("grid CSV spacing is not uniform: " + path);
            }
            g.values[r] = us[r];
        }
    }
    return g;
}

void save_grid_csv(const std::string& path, const GridData& grid) {
    std::ofstream out(path);
    if (!out) throw FieldError("cannot write grid CSV: " + path);
    out << "x,y,u\n";
    out.precision(17);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            out << grid.x0 + i * grid.h << ',' << grid.y0 + j * grid.h << ','
                << grid.value_at(i, j) << '\n';
        }
    }
}

GridData tabulate(const std::function<double(const Vec2&)>& fn, double lo, double hi, int n) {
    GridData g;
    g.x0 = lo;
    g.y0 = lo;
    g.h = (hi - lo) / (n - 1);
    g.nx = n;
    g.ny = n;
    g.values.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g.values[static_cast<size_t>(i) * n + j] = fn({lo + i * g.h, lo + j * g.h});
        }
    }
    return g;
}

}  // namespace diffshape
