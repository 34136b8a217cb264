#include "confcoord/elliptic/stencil.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>

namespace confcoord::elliptic {

std::vector<std::vector<double>> fd_weights(std::span<const double> nodes, double x0, int max_order)
{
    const int n = static_cast<int>(nodes.size());
    if (n == 0 || max_order < 0 || max_order >= n)
        throw ArgumentError("fd_weights needs more nodes than the derivative order");
    // c[k][j]: weight of node j for derivative k.
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, max_order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

namespace {

struct Window {
    int start = 0;
    std::vector<double> weights;
};

// Weights on consecutive nodes start.. for derivative `order` at node m.
Window window(int m, int count, int width, int order, bool prefer_central)
{
    if (count < width)
        throw ArgumentError("grid axis too short for the stencil");
    int half = width / 2;
    int start = m - half;
    if (prefer_central && width % 2 == 0 && m - (half - 1) >= 0 && m + (half - 1) < count) {
        // symmetric odd window fits: use it
        width -= 1;
        start = m - (width / 2);
    }
    start = std::clamp(start, 0, count - width);
    std::vector<double> x(width);
    for (int i = 0; i < width; ++i)
        x[i] = static_cast<double>(start + i - m);
    auto w = fd_weights(x, 0.0, order);
    return {start, w[order]};
}

} // namespace

double derivative4(const GridChart& grid, std::span<const double> u, std::size_t idx, int axis)
{
    Index m = grid.multi(idx);
    Window w = window(m[axis], grid.count(axis), 5, 1, false);
    double s = 0.0;
    Index k = m;
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        k[axis] = w.start + static_cast<int>(i);
        s += w.weights[i] * u[grid.index(k)];
    }
    return s / grid.spacing();
}

double second_derivative4(const GridChart& grid, std::span<const double> u, std::size_t idx, int a, int b)
{
    Index m = grid.multi(idx);
    double h = grid.spacing();
    if (a == b) {
        Window w = window(m[a], grid.count(a), 6, 2, true);
        double s = 0.0;
        Index k = m;
        for (std::size_t i = 0; i < w.weights.size(); ++i) {
            k[a] = w.start + static_cast<int>(i);
            s += w.weights[i] * u[grid.index(k)];
        }
        return s / (h * h);
    }
    Window w = window(m[a], grid.count(a), 5, 1, false);
    double s = 0.0;
    Index k = m;
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        k[a] = w.start + static_cast<int>(i);
        s += w.weights[i] * derivative4(grid, u, grid.index(k), b);
    }
    return s / h;
}

std::vector<double> derivative_field(const GridChart& grid, std::span<const double> u, int axis)
{
    std::vector<double> d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        d[i] = derivative4(grid, u, i, axis);
    return d;
}

} // namespace confcoord::elliptic
