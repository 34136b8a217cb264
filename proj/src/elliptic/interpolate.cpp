#include "confcoord/elliptic/interpolate.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::elliptic {

CubicStencil cubic_stencil(const GridChart& grid, const Point& x)
{
    CubicStencil st;
    const double h = grid.spacing();
    const double slack = 1e-12 * h;
    for (int a = 0; a < grid.dim(); ++a) {
        double t = (x[a] - grid.lower()[a]) / h;
        int last = grid.count(a) - 1;
        if (!(t >= -slack / h && t <= last + slack / h))
            throw ArgumentError("interpolation point outside the grid");
        int cell = std::clamp(static_cast<int>(std::floor(t)), 0, last - 1);
        int s = std::clamp(cell - 1, 0, last - 3);
        st.start[a] = s;
        double u = t - s;
        for (int j = 0; j < 4; ++j) {
            double w = 1.0;
            for (int m = 0; m < 4; ++m)
                if (m != j)
                    w *= (u - m) / (j - m);
            st.weights[a][j] = w;
        }
    }
    return st;
}

double interpolate(const GridChart& grid, const CubicStencil& st, std::span<const double> field, std::size_t stride,
                   std::size_t component)
{
    const int n = grid.dim();
    int total = 1 << (2 * n);
    double sum = 0.0;
    for (int c = 0; c < total; ++c) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int a = 0; a < n; ++a) {
            int j = (c >> (2 * a)) & 3;
            w *= st.weights[a][j];
            idx += static_cast<std::size_t>(st.start[a] + j) * grid.stride(a);
        }
        sum += w * field[idx * stride + component];
    }
    return sum;
}

double interpolate(const GridChart& grid, std::span<const double> field, const Point& x)
{
    return interpolate(grid, cubic_stencil(grid, x), field);
}

} // namespace confcoord::elliptic
