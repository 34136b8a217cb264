#include "confcoord/elliptic/grid.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confcoord::elliptic {

GridChart GridChart::uniform(int dim, const Point& lo, double spacing, const Index& count, int min_count)
{
    if (dim < 1 || dim > 4)
        throw ArgumentError("grid dimension must be in 1..4");
    if (!(spacing > 0.0))
        throw ArgumentError("grid spacing must be positive");
    GridChart g;
    g.dim_ = dim;
    g.h_ = spacing;
    g.lo_ = lo;
    g.count_ = count;
    std::size_t s = 1;
    for (int a = dim - 1; a >= 0; --a) {
        if (count[a] < min_count)
            throw ArgumentError("grid needs at least " + std::to_string(min_count) + " nodes per axis");
        g.stride_[a] = s;
        s *= static_cast<std::size_t>(count[a]);
    }
    g.size_ = s;
    for (int a = 0; a < dim; ++a)
        g.center_[a] = lo[a] + 0.5 * spacing * (count[a] - 1);
    return g;
}

GridChart GridChart::box(int dim, const Point& center, double half_width, int resolution)
{
    if (resolution < kMinResolution || resolution % 2 == 0)
        throw ArgumentError("grid resolution must be odd and >= " + std::to_string(kMinResolution));
    if (!(half_width > 0.0))
        throw ArgumentError("grid half width must be positive");
    Point lo{};
    Index count{};
    for (int a = 0; a < dim; ++a) {
        lo[a] = center[a] - half_width;
        count[a] = resolution;
    }
    GridChart g = uniform(dim, lo, 2.0 * half_width / (resolution - 1), count, kMinResolution);
    g.center_ = center;
    return g;
}

GridChart GridChart::half_box(int dim, const Point& center, double half_width, int resolution)
{
    if (resolution % 2 == 0 || (resolution + 1) / 2 < kMinResolution)
        throw ArgumentError("half-box resolution must be odd with >= " + std::to_string(kMinResolution) +
                            " nodes on the normal axis");
    if (!(half_width > 0.0))
        throw ArgumentError("grid half width must be positive");
    Point lo{};
    Index count{};
    for (int a = 0; a < dim; ++a) {
        lo[a] = center[a] - half_width;
        count[a] = resolution;
    }
    lo[dim - 1] = center[dim - 1];
    count[dim - 1] = (resolution + 1) / 2;
    GridChart g = uniform(dim, lo, 2.0 * half_width / (resolution - 1), count, kMinResolution);
    g.center_ = center;
    g.half_ = true;
    return g;
}

Point GridChart::upper() const
{
    Point p = lo_;
    for (int a = 0; a < dim_; ++a)
        p[a] += h_ * (count_[a] - 1);
    return p;
}

Index GridChart::multi(std::size_t idx) const
{
    Index m{};
    for (int a = 0; a < dim_; ++a) {
        m[a] = static_cast<int>(idx / stride_[a]);
        idx %= stride_[a];
    }
    return m;
}

std::size_t GridChart::index(const Index& m) const
{
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a)
        idx += static_cast<std::size_t>(m[a]) * stride_[a];
    return idx;
}

Point GridChart::point(const Index& m) const
{
    Point p{};
    for (int a = 0; a < dim_; ++a)
        p[a] = lo_[a] + h_ * m[a];
    return p;
}

Point GridChart::point(std::size_t idx) const { return point(multi(idx)); }

int GridChart::boundary_distance(std::size_t idx) const
{
    Index m = multi(idx);
    int d = count_[0];
    for (int a = 0; a < dim_; ++a)
        d = std::min({d, m[a], count_[a] - 1 - m[a]});
    return d;
}

bool GridChart::on_boundary(std::size_t idx) const { return boundary_distance(idx) == 0; }

std::size_t GridChart::center_index() const
{
    Index m{};
    for (int a = 0; a < dim_; ++a)
        m[a] = static_cast<int>(std::lround((center_[a] - lo_[a]) / h_));
    return index(m);
}

} // namespace confcoord::elliptic
