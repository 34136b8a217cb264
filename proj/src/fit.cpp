#include "confcoord/fit.hpp"

#include "confcoord/errors.hpp"

#include <cmath>

namespace confcoord {

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw ArgumentError("slope fit needs matching samples, at least two");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw ArgumentError("slope fit needs positive samples");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double d = n * sxx - sx * sx;
    if (d == 0.0)
        throw ArgumentError("slope fit needs distinct abscissae");
    return (n * sxy - sx * sy) / d;
}

} // namespace confcoord
