#include "confcoord/elliptic/operator.hpp"

#include "confcoord/errors.hpp"
#include "confcoord/parallel.hpp"
#include "confcoord/tensorcalc/curvature.hpp"

#include <cmath>
#include <sstream>

namespace confcoord::elliptic {

namespace {

std::string describe(const Point& x, int n)
{
    std::ostringstream os;
    os << "(";
    for (int a = 0; a < n; ++a)
        os << (a ? ", " : "") << x[a];
    os << ")";
    return os.str();
}

} // namespace

CoefficientField metric_coefficients(const MetricSpec& g, const GridChart& grid, bool with_potential)
{
    const int n = grid.dim();
    if (g.dim() != n)
        throw DimensionError("metric and grid dimensions differ");
    CoefficientField c;
    c.dim = n;
    c.flux.assign(grid.size() * n * n, 0.0);
    c.inv_volume.assign(grid.size(), 0.0);
    if (with_potential)
        c.potential.assign(grid.size(), 0.0);
    const double cn = tensorcalc::conformal_coupling(n);

    parallel_for(grid.size(), [&](std::size_t i) {
        Point x = grid.point(i);
        Eigen::MatrixXd m(n, n);
        try {
            if (with_potential) {
                auto geo = tensorcalc::geometry_from_jets(g.jets(x, 2), g.signature(), tensorcalc::Depth::Basic);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        m(a, b) = geo.g[a * n + b].value();
                c.potential[i] = cn * geo.scalar.value();
            } else {
                m = g.values(x);
            }
            g.validate(m);
        } catch (const DegenerateMetricError& e) {
            throw DegenerateMetricError(std::string(e.what()) + " at node " + std::to_string(i) + " " +
                                        describe(x, n));
        } catch (const SingularityError& e) {
            throw DegenerateMetricError("metric '" + g.name() + "' is singular at node " + std::to_string(i) + " " +
                                        describe(x, n) + ": " + e.what());
        }
        double vol = std::sqrt(std::abs(m.determinant()));
        Eigen::MatrixXd inv = m.inverse();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                c.flux[(i * n + a) * n + b] = vol * inv(a, b);
        c.inv_volume[i] = 1.0 / vol;
    });
    return c;
}

CoefficientField rescaled_coefficients(const MetricSpec& g, const GridChart& grid, std::span<const double> f)
{
    if (f.size() != grid.size())
        throw ArgumentError("conformal factor sample count does not match the grid");
    const int n = grid.dim();
    CoefficientField c = metric_coefficients(g, grid, false);
    // (f^{p-2} g): |g̃|^{1/2} g̃^{ab} = f^2 |g|^{1/2} g^{ab}, |g̃|^{-1/2} = f^{-p} |g|^{-1/2}.
    const double p = tensorcalc::yamabe_exponent(n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(f[i] > 0.0))
            throw ArgumentError("conformal factor must be positive at every node");
        double f2 = f[i] * f[i];
        for (int k = 0; k < n * n; ++k)
            c.flux[i * n * n + k] *= f2;
        c.inv_volume[i] *= std::pow(f[i], -p);
    }
    return c;
}

DiscreteOperator assemble_from_coefficients(const GridChart& grid, const CoefficientField& c)
{
    const int n = grid.dim();
    const double h = grid.spacing();
    DiscreteOperator op{grid, SparseMatrix(grid.size())};
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(grid.size());
    auto flux = [&](std::size_t node, int a, int b) { return c.flux[(node * n + a) * n + b]; };

    parallel_for(grid.size(), [&](std::size_t i) {
        auto& row = rows[i];
        if (grid.on_boundary(i)) {
            row.emplace_back(i, 1.0);
            return;
        }
        row.reserve(8 * n * n);
        const double w = c.inv_volume[i] / h;
        for (int a = 0; a < n; ++a) {
            for (int s : {+1, -1}) {
                std::size_t j = s > 0 ? i + grid.stride(a) : i - grid.stride(a);
                // Outward flux through the face between i and j enters with sign -s.
                double face_aa = 0.5 * (flux(i, a, a) + flux(j, a, a));
                row.emplace_back(j, -w * face_aa / h);
                row.emplace_back(i, w * face_aa / h);
                for (int b = 0; b < n; ++b) {
                    if (b == a)
                        continue;
                    double face_ab = 0.5 * (flux(i, a, b) + flux(j, a, b));
                    double k = -s * w * face_ab / (4.0 * h);
                    std::size_t sb = grid.stride(b);
                    row.emplace_back(i + sb, k);
                    row.emplace_back(i - sb, -k);
                    row.emplace_back(j + sb, k);
                    row.emplace_back(j - sb, -k);
                }
            }
        }
        if (!c.potential.empty())
            row.emplace_back(i, c.potential[i]);
    });
    for (auto& row : rows)
        op.matrix.append_row(std::move(row));
    return op;
}

DiscreteOperator assemble_operator(const MetricSpec& g, const GridChart& grid)
{
    return assemble_from_coefficients(grid, metric_coefficients(g, grid, true));
}

DiscreteOperator assemble_rescaled_laplacian(const MetricSpec& g, const GridChart& grid,
                                             std::span<const double> f)
{
    return assemble_from_coefficients(grid, rescaled_coefficients(g, grid, f));
}

std::vector<double> apply_interior(const DiscreteOperator& op, std::span<const double> u)
{
    if (u.size() != op.grid.size())
        throw ArgumentError("field size does not match the operator");
    std::vector<double> r = op.matrix.multiply(u);
    for (std::size_t i = 0; i < r.size(); ++i)
        if (op.grid.on_boundary(i))
            r[i] = 0.0;
    return r;
}

std::vector<double> sample(const GridChart& grid, const BoundaryFn& fn)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = fn(grid.point(i));
    return v;
}

DirichletResult solve_dirichlet(const DiscreteOperator& op, std::span<const double> data,
                                std::span<const double> rhs, const SolverOptions& options)
{
    const GridChart& grid = op.grid;
    if (data.size() != grid.size())
        throw ArgumentError("boundary data size does not match the grid");
    if (!rhs.empty() && rhs.size() != grid.size())
        throw ArgumentError("right-hand side size does not match the grid");
    std::vector<double> b(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(data[i]))
            throw ArgumentError("non-finite boundary data at node " + std::to_string(i));
        b[i] = grid.on_boundary(i) ? data[i] : (rhs.empty() ? 0.0 : rhs[i]);
    }
    DirichletResult result{{grid, std::vector<double>(data.begin(), data.end())}, {}};
    result.report = bicgstab(op.matrix, b, result.solution.values, options);
    if (!result.report.converged)
        throw SolverFailure("Dirichlet solve failed: " + result.report.summary());
    return result;
}

DirichletResult solve_dirichlet(const DiscreteOperator& op, const BoundaryFn& data, std::span<const double> rhs,
                                const SolverOptions& options)
{
    auto v = sample(op.grid, data);
    return solve_dirichlet(op, std::span<const double>(v), rhs, options);
}

} // namespace confcoord::elliptic
