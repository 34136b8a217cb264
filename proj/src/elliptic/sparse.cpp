#include "confcoord/elliptic/sparse.hpp"

#include "confcoord/errors.hpp"
#include "confcoord/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confcoord::elliptic {

void SparseMatrix::append_row(std::vector<std::pair<std::size_t, double>> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    std::size_t begin = columns_.size();
    for (const auto& [c, v] : entries) {
        if (c >= cols_)
            throw ArgumentError("sparse column out of range");
        if (columns_.size() > begin && columns_.back() == c)
            values_.back() += v;
        else {
            columns_.push_back(c);
            values_.push_back(v);
        }
    }
    row_start_.push_back(columns_.size());
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    parallel_for(rows(), [&](std::size_t r) {
        double s = 0.0;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k)
            s += values_[k] * x[columns_[k]];
        y[r] = s;
    });
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(rows());
    multiply(x, y);
    return y;
}

double SparseMatrix::entry(std::size_t row, std::size_t col) const
{
    for (std::size_t k = row_start_[row]; k < row_start_[row + 1]; ++k)
        if (columns_[k] == col)
            return values_[k];
    return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const
{
    std::vector<double> d(rows());
    for (std::size_t r = 0; r < rows(); ++r)
        d[r] = entry(r, r);
    return d;
}

std::span<const std::size_t> SparseMatrix::row_columns(std::size_t row) const
{
    return {columns_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

std::span<const double> SparseMatrix::row_values(std::size_t row) const
{
    return {values_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

std::string SolverReport::summary() const
{
    std::ostringstream os;
    os << (converged ? "converged" : "not converged") << " after " << iterations
       << " iterations, residual " << residual << ", shrinks " << shrink_count;
    return os.str();
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace

SolverReport bicgstab(const SparseMatrix& a, std::span<const double> b, std::vector<double>& x,
                      const SolverOptions& options)
{
    const std::size_t n = a.rows();
    if (b.size() != n || x.size() != n)
        throw ArgumentError("bicgstab size mismatch");
    std::vector<double> dinv = a.diagonal();
    for (double& d : dinv) {
        if (d == 0.0)
            throw SolverFailure("zero diagonal entry in operator");
        d = 1.0 / d;
    }
    auto scaled_apply = [&](std::span<const double> v, std::span<double> out) {
        a.multiply(v, out);
        for (std::size_t i = 0; i < n; ++i)
            out[i] *= dinv[i];
    };

    std::vector<double> bs(n);
    for (std::size_t i = 0; i < n; ++i)
        bs[i] = b[i] * dinv[i];
    double bnorm = norm(bs);
    SolverReport report;
    if (bnorm == 0.0)
        bnorm = 1.0;

    std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n);
    auto relative = [&](std::span<const double> rs) { return norm(rs) / bnorm; };
    auto true_residual = [&]() {
        scaled_apply(x, r);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = bs[i] - r[i];
        return relative(r);
    };

    report.residual = true_residual();
    if (report.residual <= options.tolerance) {
        report.converged = true;
        return report;
    }
    // Restarts on breakdown reuse the current residual as the shadow vector.
    int restarts = 0;
    while (report.iterations < options.max_iterations) {
        rhat = r;
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        bool breakdown = false;
        while (report.iterations < options.max_iterations) {
            double rho_new = dot(rhat, r);
            if (rho_new == 0.0 || !std::isfinite(rho_new)) {
                breakdown = true;
                break;
            }
            double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (std::size_t i = 0; i < n; ++i)
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            scaled_apply(p, v);
            double denom = dot(rhat, v);
            if (denom == 0.0 || !std::isfinite(denom)) {
                breakdown = true;
                break;
            }
            alpha = rho / denom;
            for (std::size_t i = 0; i < n; ++i)
                s[i] = r[i] - alpha * v[i];
            ++report.iterations;
            if (relative(s) <= options.tolerance) {
                for (std::size_t i = 0; i < n; ++i)
                    x[i] += alpha * p[i];
                break;
            }
            scaled_apply(s, t);
            double tt = dot(t, t);
            omega = tt == 0.0 ? 0.0 : dot(t, s) / tt;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i] + omega * s[i];
                r[i] = s[i] - omega * t[i];
            }
            if (relative(r) <= options.tolerance)
                break;
            if (omega == 0.0) {
                breakdown = true;
                break;
            }
        }
        report.residual = true_residual();
        if (report.residual <= options.tolerance) {
            report.converged = true;
            return report;
        }
        if (!std::isfinite(report.residual))
            return report;
        if (breakdown && ++restarts > 20)
            return report;
    }
    return report;
}

} // namespace confcoord::elliptic
