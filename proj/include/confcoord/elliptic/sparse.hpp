#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace confcoord::elliptic {

/// Compressed sparse row matrix, built row by row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t cols) : cols_(cols) { row_start_.push_back(0); }

    /// Appends a row from (column, value) pairs; duplicate columns are summed.
    void append_row(std::vector<std::pair<std::size_t, double>> entries);

    std::size_t rows() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const { return values_.size(); }

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    double entry(std::size_t row, std::size_t col) const;
    std::vector<double> diagonal() const;

    /// Columns and values of one row.
    std::span<const std::size_t> row_columns(std::size_t row) const;
    std::span<const double> row_values(std::size_t row) const;

private:
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> columns_;
    std::vector<double> values_;
};

struct SolverOptions {
    double tolerance = 1e-10;
    int max_iterations = 50000;
};

struct SolverReport {
    int iterations = 0;
    /// ‖D⁻¹(b − Ax)‖₂ / ‖D⁻¹b‖₂ with D the diagonal of A. Boundary rows carry
    /// weight 1 and interior rows weight h², so the norm does not grow with 1/h².
    double residual = 0.0;
    bool converged = false;
    int shrink_count = 0;

    std::string summary() const;
};

/// Stabilized bi-conjugate gradients on the Jacobi-scaled system D⁻¹A x = D⁻¹b.
/// x holds the initial guess on entry. Never throws on non-convergence; the
/// report says whether the tolerance was met.
SolverReport bicgstab(const SparseMatrix& a, std::span<const double> b, std::vector<double>& x,
                      const SolverOptions& options);

} // namespace confcoord::elliptic
