#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hallmhd/types.hpp"

namespace hallmhd {

/// Grid of optional sparse blocks plus right-hand-side segments. Unset blocks are zero.
class BlockSystem {
 public:
  BlockSystem(std::vector<int> row_dims, std::vector<int> col_dims);

  int block_rows() const { return static_cast<int>(row_dims_.size()); }
  int block_cols() const { return static_cast<int>(col_dims_.size()); }
  const std::vector<int>& row_dims() const { return row_dims_; }
  const std::vector<int>& col_dims() const { return col_dims_; }

  void set(int r, int c, SparseMatrix block);
  const std::optional<SparseMatrix>& block(int r, int c) const;
  void set_rhs(int r, Vector segment);
  const Vector& rhs(int r) const { return rhs_[r]; }

  /// Blockwise product with a monolithic vector (used as an independent check).
  Vector multiply(const Vector& x) const;

 private:
  std::vector<int> row_dims_, col_dims_;
  std::vector<std::optional<SparseMatrix>> blocks_;
  std::vector<Vector> rhs_;
};

struct ComposedSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> row_offsets;
};

/// Monolithic matrix and right-hand side in block order. Throws ShapeMismatch.
ComposedSystem compose(const BlockSystem& blocks);

enum class SolverMethod { direct, iterative };

struct SolverOptions {
  SolverMethod method = SolverMethod::direct;
  double tolerance = 1e-12;   // iterative: target relative residual
  int max_iterations = 2000;  // iterative
  int refinement_steps = 3;   // direct: iterative refinement sweeps if needed
  double refine_above = 1e-13;
};

struct SolveResult {
  Vector x;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Name of the sparse direct backend compiled in ("umfpack" or "eigen-sparselu").
std::string_view direct_backend();

/// Sparse LU factorization of a square matrix; immutable once built.
class DirectFactorization {
 public:
  explicit DirectFactorization(const SparseMatrix& a);
  ~DirectFactorization();
  DirectFactorization(DirectFactorization&&) noexcept;
  DirectFactorization& operator=(DirectFactorization&&) noexcept;

  Vector solve(const Vector& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws SingularMatrix, NoConvergence, or ShapeMismatch.
SolveResult solve(const SparseMatrix& a, const Vector& b, const SolverOptions& options = {});

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);

/// Coordinate Matrix Market export.
void write_matrix_market(const SparseMatrix& a, const std::string& path);

}  // namespace hallmhd
