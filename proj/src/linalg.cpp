#include "hallmhd/linalg.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#ifdef HALLMHD_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

std::string shape(const SparseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

BlockSystem::BlockSystem(std::vector<int> row_dims, std::vector<int> col_dims)
    : row_dims_(std::move(row_dims)), col_dims_(std::move(col_dims)) {
  blocks_.resize(row_dims_.size() * col_dims_.size());
  rhs_.resize(row_dims_.size());
  for (std::size_t r = 0; r < row_dims_.size(); ++r) rhs_[r] = Vector::Zero(row_dims_[r]);
}

void BlockSystem::set(int r, int c, SparseMatrix block) {
  if (r < 0 || r >= block_rows() || c < 0 || c >= block_cols())
    throw ShapeMismatch("block index (" + std::to_string(r) + "," + std::to_string(c) +
                        ") out of range");
  if (block.rows() != row_dims_[r] || block.cols() != col_dims_[c])
    throw ShapeMismatch("block (" + std::to_string(r) + "," + std::to_string(c) + ") is " +
                        shape(block) + ", expected " + std::to_string(row_dims_[r]) + "x" +
                        std::to_string(col_dims_[c]));
  blocks_[r * col_dims_.size() + c] = std::move(block);
}

const std::optional<SparseMatrix>& BlockSystem::block(int r, int c) const {
  return blocks_[r * col_dims_.size() + c];
}

void BlockSystem::set_rhs(int r, Vector segment) {
  if (segment.size() != row_dims_[r])
    throw ShapeMismatch("rhs segment " + std::to_string(r) + " has length " +
                        std::to_string(segment.size()) + ", expected " +
                        std::to_string(row_dims_[r]));
  rhs_[r] = std::move(segment);
}

Vector BlockSystem::multiply(const Vector& x) const {
  int total_cols = 0;
  for (int d : col_dims_) total_cols += d;
  if (x.size() != total_cols) throw ShapeMismatch("multiply: vector length mismatch");
  int total_rows = 0;
  for (int d : row_dims_) total_rows += d;
  Vector y = Vector::Zero(total_rows);
  int ro = 0;
  for (int r = 0; r < block_rows(); ++r) {
    int co = 0;
    for (int c = 0; c < block_cols(); ++c) {
      if (const auto& b = block(r, c))
        y.segment(ro, row_dims_[r]) += *b * x.segment(co, col_dims_[c]);
      co += col_dims_[c];
    }
    ro += row_dims_[r];
  }
  return y;
}

ComposedSystem compose(const BlockSystem& blocks) {
  ComposedSystem out;
  std::vector<int> col_offsets;
  int rows = 0, cols = 0;
  for (int d : blocks.row_dims()) {
    out.row_offsets.push_back(rows);
    rows += d;
  }
  for (int d : blocks.col_dims()) {
    col_offsets.push_back(cols);
    cols += d;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < blocks.block_rows(); ++r)
    for (int c = 0; c < blocks.block_cols(); ++c) {
      const auto& b = blocks.block(r, c);
      if (!b) continue;
      if (b->rows() != blocks.row_dims()[r] || b->cols() != blocks.col_dims()[c])
        throw ShapeMismatch("compose: block (" + std::to_string(r) + "," + std::to_string(c) +
                            ") has shape " + shape(*b));
      for (int i = 0; i < b->outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(*b, i); it; ++it)
          trip.emplace_back(out.row_offsets[r] + it.row(), col_offsets[c] + it.col(), it.value());
    }
  out.matrix.resize(rows, cols);
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  out.matrix.makeCompressed();
  out.rhs.resize(rows);
  for (int r = 0; r < blocks.block_rows(); ++r)
    out.rhs.segment(out.row_offsets[r], blocks.row_dims()[r]) = blocks.rhs(r);
  return out;
}

#ifdef HALLMHD_HAVE_UMFPACK
struct DirectFactorization::Impl {
  // 64-bit indices: the int interface runs out of workspace on the largest step-1 systems.
  Eigen::SparseMatrix<double, Eigen::ColMajor, SuiteSparse_long> matrix;  // UmfPackLU keeps a view
  Eigen::UmfPackLU<Eigen::SparseMatrix<double, Eigen::ColMajor, SuiteSparse_long>> lu;
  bool ok() const { return lu.info() == Eigen::Success; }
  std::string message() const {
    return "UMFPACK factorization failed (status " +
           std::to_string(lu.umfpackFactorizeReturncode()) + ")";
  }
};
#else
struct DirectFactorization::Impl {
  ColMatrix matrix;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  bool ok() const { return lu.info() == Eigen::Success; }
  std::string message() { return "sparse LU failed: " + lu.lastErrorMessage(); }
};
#endif

std::string_view direct_backend() {
#ifdef HALLMHD_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

DirectFactorization::DirectFactorization(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw ShapeMismatch("factorization needs a square matrix, got " + shape(a));
  auto& c = impl_->matrix;
  c = a;
  c.makeCompressed();
#ifdef HALLMHD_HAVE_UMFPACK
  // The saddle-point blocks have a nearly symmetric pattern; the symmetric
  // strategy keeps fill several times lower than the default.
  impl_->lu.umfpackControl()[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
#endif
  impl_->lu.compute(c);
  if (!impl_->ok()) throw SingularMatrix(impl_->message());
}

DirectFactorization::~DirectFactorization() = default;
DirectFactorization::DirectFactorization(DirectFactorization&&) noexcept = default;
DirectFactorization& DirectFactorization::operator=(DirectFactorization&&) noexcept = default;

Vector DirectFactorization::solve(const Vector& b) const {
  Vector x = impl_->lu.solve(b);
  if (!impl_->ok() || !x.allFinite()) throw SingularMatrix("sparse LU solve failed");
  return x;
}

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double nr = (a * x - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

SolveResult solve(const SparseMatrix& a, const Vector& b, const SolverOptions& options) {
  if (a.rows() != a.cols()) throw ShapeMismatch("solve needs a square matrix, got " + shape(a));
  if (b.size() != a.rows()) throw ShapeMismatch("solve: rhs length mismatch");
  SolveResult result;
  if (b.norm() == 0.0) {
    result.x = Vector::Zero(b.size());
    return result;
  }
  if (options.method == SolverMethod::direct) {
    const DirectFactorization lu(a);
    result.x = lu.solve(b);
    result.relative_residual = relative_residual(a, result.x, b);
    for (int s = 0; s < options.refinement_steps && result.relative_residual > options.refine_above; ++s) {
      const Vector r = b - a * result.x;
      result.x += lu.solve(r);
      result.relative_residual = relative_residual(a, result.x, b);
      ++result.iterations;
    }
    if (!result.x.allFinite()) throw SingularMatrix("sparse LU produced non-finite values");
    return result;
  }
  ColMatrix c = a;
  Eigen::BiCGSTAB<ColMatrix, Eigen::IncompleteLUT<double>> solver;
  solver.setTolerance(options.tolerance);
  solver.setMaxIterations(options.max_iterations);
  solver.compute(c);
  if (solver.info() != Eigen::Success) throw SingularMatrix("ILUT preconditioner failed");
  result.x = solver.solve(b);
  result.iterations = static_cast<int>(solver.iterations());
  result.relative_residual = relative_residual(a, result.x, b);
  if (!result.x.allFinite() || result.relative_residual > options.tolerance * 10.0)
    throw NoConvergence(options.max_iterations, result.relative_residual);
  return result;
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace hallmhd
