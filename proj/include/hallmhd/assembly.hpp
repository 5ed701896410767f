#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "hallmhd/complex.hpp"
#include "hallmhd/quadrature.hpp"
#include "hallmhd/types.hpp"

namespace hallmhd {

/// Which slot of A(a, b, c) = <a x b, c> holds frozen data. Rows are always
/// the test space of the block equation the matrix appears in:
///   A_omega (D x D):  (a,b) = A(omega, tau_b, tau_a)
///   A_H     (D x C):  (a,b) = A(sigma_b, H, tau_a)
///   AA_H    (C x C):  (a,b) = A(sigma_b, H, sigma_a)
///   A_u     (D x C0): (a,b) = A(u, sigma0_b, tau_a)
///   A_B     (D x C0): (a,b) = A(sigma0_b, B, tau_a)
enum class TrilinearKind { A_omega, A_H, AA_H, A_u, A_B };

std::string_view to_string(TrilinearKind kind);

struct AssemblyOptions {
  int quadrature_points = 0;     // per direction; 0 -> N + 2
  int interpolation_points = 0;  // per sub-interval for canonical DOFs; 0 -> N + 6
  bool exact_symmetry = true;    // symmetrize mass, skew-symmetrize A_omega / AA_H
};

class Assembler {
 public:
  explicit Assembler(const DeRhamComplex& complex, AssemblyOptions options = {});

  const DeRhamComplex& complex() const { return complex_; }
  const AssemblyOptions& options() const { return options_; }
  int quadrature_points() const { return rule_.n; }

  const SparseMatrix& mass(Space space) const;
  SparseMatrix trilinear(TrilinearKind kind, const DiscreteField& frozen) const;

  /// <f, phi_i> for every basis function of a vector space (C, C0, D).
  Vector moments(Space test, const VectorField& f, double t) const;
  /// <g, phi_i> for G or S.
  Vector moments(Space test, const ScalarField& g, double t) const;

  /// Canonical degrees of freedom: edge integrals (C, C0), face fluxes (D).
  Vector interpolate(Space space, const VectorField& f, double t) const;
  /// Point values (G) or cell integrals (S).
  Vector interpolate(Space space, const ScalarField& g, double t) const;
  /// D coefficients of curl(A) obtained as C * interpolate(C, A); divergence-free
  /// to round-off on any mapping.
  Vector interpolate_curl(const VectorField& potential, double t) const;

  /// Physical value of a discrete field at a local point of one element.
  Vec3 evaluate(Space space, const Vector& coefficients, int element, const Vec3& xi) const;
  double evaluate_scalar(Space space, const Vector& coefficients, int element,
                         const Vec3& xi) const;

  /// L2 norm of (field - exact) with an n-point Gauss rule per direction (0 -> N + 4).
  double l2_error(Space space, const Vector& coefficients, const VectorField& exact, double t,
                  int points = 0) const;
  double l2_error(Space space, const Vector& coefficients, const ScalarField& exact, double t,
                  int points = 0) const;

 private:
  struct ElementData {
    std::vector<double> wdet;       // weight * det J
    std::vector<double> inv_t;      // J^{-T}, 9 x q
    std::vector<double> j_over_det; // J / det J, 9 x q
    std::vector<double> inv_det;
    std::vector<Vec3> points;
  };
  struct Pattern {
    SparseMatrix matrix;  // structure with zero values
    std::vector<int> slots;
  };

  const Pattern& pattern(Space rows, Space cols) const;
  /// Mapped basis values at the assembly quadrature points of an element.
  void mapped_values(Space space, int element, std::vector<double>& out) const;
  void frozen_values(const DiscreteField& field, int element, std::vector<double>& out) const;

  template <class LocalFn>
  SparseMatrix assemble(Space rows, Space cols, LocalFn&& local) const;
  template <class LocalFn>
  Vector assemble_vector(Space rows, LocalFn&& local) const;

  const DeRhamComplex& complex_;
  AssemblyOptions options_;
  TensorRule rule_;
  std::array<std::vector<double>, 5> reference_;  // indexed by Space
  std::vector<ElementData> elements_;
  std::array<SparseMatrix, 5> mass_;
  mutable std::mutex pattern_mutex_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Pattern>> patterns_;
};

SparseMatrix mass_matrix(const Assembler& assembler, Space space);
SparseMatrix trilinear_matrix(const Assembler& assembler, TrilinearKind kind,
                              const DiscreteField& frozen);
/// Moments of f against the D basis.
Vector load_vector(const Assembler& assembler, const VectorField& f, double t);
DiscreteField interpolate(const Assembler& assembler, Space space, const VectorField& f,
                          double t);
DiscreteField interpolate(const Assembler& assembler, Space space, const ScalarField& g,
                          double t);

}  // namespace hallmhd
