#pragma once

#include <stdexcept>
#include <string>

namespace hallmhd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveJacobian : public Error {
 public:
  NonPositiveJacobian(int element, double det, const std::string& where)
      : Error("non-positive Jacobian determinant " + std::to_string(det) + " in element " +
              std::to_string(element) + " at " + where),
        element_(element),
        det_(det) {}
  int element() const { return element_; }
  double determinant() const { return det_; }

 private:
  int element_;
  double det_;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int max_iterations, double residual)
      : Error("iterative solver did not converge in " + std::to_string(max_iterations) +
              " iterations (relative residual " + std::to_string(residual) + ")"),
        max_iterations_(max_iterations),
        residual_(residual) {}
  int max_iterations() const { return max_iterations_; }
  double residual() const { return residual_; }

 private:
  int max_iterations_;
  double residual_;
};

class ResidualTooLarge : public Error {
 public:
  ResidualTooLarge(const std::string& system, double residual, double limit)
      : Error(system + ": relative residual " + std::to_string(residual) + " exceeds " +
              std::to_string(limit)),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ConservationViolated : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error("config error at '" + path + "': " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class SelfCheckFailed : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written, or parsed (checkpoints, VTK, output directories).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hallmhd
