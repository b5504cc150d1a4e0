#pragma once

/** @file krylov.hpp
    @brief Instrumented preconditioned conjugate gradient and the CG/Lanczos
           identification that turns its coefficients into Ritz values.
*/

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "pcgbound/eigen.hpp"
#include "pcgbound/linalg.hpp"
#include "pcgbound/spectrum.hpp"

namespace pcgb {

/// z = M^{-1} r
using LinearOperator = std::function<void(std::span<const double> r, std::span<double> z)>;

enum class StopMode {
  residual,      ///< sqrt(r_m^T z_m / r_0^T z_0) <= tol
  energy_error,  ///< ||u* - u_m||_A / ||u* - u_0||_A <= tol, needs a reference solution
};

std::string to_string(StopMode mode);
StopMode parse_stop_mode(const std::string& name);

struct StopRule {
  StopMode mode = StopMode::residual;
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;

  void validate() const;
};

/// Per-iteration history; entry j belongs to iteration j + 1.
struct CGTrace {
  Vector alpha;
  Vector beta;
  Vector residual_norm;  ///< relative preconditioned residual
  Vector energy_error;   ///< relative A-norm error, empty without reference

  std::size_t iterations() const { return alpha.size(); }

  /// iter,alpha,beta,resnorm,anorm_err with 17 significant digits.
  void write_csv(std::ostream& out) const;
};

/// stagnated: p^T A p or r^T z fell to roundoff level (<= 0 within 1e-10 of the
/// operand norms) before the stop rule was met; the iterate is as good as it gets.
enum class CGStatus { converged, max_iterations, stopped_by_observer, stagnated };
std::string to_string(CGStatus status);

enum class ObserverAction { proceed, stop };
using CGObserver = std::function<ObserverAction(const CGTrace&)>;

struct CGResult {
  Vector solution;
  CGTrace trace;
  CGStatus status = CGStatus::converged;

  bool converged() const { return status == CGStatus::converged; }
};

struct PCGOptions {
  StopRule stop;
  LinearOperator preconditioner;  ///< empty means M = I
  Vector x0;                      ///< empty means zero
  Vector reference;               ///< u*, enables the A-norm error history
  CGObserver observer;            ///< called once per iteration
};

/**
 * Preconditioned CG on A x = b. Throws std::runtime_error on breakdown
 * (p^T A p <= 0 or r^T z < 0 beyond roundoff, i.e. a non-SPD operator or preconditioner).
 * Hitting max_iterations is not an error: the partial trace is returned with
 * status max_iterations.
 */
CGResult pcg(const SparseMatrix& A, std::span<const double> b, const PCGOptions& options);

/// Lanczos matrix of the first @p m iterations:
/// T(0,0) = 1/alpha_0, T(j,j) = 1/alpha_j + beta_{j-1}/alpha_{j-1}, T(j,j+1) = sqrt(beta_j)/alpha_j.
SymTridiagonal lanczos_tridiagonal(const CGTrace& trace, std::size_t m);
SymTridiagonal lanczos_tridiagonal(const CGTrace& trace);

/// Eigenvalues of the Lanczos matrix (ascending); throws if any is non-positive.
Spectrum ritz_values(const CGTrace& trace, std::size_t m);
Spectrum ritz_values(const CGTrace& trace);

}  // namespace pcgb
