#include "pcgbound/krylov.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "pcgbound/io.hpp"

namespace pcgb {

std::string to_string(StopMode mode) { return mode == StopMode::residual ? "residual" : "anorm"; }

StopMode parse_stop_mode(const std::string& name)
{
  if (name == "residual")
    return StopMode::residual;
  if (name == "anorm" || name == "energy" || name == "error")
    return StopMode::energy_error;
  throw std::invalid_argument("unknown stop mode '" + name + "' (expected residual or anorm)");
}

void StopRule::validate() const
{
  if (!(tolerance > 0.0 && tolerance < 1.0))
    throw std::invalid_argument("StopRule: tolerance must lie in (0, 1)");
  if (max_iterations == 0)
    throw std::invalid_argument("StopRule: max_iterations must be positive");
}

std::string to_string(CGStatus status)
{
  switch (status) {
    case CGStatus::converged: return "converged";
    case CGStatus::max_iterations: return "max_iterations";
    case CGStatus::stopped_by_observer: return "stopped_by_observer";
    case CGStatus::stagnated: return "stagnated";
  }
  return "converged";
}

void CGTrace::write_csv(std::ostream& out) const
{
  out << "iter,alpha,beta,resnorm,anorm_err\n";
  for (std::size_t j = 0; j < iterations(); ++j) {
    out << j + 1 << ',' << format_double(alpha[j]) << ',' << format_double(beta[j]) << ','
        << format_double(residual_norm[j]) << ',';
    if (j < energy_error.size())
      out << format_double(energy_error[j]);
    out << '\n';
  }
}

namespace {

double energy_norm(const SparseMatrix& A, std::span<const double> ref, std::span<const double> x, Vector& work,
                   Vector& Awork)
{
  for (std::size_t i = 0; i < x.size(); ++i)
    work[i] = ref[i] - x[i];
  A.multiply(work, Awork);
  return std::sqrt(std::max(0.0, dot(work, Awork)));
}

}  // namespace

CGResult pcg(const SparseMatrix& A, std::span<const double> b, const PCGOptions& options)
{
  options.stop.validate();
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n)
    throw std::invalid_argument("pcg: dimension mismatch");
  if (!options.x0.empty() && options.x0.size() != n)
    throw std::invalid_argument("pcg: initial guess has wrong length");
  const bool track_error = !options.reference.empty();
  if (track_error && options.reference.size() != n)
    throw std::invalid_argument("pcg: reference solution has wrong length");
  if (options.stop.mode == StopMode::energy_error && !track_error)
    throw std::invalid_argument("pcg: A-norm error stopping needs a reference solution");

  CGResult result;
  Vector& x = result.solution;
  x = options.x0.empty() ? Vector(n, 0.0) : options.x0;
  CGTrace& trace = result.trace;

  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    if (options.preconditioner)
      options.preconditioner(r, z);
    else
      std::copy(r.begin(), r.end(), z.begin());
  };

  Vector r = A.multiply(x);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - r[i];
  Vector z(n);
  precondition(r, z);
  double rz = dot(r, z);
  if (rz < 0.0)
    throw std::runtime_error("pcg: preconditioner is not positive definite");
  const double rz0 = rz;

  Vector work(n), Awork(n);
  double err0 = 0.0;
  if (track_error)
    err0 = energy_norm(A, options.reference, x, work, Awork);

  const bool already_solved = options.stop.mode == StopMode::energy_error ? err0 == 0.0 : rz0 == 0.0;
  if (already_solved) {
    result.status = CGStatus::converged;
    return result;
  }

  Vector p = z;
  Vector q(n);
  constexpr double roundoff = 1e-10;
  result.status = CGStatus::max_iterations;
  for (std::size_t it = 0; it < options.stop.max_iterations; ++it) {
    A.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0) && std::abs(pq) <= roundoff * norm2(p) * norm2(q)) {
      result.status = CGStatus::stagnated;
      break;
    }
    if (!(pq > 0.0))
      throw std::runtime_error("pcg: breakdown, non-positive curvature p^T A p = " + std::to_string(pq) +
                               " at iteration " + std::to_string(it + 1));
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    precondition(r, z);
    const double rz_new = dot(r, z);
    if (rz_new < 0.0 && -rz_new <= roundoff * norm2(r) * norm2(z)) {
      // the update is already applied; keep it but record no coefficients
      result.status = CGStatus::stagnated;
      break;
    }
    if (rz_new < 0.0)
      throw std::runtime_error("pcg: breakdown, preconditioner is not positive definite");
    const double beta = rz_new / rz;
    rz = rz_new;

    trace.alpha.push_back(alpha);
    trace.beta.push_back(beta);
    trace.residual_norm.push_back(rz0 > 0.0 ? std::sqrt(rz_new / rz0) : 0.0);
    if (track_error)
      trace.energy_error.push_back(err0 > 0.0 ? energy_norm(A, options.reference, x, work, Awork) / err0 : 0.0);

    const double measure =
        options.stop.mode == StopMode::energy_error ? trace.energy_error.back() : trace.residual_norm.back();
    const bool done = measure <= options.stop.tolerance;
    const bool stop = options.observer && options.observer(trace) == ObserverAction::stop;
    if (done) {
      result.status = CGStatus::converged;
      break;
    }
    if (stop) {
      result.status = CGStatus::stopped_by_observer;
      break;
    }
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  return result;
}

SymTridiagonal lanczos_tridiagonal(const CGTrace& trace, std::size_t m)
{
  if (m == 0 || m > trace.iterations())
    throw std::invalid_argument("lanczos_tridiagonal: need between 1 and " + std::to_string(trace.iterations()) +
                                " iterations, got " + std::to_string(m));
  Vector d(m), e(m - 1);
  d[0] = 1.0 / trace.alpha[0];
  for (std::size_t j = 1; j < m; ++j) {
    d[j] = 1.0 / trace.alpha[j] + trace.beta[j - 1] / trace.alpha[j - 1];
    e[j - 1] = std::sqrt(trace.beta[j - 1]) / trace.alpha[j - 1];
  }
  return SymTridiagonal(std::move(d), std::move(e));
}

SymTridiagonal lanczos_tridiagonal(const CGTrace& trace) { return lanczos_tridiagonal(trace, trace.iterations()); }

Spectrum ritz_values(const CGTrace& trace, std::size_t m)
{
  auto values = tridiag_eigenvalues(lanczos_tridiagonal(trace, m));
  if (!(values.front() > 0.0))
    throw std::runtime_error("ritz_values: non-positive Ritz value, operator is not SPD");
  return Spectrum(std::move(values));
}

Spectrum ritz_values(const CGTrace& trace) { return ritz_values(trace, trace.iterations()); }

}  // namespace pcgb
