#pragma once

/** @file synthetic.hpp
    @brief Random clustered spectra and CG runs on the matching diagonal systems,
           where the exact spectrum is known by construction.
*/

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "pcgbound/krylov.hpp"
#include "pcgbound/spectrum.hpp"

namespace pcgb {

struct ClusterSpec {
  double lower = 1.0;
  double upper = 1.0;
  std::size_t count = 1;
};

/// count values per cluster, log-uniform inside [lower, upper] with both ends included
/// when count >= 2.
Spectrum clustered_spectrum(const std::vector<ClusterSpec>& clusters, std::mt19937_64& rng);

struct RandomSpectrumLimits {
  std::size_t max_clusters = 4;
  std::size_t max_size = 400;
  double max_kappa = 1e10;
  double max_cluster_kappa = 20.0;
};

/// s uniform in 1..max_clusters, n in [s, max_size], kappa log-uniform in [10, max_kappa],
/// cluster positions random in log scale.
std::vector<ClusterSpec> random_clusters(std::mt19937_64& rng, const RandomSpectrumLimits& limits = {});

/// A = diag(spectrum), b with entries uniform in [-1, 1], reference b / lambda.
struct DiagonalSystem {
  SparseMatrix A;
  Vector b;
  Vector reference;
};

DiagonalSystem diagonal_system(const Spectrum& spectrum, std::mt19937_64& rng);

/// Unpreconditioned CG with A-norm error stopping at @p eps.
CGResult solve_diagonal(const DiagonalSystem& system, double eps, CGObserver observer = {},
                        std::size_t max_iterations = 100000);

}  // namespace pcgb
