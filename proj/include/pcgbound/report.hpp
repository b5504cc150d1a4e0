#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcgbound/bounds.hpp"
#include "pcgbound/partition.hpp"
#include "pcgbound/spectrum.hpp"

namespace pcgb {

/// Everything derived from one spectrum: partition, degrees, m1, m2, ms and the
/// direct polynomial check.
struct BoundReport {
  double eps = 1e-8;
  std::size_t n = 0;
  double kappa = 1.0;
  long m1 = 0;
  std::optional<long> m2;  ///< from the top-level split candidate (n >= 2)
  long ms = 0;
  PartitionResult partition;
  ClusterPolynomial polynomial;
  std::vector<double> cluster_kappas;
  PolynomialCheck check;
};

BoundReport compute_bound_report(const Spectrum& spectrum, double eps = 1e-8,
                                 AcceptanceRule rule = AcceptanceRule::lambert_exact);

nlohmann::json to_json(const BoundReport& report);
nlohmann::json partition_to_json(const Spectrum& spectrum, const PartitionResult& result);

std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& report);

}  // namespace pcgb
