#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace pcgb {

/// Ascending list of strictly positive eigenvalues (exact or Ritz); duplicates allowed.
class Spectrum {
 public:
  Spectrum() = default;
  /// Throws std::invalid_argument unless the values are positive and ascending.
  explicit Spectrum(std::vector<double> values);
  /// Sorts first; still rejects non-positive values.
  static Spectrum from_unsorted(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  const std::vector<double>& values() const { return values_; }

  double condition_number() const { return values_.back() / values_.front(); }
  /// Values [first, last) as a new spectrum.
  Spectrum slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

/// One value per line; blank lines and '#' comments skipped. Throws ParseError with
/// the line of the first malformed, non-positive or non-ascending value.
Spectrum read_spectrum(std::istream& in);
Spectrum read_spectrum(const std::filesystem::path& path);
void write_spectrum(std::ostream& out, const Spectrum& spectrum);

}  // namespace pcgb
