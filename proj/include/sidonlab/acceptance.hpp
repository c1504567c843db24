#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sidonlab::acceptance {

struct Options {
  bool quick = false;
  /// Mutates the witness amplitude; criterion 3 must then fail.
  bool tamper = false;
  std::uint64_t seed = 2024;
};

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteria = 9;

Outcome run_criterion(int id, const Options& options);
/// Every criterion, or the quick subset when options.quick is set.
std::vector<Outcome> run_all(const Options& options);
std::vector<int> quick_subset();

std::string format_line(const Outcome& o);

}  // namespace sidonlab::acceptance
