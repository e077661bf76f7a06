#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hencky::verify {

/// Outcome of one invariant check.
struct Check
{
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options
{
  bool structural = true; ///< include the Cook, arc and footing runs (about a minute)
  int threads = 1;
  std::uint64_t seed = 20240601;
};

/**
 * Finite-difference and oracle checks of the whole pipeline: stresses and tangents,
 * the coincident-stretch limit, element consistency, Newton convergence, mesh counts,
 * the uniaxial drivers, calibration and the structural benchmarks.
 * `progress` is called after each check.
 */
std::vector<Check> run_all(const Options& options, const std::function<void(const Check&)>& progress = {});

/// "PASS [3] name: detail"
std::string format(const Check& c);

} // namespace hencky::verify
