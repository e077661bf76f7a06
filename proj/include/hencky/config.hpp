#pragma once

#include "hencky/bench.hpp"
#include "hencky/solver.hpp"

#include <iosfwd>
#include <string>

namespace hencky::config {

/**
 * Settings of one command-line invocation.
 *
 * Text form: one `key = value` per line, `#` starts a comment, blank lines are
 * ignored, keys are unique. Numbers use C locale syntax. Keys:
 *
 *   case            uniaxial_cube | footing3d | arc2d | cook2d | footing2d | mpoint
 *   model           exp_hencky | quad_hencky | neo_hooke | gent
 *   dim             2 | 3 (mpoint only; FE cases take the case dimension)
 *   mu kappa k khat jm                      material parameters (MPa, -)
 *   mesh_density steps target               0 / 0 / nan select the case default
 *   tol_abs tol_rel tol_increment max_iter max_step_cuts
 *   threads         assembly threads, 0 = HENCKY_FEM_THREADS
 *   out             output directory
 *   stretch_min stretch_max points          mpoint sampling
 *   input           CSV for `fit` (first column stretch, second nominal stress)
 *   verify_structural  true | false (include the structural benchmarks in `verify`)
 */
struct RunConfig
{
  bench::CaseSpec spec;
  int dim = 0; ///< 0: from the case
  solver::NewtonConfig newton;
  int threads = 0;
  std::string out = ".";
  double stretch_min = 0.25;
  double stretch_max = 4.5;
  int points = 50;
  std::string input;
  bool verify_structural = true;

  RunConfig();

  /// Material with the dimension resolved from the case.
  materials::MaterialParams material() const;
  /// Case spec with the resolved material.
  bench::CaseSpec case_spec() const;
  int resolved_threads() const;
  void validate() const;
};

/// Sets one key from its text value. Throws ConfigError naming the key.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
/// Every key with 17 significant digits; parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const RunConfig& cfg);
std::string to_text(const RunConfig& cfg);

} // namespace hencky::config
