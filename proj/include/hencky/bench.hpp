#pragma once

#include "hencky/fem.hpp"
#include "hencky/materials.hpp"
#include "hencky/solver.hpp"

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace hencky::bench {

using materials::MaterialParams;

enum class CaseId { UniaxialCube, Footing3d, Arc2d, Cook2d, Footing2d, MPoint };

std::string to_string(CaseId id);
CaseId case_from_string(const std::string& name);
/// Spatial dimension the case runs in.
int case_dim(CaseId id);

/**
 * One benchmark run. mesh_density means: elements per cube edge (uniaxial_cube,
 * footing3d), arc mesh number 1..3 (arc2d), elements per side (cook2d, footing2d).
 * A zero density, zero steps or NaN target selects the case default.
 */
struct CaseSpec
{
  CaseId id = CaseId::UniaxialCube;
  int mesh_density = 0;
  int steps = 0;
  double target = std::numeric_limits<double>::quiet_NaN(); ///< mm, or N for cook2d
  MaterialParams material;

  int density() const;
  int num_steps() const;
  double final_target() const;
  void validate() const;
};

/// Default material of a case: mu = 1, kappa = 4.7 mu, k = 2, khat = 3, Jm = 5.
MaterialParams default_material(CaseId id, materials::Model model = materials::Model::ExpHencky);

struct CaseSetup
{
  fem::Mesh mesh;
  fem::DofMap dofs;
  solver::LoadProgram program;
  std::string mesh_label;
  double area = 0.0; ///< loaded cross-section for nominal stress (uniaxial_cube)
  int monitor_node = -1;
};

CaseSetup generate_case(const CaseSpec& spec);

/// `<case>_<model>_<mesh>`.
std::string output_stem(const CaseSpec& spec);

/// Named columns of doubles.
struct CurveRecord
{
  std::string tag;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct UniaxialPoint
{
  double stretch = 1.0;   ///< imposed lambda_3
  double lateral = 1.0;   ///< lambda_1 = lambda_2
  double nominal = 0.0;   ///< S_1^3 (MPa)
  bool converged = true;
};

/**
 * Homogeneous uniaxial tension/compression: for each lambda_3 the lateral stretch is found by
 * scalar Newton on tau_lateral = 0 (tolerance 1e-12 mu), seeded from the previous point and
 * continued in axial substeps when the seed is too far away.
 * Points where the lateral solve fails are returned with converged = false.
 */
std::vector<UniaxialPoint> material_point_uniaxial(const MaterialParams& material,
                                                   const std::vector<double>& stretches);
CurveRecord uniaxial_curve(const MaterialParams& material, const std::vector<UniaxialPoint>& points);

/// Nominal stress 3 mu exp(3/2 k ln^2 lambda) ln(lambda) / lambda of the incompressible limit.
double uniaxial_incompressible_stress(double mu, double k, double lambda);

struct FitResult
{
  double mu = 0.0;
  double k = 0.0;
  double residual = 0.0; ///< sum of squares
  int iterations = 0;
};

/// Gauss-Newton least squares of (mu, k) on the incompressible formula. Throws FitFailure.
FitResult fit_uniaxial(const std::vector<std::pair<double, double>>& data);

/// CSV with a header line and 17 significant digits.
void emit_curves(std::ostream& out, const CurveRecord& record);
void write_curves(const std::string& path, const CurveRecord& record);
/// Reads the CSV layout produced by emit_curves.
CurveRecord read_curves(std::istream& in);

/// Legacy ASCII VTK unstructured grid: displacement point vectors and Gauss-averaged
/// cell scalars max_principal_log_strain, omega_iso, omega_vol.
void emit_fields(std::ostream& out, const fem::Mesh& mesh, const Eigen::VectorXd& u,
                 const std::vector<std::vector<fem::GaussOutput>>& gauss, const std::string& title = "hencky");
void write_fields(const std::string& path, const fem::Mesh& mesh, const Eigen::VectorXd& u,
                  const std::vector<std::vector<fem::GaussOutput>>& gauss, const std::string& title = "hencky");

struct CaseRun
{
  CaseSetup setup;
  solver::RunResult result;
  CurveRecord curve;
};

/// Generates, solves and tabulates a finite element case.
CaseRun run_case(const CaseSpec& spec, const solver::NewtonConfig& cfg, int threads = 1);

} // namespace hencky::bench
