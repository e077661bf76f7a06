#pragma once

#include "hencky/tensor.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace hencky::materials {

using tensor::Full4;
using tensor::Mat3;
using tensor::SymTensor;
using tensor::Tangent4;

enum class Model { ExpHencky, QuadHencky, NeoHooke, Gent };

std::string_view to_string(Model m);
/// Accepts the names produced by to_string plus the short forms `eh`, `h`, `nh`, `g`.
Model model_from_string(std::string_view name);

/**
 * Hyperelastic model selection and parameters.
 *
 * mu and kappa are the infinitesimal shear and bulk moduli (MPa). k and khat
 * are the dimensionless hardening exponents of the exponentiated Hencky energy;
 * jm is the Gent limiting extensibility. With dim == 2 the Hencky energies use
 * their intrinsic planar form; NeoHooke and Gent use plane strain (lambda_3 = 1).
 */
struct MaterialParams
{
  Model model = Model::ExpHencky;
  int dim = 3;
  double mu = 1.0;
  double kappa = 4.7;
  double k = 2.0;
  double khat = 3.0;
  double jm = 5.0;

  /// Throws ConfigError naming the offending parameter.
  void validate() const;

  /// Parameter set of the comparison study: kappa = 4.7 mu, k = 2, khat = 3, Jm = 5.
  static MaterialParams reference_set(Model model, double mu = 1.0, int dim = 3);
};

/// Principal stretches and the log quantities derived from them.
struct PrincipalState
{
  int dim = 3;
  std::array<double, 3> lambda{1.0, 1.0, 1.0};
  std::array<double, 3> loglam{};
  std::array<double, 3> loglam_bar{};
  double J = 1.0;

  static PrincipalState from_stretches(int dim, std::span<const double> lambda);
  static PrincipalState from_log_stretches(int dim, std::span<const double> loglam);
};

struct PrincipalStresses
{
  std::array<double, 3> tau{};
  std::array<double, 3> s1{};
  std::array<double, 3> s2{};
};

/// Energy together with its first and second derivatives in the log stretches.
struct EnergyDerivatives
{
  double energy = 0.0;
  std::array<double, 3> tau{};
  Mat3 d2 = Mat3::Zero();
};

struct StressAndTangent
{
  SymTensor tau_tensor;
  Tangent4 c_spatial;
  double energy = 0.0;
  PrincipalState state;
};

struct LogStrainMeasures
{
  double omega_iso = 0.0;
  double omega_vol = 0.0;
};

/// Relative eigenvalue gap below which two stretches are treated as equal.
inline constexpr double kEqualStretchTolerance = 1e-8;

EnergyDerivatives evaluate(const MaterialParams& p, const PrincipalState& s);

double energy(const MaterialParams& p, const PrincipalState& s);
PrincipalStresses principal_tau(const MaterialParams& p, const PrincipalState& s);
/// d^2 W / d(log lambda_i) d(log lambda_j), leading dim x dim block.
Mat3 d2W(const MaterialParams& p, const PrincipalState& s);

/// Divided difference (tau_k l_l^2 - tau_l l_k^2) / (l_k^2 - l_l^2), or its
/// coincident-stretch limit when the squared stretches are within kEqualStretchTolerance.
double chi(const MaterialParams& p, const PrincipalState& s, int k, int l);
/// The coincident-stretch limit alone, evaluated with both log stretches set to their mean.
double chi_limit(const MaterialParams& p, const PrincipalState& s, int k, int l);

/// Kirchhoff stress and spatial tangent (Lie-derivative modulus) from B = F F^T.
StressAndTangent spatial_tangent_and_stress(const MaterialParams& p, const SymTensor& b);

/// Material tangent 2 dS2/dC from C = F^T F.
Tangent4 material_tangent(const MaterialParams& p, const SymTensor& c);
/// Second Piola-Kirchhoff stress from C.
SymTensor second_pk(const MaterialParams& p, const SymTensor& c);

/// First Piola-Kirchhoff stress dW/dF.
Mat3 first_pk(const MaterialParams& p, const Mat3& f);
/// Mixed tangent d^2 W / dF^2 (no minor symmetry).
Full4 mixed_tangent(const MaterialParams& p, const Mat3& f);

/// Adds 1/2 (tau_ik d_jl + tau_jk d_il + tau_il d_jk + tau_jl d_ik) to c.
Tangent4 jaumann_modulus(const Tangent4& c, const SymTensor& tau);

SymTensor cauchy_from_kirchhoff(const SymTensor& tau, double J);

LogStrainMeasures log_strain_measures(const PrincipalState& s);

struct EngineeringConstants
{
  double E = 0.0;
  double nu = 0.0;
};

/// mu = E / (2(1+nu)), kappa = E / (3(1-2nu)); khat = 3k/2 when coupled, else khat.
MaterialParams params_from_engineering(double E, double nu, double k, bool coupled, double khat = 0.0);
/// Inverse map of the moduli: E = 9 kappa mu / (3 kappa + mu), nu = (3 kappa - 2 mu) / (6 kappa + 2 mu).
EngineeringConstants engineering_from_params(const MaterialParams& p);

} // namespace hencky::materials
