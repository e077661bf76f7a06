#include "hencky/materials.hpp"

#include "hencky/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hencky::materials {

using tensor::Spectral;
using tensor::Vec3;

std::string_view to_string(Model m)
{
  switch (m) {
  case Model::ExpHencky: return "exp_hencky";
  case Model::QuadHencky: return "hencky";
  case Model::NeoHooke: return "neo_hooke";
  case Model::Gent: return "gent";
  }
  return "unknown";
}

Model model_from_string(std::string_view name)
{
  if (name == "exp_hencky" || name == "eh") return Model::ExpHencky;
  if (name == "hencky" || name == "quad_hencky" || name == "h") return Model::QuadHencky;
  if (name == "neo_hooke" || name == "nh") return Model::NeoHooke;
  if (name == "gent" || name == "g") return Model::Gent;
  throw ConfigError("unknown material model '" + std::string(name) + "'");
}

void MaterialParams::validate() const
{
  auto fail = [](const std::string& what) { throw ConfigError("invalid material parameter: " + what); };
  if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
  if (!(mu > 0.0) || !std::isfinite(mu)) fail("mu must be > 0 (got " + std::to_string(mu) + ")");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) fail("kappa must be > 0 (got " + std::to_string(kappa) + ")");
  if (model == Model::ExpHencky) {
    if (!(k >= 0.0)) fail("k must be >= 0");
    if (!(khat >= 0.0)) fail("khat must be >= 0");
  }
  if (model == Model::Gent && !(jm > 0.0)) fail("Jm must be > 0");
}

MaterialParams MaterialParams::reference_set(Model model, double mu, int dim)
{
  MaterialParams p;
  p.model = model;
  p.dim = dim;
  p.mu = mu;
  p.kappa = 4.7 * mu;
  p.k = 2.0;
  p.khat = 3.0;
  p.jm = 5.0;
  return p;
}

PrincipalState PrincipalState::from_log_stretches(int dim, std::span<const double> loglam)
{
  tensor::check_dim(dim);
  PrincipalState s;
  s.dim = dim;
  double theta = 0.0;
  for (int k = 0; k < dim; ++k) {
    if (!std::isfinite(loglam[k])) throw InvalidDeformation("non-finite log stretch");
    s.loglam[k] = loglam[k];
    s.lambda[k] = std::exp(loglam[k]);
    theta += loglam[k];
  }
  for (int k = dim; k < 3; ++k) {
    s.loglam[k] = 0.0;
    s.lambda[k] = 1.0;
  }
  for (int k = 0; k < dim; ++k) s.loglam_bar[k] = s.loglam[k] - theta / dim;
  s.J = std::exp(theta);
  return s;
}

PrincipalState PrincipalState::from_stretches(int dim, std::span<const double> lambda)
{
  std::array<double, 3> x{};
  for (int k = 0; k < dim; ++k) {
    if (!(lambda[k] > 0.0)) throw InvalidDeformation("nonpositive principal stretch");
    x[k] = std::log(lambda[k]);
  }
  PrincipalState s = from_log_stretches(dim, x);
  for (int k = 0; k < dim; ++k) s.lambda[k] = lambda[k];
  return s;
}

namespace {

// Isochoric invariant sum_k lbar_k^2 with its log-stretch derivatives (3D only).
struct IsochoricInvariant
{
  double value = 0.0;
  std::array<double, 3> d1{};
  Mat3 d2 = Mat3::Zero();
};

IsochoricInvariant isochoric_invariant(const PrincipalState& s)
{
  IsochoricInvariant inv;
  std::array<double, 3> a{};
  for (int k = 0; k < 3; ++k) {
    a[k] = std::exp(2.0 * s.loglam_bar[k]);
    inv.value += a[k];
  }
  for (int i = 0; i < 3; ++i) {
    inv.d1[i] = 2.0 * (a[i] - inv.value / 3.0);
    for (int j = 0; j < 3; ++j)
      inv.d2(i, j) = (i == j ? 4.0 * a[i] : 0.0) - 4.0 / 3.0 * (a[i] + a[j]) + 4.0 / 9.0 * inv.value;
  }
  return inv;
}

// Volumetric energy 3 kappa / 8 (J^(4/3) + 2 J^(-2/3) - 3) as a function of theta = log J.
struct Volumetric
{
  double u, du, ddu;
};

Volumetric richter_volumetric(double kappa, double theta)
{
  const double a = std::exp(4.0 * theta / 3.0);
  const double b = std::exp(-2.0 * theta / 3.0);
  return {3.0 * kappa / 8.0 * (a + 2.0 * b - 3.0), 0.5 * kappa * (a - b),
          0.5 * kappa * (4.0 / 3.0 * a + 2.0 / 3.0 * b)};
}

EnergyDerivatives hencky_family(const MaterialParams& p, const PrincipalState& s, double k, double khat)
{
  const int n = s.dim;
  double theta = 0.0;
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    theta += s.loglam[i];
    q += s.loglam_bar[i] * s.loglam_bar[i];
  }
  const double e_iso = std::exp(k * q);
  const double e_vol = std::exp(khat * theta * theta);

  EnergyDerivatives d;
  d.energy = (k > 0.0 ? p.mu / k * e_iso : p.mu * q) +
             (khat > 0.0 ? p.kappa / (2.0 * khat) * e_vol : 0.5 * p.kappa * theta * theta);
  const double vol_second = p.kappa * e_vol * (2.0 * khat * theta * theta + 1.0);
  for (int i = 0; i < n; ++i) {
    d.tau[i] = 2.0 * p.mu * e_iso * s.loglam_bar[i] + p.kappa * e_vol * theta;
    for (int j = 0; j < n; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      d.d2(i, j) = 2.0 * p.mu * e_iso * (2.0 * k * s.loglam_bar[i] * s.loglam_bar[j] + delta - 1.0 / n) +
                   vol_second;
    }
  }
  return d;
}

EnergyDerivatives richter_family(const MaterialParams& p, const PrincipalState& s);

// Plane strain: the 3D energy at lambda_3 = 1, restricted to the in-plane log stretches.
EnergyDerivatives richter_plane_strain(const MaterialParams& p, const PrincipalState& s)
{
  const std::array<double, 3> x{s.loglam[0], s.loglam[1], 0.0};
  EnergyDerivatives d = richter_family(p, PrincipalState::from_log_stretches(3, x));
  d.tau[2] = 0.0;
  d.d2.row(2).setZero();
  d.d2.col(2).setZero();
  return d;
}

EnergyDerivatives richter_family(const MaterialParams& p, const PrincipalState& s)
{
  if (s.dim == 2) return richter_plane_strain(p, s);
  const IsochoricInvariant inv = isochoric_invariant(s);
  const Volumetric vol = richter_volumetric(p.kappa, s.loglam[0] + s.loglam[1] + s.loglam[2]);

  EnergyDerivatives d;
  if (p.model == Model::NeoHooke) {
    d.energy = 0.5 * p.mu * (inv.value - 3.0) + vol.u;
    for (int i = 0; i < 3; ++i) {
      d.tau[i] = 0.5 * p.mu * inv.d1[i] + vol.du;
      for (int j = 0; j < 3; ++j) d.d2(i, j) = 0.5 * p.mu * inv.d2(i, j) + vol.ddu;
    }
    return d;
  }

  const double g = 1.0 - (inv.value - 3.0) / p.jm;
  if (!(g > 0.0)) {
    std::ostringstream msg;
    msg << "Gent locking limit reached: I - 3 = " << inv.value - 3.0 << " >= Jm = " << p.jm;
    throw LockingLimit(msg.str());
  }
  d.energy = -0.5 * p.jm * p.mu * std::log(g) + vol.u;
  for (int i = 0; i < 3; ++i) {
    d.tau[i] = 0.5 * p.mu / g * inv.d1[i] + vol.du;
    for (int j = 0; j < 3; ++j)
      d.d2(i, j) = 0.5 * p.mu / g * inv.d2(i, j) + 0.5 * p.mu / (g * g * p.jm) * inv.d1[i] * inv.d1[j] + vol.ddu;
  }
  return d;
}

bool coincident(double a2, double b2) { return std::abs(a2 - b2) <= kEqualStretchTolerance * std::max(a2, b2); }

// State with log stretches k and l replaced by their mean.
PrincipalState merged_state(const PrincipalState& s, int k, int l)
{
  std::array<double, 3> x = s.loglam;
  const double mean = 0.5 * (x[k] + x[l]);
  x[k] = mean;
  x[l] = mean;
  return PrincipalState::from_log_stretches(s.dim, x);
}

double chi_from(const PrincipalState& s, const EnergyDerivatives& d, const MaterialParams& p, int k, int l)
{
  const double lk2 = s.lambda[k] * s.lambda[k];
  const double ll2 = s.lambda[l] * s.lambda[l];
  if (!coincident(lk2, ll2)) return (d.tau[k] * ll2 - d.tau[l] * lk2) / (lk2 - ll2);
  return chi_limit(p, s, k, l);
}

// (tau_k - tau_l) / (l_k^2 - l_l^2) with limit (d2_kk - d2_kl) / (2 l_k^2).
double tau_slope_from(const PrincipalState& s, const EnergyDerivatives& d, const MaterialParams& p, int k, int l)
{
  const double lk2 = s.lambda[k] * s.lambda[k];
  const double ll2 = s.lambda[l] * s.lambda[l];
  if (!coincident(lk2, ll2)) return (d.tau[k] - d.tau[l]) / (lk2 - ll2);
  const PrincipalState m = merged_state(s, k, l);
  const EnergyDerivatives dm = evaluate(p, m);
  return (dm.d2(k, k) - dm.d2(k, l)) / (2.0 * m.lambda[k] * m.lambda[k]);
}

void require_same_dim(const MaterialParams& p, int dim)
{
  if (p.dim != dim)
    throw ConfigError("tensor dimension " + std::to_string(dim) + " does not match material dimension " +
                      std::to_string(p.dim));
}

PrincipalState state_from_spectral(const Spectral& sp)
{
  std::array<double, 3> lambda{1.0, 1.0, 1.0};
  for (int k = 0; k < sp.dim; ++k) {
    if (!(sp.values[k] > 0.0))
      throw InvalidDeformation("deformation tensor is not positive definite (eigenvalue " +
                               std::to_string(sp.values[k]) + ")");
    lambda[k] = std::sqrt(sp.values[k]);
  }
  return PrincipalState::from_stretches(sp.dim, lambda);
}

// sum_kl diag(k,l) a_k a_k a_l a_l + sum_{k != l} pair(k,l) a_k a_l (a_k a_l + a_l a_k), packed to Voigt.
Tangent4 assemble_spectral_tangent(int n, const Mat3& frame, const Mat3& diag, const Mat3& pair)
{
  Tangent4 c(n);
  for (int r = 0; r < c.size(); ++r) {
    const auto [a, b] = tensor::voigt_pair(n, r);
    for (int col = 0; col < c.size(); ++col) {
      const auto [cc, dd] = tensor::voigt_pair(n, col);
      double v = 0.0;
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          v += diag(k, l) * frame(a, k) * frame(b, k) * frame(cc, l) * frame(dd, l);
          if (k != l)
            v += pair(k, l) * frame(a, k) * frame(b, l) *
                 (frame(cc, k) * frame(dd, l) + frame(cc, l) * frame(dd, k));
        }
      }
      c.voigt(r, col) = v;
    }
  }
  return c;
}

struct TwoPointFrame
{
  PrincipalState state;
  Mat3 material = Mat3::Identity(); // N_k as columns
  Mat3 spatial = Mat3::Identity();  // n_k as columns
};

TwoPointFrame two_point_frame(int n, const Mat3& f)
{
  const double det = f.topLeftCorner(n, n).determinant();
  if (!(det > 0.0)) throw InvalidDeformation("det F = " + std::to_string(det) + " <= 0");
  const Mat3 c = f.transpose() * f;
  const Spectral sp = tensor::jacobi_eigen(SymTensor::from_matrix(n, c));
  TwoPointFrame out;
  out.state = state_from_spectral(sp);
  out.material = sp.vectors;
  for (int k = 0; k < n; ++k) {
    Vec3 nk = Vec3::Zero();
    nk.head(n) = f.topLeftCorner(n, n) * sp.vectors.col(k).head(n) / out.state.lambda[k];
    out.spatial.col(k) = nk;
  }
  if (n == 2) out.spatial.col(2) = Vec3::UnitZ();
  return out;
}

} // namespace

EnergyDerivatives evaluate(const MaterialParams& p, const PrincipalState& s)
{
  require_same_dim(p, s.dim);
  switch (p.model) {
  case Model::ExpHencky: return hencky_family(p, s, p.k, p.khat);
  case Model::QuadHencky: return hencky_family(p, s, 0.0, 0.0);
  case Model::NeoHooke:
  case Model::Gent: return richter_family(p, s);
  }
  throw ConfigError("unknown model");
}

double energy(const MaterialParams& p, const PrincipalState& s) { return evaluate(p, s).energy; }

PrincipalStresses principal_tau(const MaterialParams& p, const PrincipalState& s)
{
  const EnergyDerivatives d = evaluate(p, s);
  PrincipalStresses out;
  for (int k = 0; k < s.dim; ++k) {
    out.tau[k] = d.tau[k];
    out.s1[k] = d.tau[k] / s.lambda[k];
    out.s2[k] = d.tau[k] / (s.lambda[k] * s.lambda[k]);
  }
  return out;
}

Mat3 d2W(const MaterialParams& p, const PrincipalState& s) { return evaluate(p, s).d2; }

double chi_limit(const MaterialParams& p, const PrincipalState& s, int k, int l)
{
  const EnergyDerivatives d = evaluate(p, merged_state(s, k, l));
  return 0.5 * (d.d2(k, k) - d.d2(k, l)) - d.tau[l];
}

double chi(const MaterialParams& p, const PrincipalState& s, int k, int l)
{
  return chi_from(s, evaluate(p, s), p, k, l);
}

StressAndTangent spatial_tangent_and_stress(const MaterialParams& p, const SymTensor& b)
{
  require_same_dim(p, b.dim());
  const int n = b.dim();
  const Spectral sp = tensor::jacobi_eigen(b);
  const PrincipalState s = state_from_spectral(sp);
  const EnergyDerivatives d = evaluate(p, s);

  Mat3 diag = Mat3::Zero();
  Mat3 pair = Mat3::Zero();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      diag(k, l) = d.d2(k, l) - (k == l ? 2.0 * d.tau[l] : 0.0);
      if (k < l) pair(k, l) = pair(l, k) = chi_from(s, d, p, k, l);
    }
  }

  StressAndTangent out{sp.recompose(d.tau), assemble_spectral_tangent(n, sp.vectors, diag, pair), d.energy, s};
  return out;
}

Tangent4 material_tangent(const MaterialParams& p, const SymTensor& c)
{
  require_same_dim(p, c.dim());
  const int n = c.dim();
  const Spectral sp = tensor::jacobi_eigen(c);
  const PrincipalState s = state_from_spectral(sp);
  const EnergyDerivatives d = evaluate(p, s);

  Mat3 diag = Mat3::Zero();
  Mat3 pair = Mat3::Zero();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const double lk2l2 = sp.values[k] * sp.values[l];
      diag(k, l) = (d.d2(k, l) - (k == l ? 2.0 * d.tau[l] : 0.0)) / lk2l2;
      if (k < l) pair(k, l) = pair(l, k) = chi_from(s, d, p, k, l) / lk2l2;
    }
  }
  return assemble_spectral_tangent(n, sp.vectors, diag, pair);
}

SymTensor second_pk(const MaterialParams& p, const SymTensor& c)
{
  require_same_dim(p, c.dim());
  const Spectral sp = tensor::jacobi_eigen(c);
  const PrincipalStresses ps = principal_tau(p, state_from_spectral(sp));
  return sp.recompose(ps.s2);
}

Mat3 first_pk(const MaterialParams& p, const Mat3& f)
{
  const int n = p.dim;
  const TwoPointFrame fr = two_point_frame(n, f);
  const PrincipalStresses ps = principal_tau(p, fr.state);
  Mat3 s1 = Mat3::Zero();
  for (int k = 0; k < n; ++k) s1 += ps.s1[k] * fr.spatial.col(k) * fr.material.col(k).transpose();
  return s1;
}

Full4 mixed_tangent(const MaterialParams& p, const Mat3& f)
{
  const int n = p.dim;
  const TwoPointFrame fr = two_point_frame(n, f);
  const PrincipalState& s = fr.state;
  const EnergyDerivatives d = evaluate(p, s);
  const Mat3& nn = fr.spatial;
  const Mat3& mm = fr.material;

  // Coefficients of n_k N_k n_l N_l, n_k N_l n_k N_l and n_k N_l n_l N_k.
  Mat3 diag = Mat3::Zero();
  Mat3 same = Mat3::Zero();
  Mat3 swap = Mat3::Zero();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const double lkll = s.lambda[k] * s.lambda[l];
      diag(k, l) = (d.d2(k, l) - (k == l ? d.tau[k] : 0.0)) / lkll;
      if (k < l) {
        same(k, l) = same(l, k) = tau_slope_from(s, d, p, k, l);
        swap(k, l) = swap(l, k) = chi_from(s, d, p, k, l) / lkll;
      }
    }
  }

  Full4 c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
              v += diag(k, l) * nn(i, k) * mm(j, k) * nn(a, l) * mm(b, l);
              if (k != l)
                v += nn(i, k) * mm(j, l) * (same(k, l) * nn(a, k) * mm(b, l) + swap(k, l) * nn(a, l) * mm(b, k));
            }
          }
          c(i, j, a, b) = v;
        }
  return c;
}

Tangent4 jaumann_modulus(const Tangent4& c, const SymTensor& tau)
{
  const int n = c.dim();
  Tangent4 out = c;
  auto delta = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  for (int r = 0; r < c.size(); ++r) {
    const auto [i, j] = tensor::voigt_pair(n, r);
    for (int col = 0; col < c.size(); ++col) {
      const auto [k, l] = tensor::voigt_pair(n, col);
      out.voigt(r, col) +=
          0.5 * (tau(i, k) * delta(j, l) + tau(j, k) * delta(i, l) + tau(i, l) * delta(j, k) + tau(j, l) * delta(i, k));
    }
  }
  return out;
}

SymTensor cauchy_from_kirchhoff(const SymTensor& tau, double J)
{
  if (!(J > 0.0)) throw InvalidDeformation("cauchy_from_kirchhoff: J = " + std::to_string(J) + " <= 0");
  return tau * (1.0 / J);
}

LogStrainMeasures log_strain_measures(const PrincipalState& s)
{
  double iso = 0.0;
  double vol = 0.0;
  for (int k = 0; k < s.dim; ++k) {
    iso += s.loglam_bar[k] * s.loglam_bar[k];
    vol += s.loglam[k];
  }
  return {std::sqrt(iso), std::abs(vol)};
}

MaterialParams params_from_engineering(double E, double nu, double k, bool coupled, double khat)
{
  if (!(E > 0.0)) throw ConfigError("Young's modulus must be > 0");
  if (!(nu > -1.0 && nu < 0.5)) throw ConfigError("Poisson's ratio must lie in (-1, 1/2)");
  if (1.0 - 2.0 * nu < 1e-12) throw ConfigError("Poisson's ratio too close to 1/2: incompressible limit");
  MaterialParams p;
  p.model = Model::ExpHencky;
  p.mu = E / (2.0 * (1.0 + nu));
  p.kappa = E / (3.0 * (1.0 - 2.0 * nu));
  p.k = k;
  p.khat = coupled ? 1.5 * k : khat;
  return p;
}

EngineeringConstants engineering_from_params(const MaterialParams& p)
{
  return {9.0 * p.kappa * p.mu / (3.0 * p.kappa + p.mu), (3.0 * p.kappa - 2.0 * p.mu) / (6.0 * p.kappa + 2.0 * p.mu)};
}

} // namespace hencky::materials
