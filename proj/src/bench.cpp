#include "hencky/bench.hpp"

#include "hencky/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace hencky::bench {

namespace {

using fem::dof_index;
using fem::Vec3;

constexpr double kCubeSize = 20.0;
constexpr double kArcInner = 100.0;
constexpr double kArcThickness = 4.0;
constexpr double kArcSpanDeg = 60.0;
constexpr double kCookLoad = 200.0;
constexpr double kGeomTol = 1e-9;
// Newton correction of the lateral log stretch that is at round-off level (stiff bulk response).
constexpr double kLateralStepFloor = 1e-14;

struct CaseDefaults
{
  int density;
  int steps;
  double target;
};

CaseDefaults defaults(CaseId id)
{
  switch (id) {
  case CaseId::UniaxialCube: return {4, 70, 70.0};
  case CaseId::Footing3d: return {16, 12, -12.0};
  case CaseId::Arc2d: return {1, 80, -20.0};
  case CaseId::Cook2d: return {16, 10, kCookLoad};
  case CaseId::Footing2d: return {10, 24, -12.0};
  case CaseId::MPoint: return {1, 70, 4.5};
  }
  throw ConfigError("unknown case");
}

// Thickness x circumferential element counts of the three arc meshes.
constexpr int kArcMeshes[3][2] = {{3, 30}, {10, 90}, {20, 180}};

fem::Mesh box(int n, double size)
{
  fem::Mesh m;
  m.dim = 3;
  m.kind = fem::ElementKind::H8;
  auto id = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) m.nodes.emplace_back(size * i / n, size * j / n, size * k / n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        m.elements.push_back({id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k), id(i, j, k + 1),
                              id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)});
  return m;
}

// nx x ny Q4 grid through map(xi, eta) on the unit square; node (i, j) has id i + (nx + 1) j.
fem::Mesh grid(int nx, int ny, const std::function<Vec3(double, double)>& map)
{
  fem::Mesh m;
  m.dim = 2;
  m.kind = fem::ElementKind::Q4;
  auto id = [nx](int i, int j) { return i + (nx + 1) * j; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.nodes.push_back(map(static_cast<double>(i) / nx, static_cast<double>(j) / ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), -1, -1, -1, -1});
  return m;
}

bool near(double a, double b) { return std::abs(a - b) <= kGeomTol; }

void init_program(CaseSetup& s, const CaseSpec& spec)
{
  const int ndof = s.mesh.num_dofs();
  s.dofs = fem::DofMap(s.mesh.dim, s.mesh.num_nodes());
  s.program.prescribed = Eigen::VectorXd::Zero(ndof);
  s.program.f_ext = Eigen::VectorXd::Zero(ndof);
  s.program.factors = solver::LoadProgram::uniform(spec.num_steps());
  s.program.tag = output_stem(spec);
}

void prescribe(CaseSetup& s, int dof, double value)
{
  s.dofs.constrain(dof);
  s.program.prescribed[dof] = value;
  s.program.reaction_dofs.push_back(dof);
  if (s.program.displacement_dof < 0) s.program.displacement_dof = dof;
}

CaseSetup uniaxial_cube(const CaseSpec& spec)
{
  CaseSetup s;
  const int n = spec.density();
  s.mesh = box(n, kCubeSize);
  s.mesh_label = "n" + std::to_string(n);
  s.area = kCubeSize * kCubeSize;
  init_program(s, spec);
  for (int v = 0; v < s.mesh.num_nodes(); ++v) {
    const Vec3& x = s.mesh.nodes[v];
    for (int d = 0; d < 3; ++d)
      if (near(x[d], 0.0)) s.dofs.constrain(dof_index(3, v, d));
    if (near(x[2], kCubeSize)) prescribe(s, dof_index(3, v, 2), spec.final_target());
  }
  s.monitor_node = s.program.displacement_dof / 3;
  return s;
}

CaseSetup footing3d(const CaseSpec& spec)
{
  CaseSetup s;
  const int n = spec.density();
  s.mesh = box(n, kCubeSize);
  s.mesh_label = "n" + std::to_string(n);
  init_program(s, spec);
  for (int v = 0; v < s.mesh.num_nodes(); ++v) {
    const Vec3& x = s.mesh.nodes[v];
    if (near(x[2], 0.0)) {
      for (int d = 0; d < 3; ++d) s.dofs.constrain(dof_index(3, v, d));
      continue;
    }
    if (near(x[0], 0.0) || near(x[0], kCubeSize)) s.dofs.constrain(dof_index(3, v, 0));
    if (near(x[1], 0.0) || near(x[1], kCubeSize)) s.dofs.constrain(dof_index(3, v, 1));
    if (near(x[2], kCubeSize) && x[0] <= 0.5 * kCubeSize + kGeomTol) prescribe(s, dof_index(3, v, 2), spec.final_target());
  }
  s.monitor_node = s.program.displacement_dof / 3;
  return s;
}

CaseSetup arc2d(const CaseSpec& spec)
{
  CaseSetup s;
  const int mesh = spec.density();
  const int nt = kArcMeshes[mesh - 1][0];
  const int nc = kArcMeshes[mesh - 1][1];
  const double half = 0.5 * kArcSpanDeg * M_PI / 180.0;
  s.mesh = grid(nc, nt, [&](double xi, double eta) {
    const double theta = 0.5 * M_PI + half - 2.0 * half * xi;
    const double r = kArcInner + kArcThickness * eta;
    return Vec3(r * std::cos(theta), r * std::sin(theta), 0.0);
  });
  s.mesh_label = "mesh" + std::to_string(mesh);
  init_program(s, spec);
  for (int j = 0; j <= nt; ++j)
    for (int i : {0, nc})
      for (int d = 0; d < 2; ++d) s.dofs.constrain(dof_index(2, i + (nc + 1) * j, d));
  s.monitor_node = nc / 2 + (nc + 1) * nt;
  prescribe(s, dof_index(2, s.monitor_node, 1), spec.final_target());
  return s;
}

CaseSetup cook2d(const CaseSpec& spec)
{
  CaseSetup s;
  const int n = spec.density();
  s.mesh = grid(n, n, [](double xi, double eta) {
    const double bottom = 44.0 * xi;
    const double top = 44.0 + 16.0 * xi;
    return Vec3(48.0 * xi, bottom + (top - bottom) * eta, 0.0);
  });
  s.mesh_label = "n" + std::to_string(n);
  init_program(s, spec);
  for (int j = 0; j <= n; ++j) {
    const int v = (n + 1) * j;
    s.dofs.constrain(dof_index(2, v, 0));
    s.dofs.constrain(dof_index(2, v, 1));
    s.program.reaction_dofs.push_back(dof_index(2, v, 1));
  }
  // Uniform shear traction on the x = 48 edge as consistent nodal forces.
  const double per_segment = spec.final_target() / n;
  for (int j = 0; j < n; ++j) {
    s.program.f_ext[dof_index(2, n + (n + 1) * j, 1)] += 0.5 * per_segment;
    s.program.f_ext[dof_index(2, n + (n + 1) * (j + 1), 1)] += 0.5 * per_segment;
  }
  s.monitor_node = n + (n + 1) * (n / 2);
  s.program.displacement_dof = dof_index(2, s.monitor_node, 1);
  return s;
}

CaseSetup footing2d(const CaseSpec& spec)
{
  CaseSetup s;
  const int n = spec.density();
  s.mesh = grid(n, n, [](double xi, double eta) { return Vec3(kCubeSize * xi, kCubeSize * eta, 0.0); });
  s.mesh_label = "n" + std::to_string(n);
  init_program(s, spec);
  for (int v = 0; v < s.mesh.num_nodes(); ++v) {
    const Vec3& x = s.mesh.nodes[v];
    if (near(x[1], 0.0)) {
      s.dofs.constrain(dof_index(2, v, 0));
      s.dofs.constrain(dof_index(2, v, 1));
      continue;
    }
    if (near(x[0], 0.0) || near(x[0], kCubeSize)) s.dofs.constrain(dof_index(2, v, 0));
    if (near(x[1], kCubeSize) && x[0] <= 0.5 * kCubeSize + kGeomTol) prescribe(s, dof_index(2, v, 1), spec.final_target());
  }
  s.monitor_node = s.program.displacement_dof / 2;
  return s;
}

double lateral_tolerance(const MaterialParams& p, double tau_load)
{
  return 1e-12 * std::max(p.mu, std::abs(tau_load));
}

} // namespace

std::string to_string(CaseId id)
{
  switch (id) {
  case CaseId::UniaxialCube: return "uniaxial_cube";
  case CaseId::Footing3d: return "footing3d";
  case CaseId::Arc2d: return "arc2d";
  case CaseId::Cook2d: return "cook2d";
  case CaseId::Footing2d: return "footing2d";
  case CaseId::MPoint: return "mpoint";
  }
  return "?";
}

CaseId case_from_string(const std::string& name)
{
  for (CaseId id : {CaseId::UniaxialCube, CaseId::Footing3d, CaseId::Arc2d, CaseId::Cook2d, CaseId::Footing2d,
                    CaseId::MPoint})
    if (name == to_string(id)) return id;
  throw ConfigError("unknown case '" + name + "'");
}

int case_dim(CaseId id)
{
  return (id == CaseId::Arc2d || id == CaseId::Cook2d || id == CaseId::Footing2d) ? 2 : 3;
}

int CaseSpec::density() const { return mesh_density > 0 ? mesh_density : defaults(id).density; }

int CaseSpec::num_steps() const { return steps > 0 ? steps : defaults(id).steps; }

double CaseSpec::final_target() const { return std::isnan(target) ? defaults(id).target : target; }

void CaseSpec::validate() const
{
  material.validate();
  if (mesh_density < 0) throw ConfigError("mesh density must be >= 1");
  if (steps < 0) throw ConfigError("steps must be >= 1");
  if (!std::isfinite(final_target())) throw ConfigError("target must be finite");
  if (id != CaseId::MPoint && material.dim != case_dim(id))
    throw ConfigError(to_string(id) + " needs a " + std::to_string(case_dim(id)) + "D material, got dim " +
                      std::to_string(material.dim));
  if (id == CaseId::Arc2d && density() > 3) throw ConfigError("arc2d mesh must be 1, 2 or 3");
  if (id == CaseId::Cook2d && density() % 2 != 0)
    throw ConfigError("cook2d needs an even number of elements per side (node A at mid-edge)");
  if (id == CaseId::MPoint && !(final_target() > 0.0)) throw ConfigError("mpoint target stretch must be > 0");
}

MaterialParams default_material(CaseId id, materials::Model model)
{
  return MaterialParams::reference_set(model, 1.0, case_dim(id));
}

CaseSetup generate_case(const CaseSpec& spec)
{
  spec.validate();
  CaseSetup s;
  switch (spec.id) {
  case CaseId::UniaxialCube: s = uniaxial_cube(spec); break;
  case CaseId::Footing3d: s = footing3d(spec); break;
  case CaseId::Arc2d: s = arc2d(spec); break;
  case CaseId::Cook2d: s = cook2d(spec); break;
  case CaseId::Footing2d: s = footing2d(spec); break;
  case CaseId::MPoint: throw ConfigError("mpoint has no finite element mesh");
  }
  s.dofs.finalize();
  s.mesh.validate();
  return s;
}

std::string output_stem(const CaseSpec& spec)
{
  std::string mesh;
  switch (spec.id) {
  case CaseId::Arc2d: mesh = "mesh" + std::to_string(spec.density()); break;
  case CaseId::MPoint: mesh = "point"; break;
  default: mesh = "n" + std::to_string(spec.density());
  }
  return to_string(spec.id) + "_" + std::string(materials::to_string(spec.material.model)) + "_" + mesh;
}

namespace {

// Scalar Newton on tau_lateral(t) = 0 at axial log stretch x3, starting from t.
bool solve_lateral(const MaterialParams& material, double x3, double& t, materials::EnergyDerivatives& d)
{
  const int dim = material.dim;
  const int load = dim - 1;
  auto eval = [&](double tt) {
    std::array<double, 3> x{tt, tt, 0.0};
    x[load] = x3;
    return materials::evaluate(material, materials::PrincipalState::from_log_stretches(dim, x));
  };
  auto slope = [&](const materials::EnergyDerivatives& e) { return e.d2(0, 0) + (dim == 3 ? e.d2(0, 1) : 0.0); };

  double trial = t;
  try {
    d = eval(trial);
    for (int it = 0; it < 100; ++it) {
      if (std::abs(d.tau[0]) <= lateral_tolerance(material, d.tau[load])) {
        t = trial;
        return true;
      }
      const double step = -d.tau[0] / slope(d);
      if (!std::isfinite(step)) return false;
      if (std::abs(step) <= kLateralStepFloor) {
        t = trial;
        return true;
      }
      // Halve the step while it leaves the admissible region or increases |tau_lateral|.
      double alpha = 1.0;
      bool moved = false;
      for (int cut = 0; cut < 40 && !moved; ++cut, alpha *= 0.5) {
        try {
          const materials::EnergyDerivatives dn = eval(trial + alpha * step);
          if (std::abs(dn.tau[0]) < std::abs(d.tau[0]) || alpha * std::abs(step) < 1e-15) {
            trial += alpha * step;
            d = dn;
            moved = true;
          }
        } catch (const InvalidDeformation&) {
        }
      }
      if (!moved) return false;
    }
  } catch (const InvalidDeformation&) {
  }
  return false;
}

} // namespace

std::vector<UniaxialPoint> material_point_uniaxial(const MaterialParams& material, const std::vector<double>& stretches)
{
  material.validate();
  const int load = material.dim - 1;
  std::vector<UniaxialPoint> out;
  double t = 0.0;  // log lateral stretch, carried from point to point
  double x0 = 0.0; // axial log stretch where t was found

  for (double lambda : stretches) {
    if (!(lambda > 0.0)) throw ConfigError("stretch must be > 0");
    const double x3 = std::log(lambda);
    UniaxialPoint pt;
    pt.stretch = lambda;
    materials::EnergyDerivatives d;
    double trial = t;
    pt.converged = solve_lateral(material, x3, trial, d);
    // Far from the seed: continue along the axial path in substeps.
    for (int n = 2; !pt.converged && n <= 256; n *= 2) {
      trial = t;
      bool ok = true;
      for (int i = 1; i <= n && ok; ++i) ok = solve_lateral(material, x0 + (x3 - x0) * i / n, trial, d);
      pt.converged = ok;
    }
    if (pt.converged) {
      t = trial;
      x0 = x3;
      pt.lateral = std::exp(t);
      pt.nominal = d.tau[load] / lambda;
    } else {
      pt.nominal = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(pt);
  }
  return out;
}

CurveRecord uniaxial_curve(const MaterialParams& material, const std::vector<UniaxialPoint>& points)
{
  CurveRecord c;
  c.tag = std::string(materials::to_string(material.model));
  c.columns = {"stretch", "lateral_stretch", "nominal_stress", "nominal_stress_over_mu"};
  for (const auto& p : points)
    if (p.converged) c.rows.push_back({p.stretch, p.lateral, p.nominal, p.nominal / material.mu});
  return c;
}

double uniaxial_incompressible_stress(double mu, double k, double lambda)
{
  const double l = std::log(lambda);
  return 3.0 * mu * std::exp(1.5 * k * l * l) * l / lambda;
}

FitResult fit_uniaxial(const std::vector<std::pair<double, double>>& data)
{
  if (data.size() < 2) throw FitFailure("fit needs at least two data points");
  for (const auto& [l, s] : data)
    if (!(l > 0.0) || !std::isfinite(s)) throw FitFailure("fit data must have positive stretches and finite stresses");

  // mu from the point nearest the reference state, where S ~ 3 mu ln(lambda) / lambda.
  double mu = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [l, s] : data) {
    const double g = 3.0 * std::log(l) / l;
    if (std::abs(std::log(l)) > 1e-12 && std::abs(std::log(l)) < best) {
      best = std::abs(std::log(l));
      mu = s / g;
    }
  }
  if (!std::isfinite(best)) throw FitFailure("rank-deficient data: every stretch equals 1");
  if (!(mu > 0.0)) mu = 1.0;
  double k = 0.0;

  auto sse_at = [&](double m, double kk) {
    double sse = 0.0;
    for (const auto& [l, s] : data) {
      const double r = uniaxial_incompressible_stress(m, kk, l) - s;
      sse += r * r;
    }
    return sse;
  };

  FitResult res;
  double sse = sse_at(mu, k);
  std::ostringstream trace;
  for (int it = 1; it <= 100; ++it) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (const auto& [l, s] : data) {
      const double model = uniaxial_incompressible_stress(mu, k, l);
      const double ln = std::log(l);
      const Eigen::Vector2d j(model / mu, 1.5 * ln * ln * model);
      jtj += j * j.transpose();
      jtr += j * (model - s);
    }
    if (std::abs(jtj.determinant()) <= 1e-14 * jtj.squaredNorm())
      throw FitFailure("rank-deficient data: (mu, k) not identifiable");
    const Eigen::Vector2d step = -jtj.ldlt().solve(jtr);

    double alpha = 1.0;
    double trial = sse_at(mu + step[0], k + step[1]);
    while (!(trial <= sse) && alpha > 1e-10) {
      alpha *= 0.5;
      trial = sse_at(mu + alpha * step[0], k + alpha * step[1]);
    }
    mu += alpha * step[0];
    k += alpha * step[1];
    sse = std::min(sse, trial);
    trace << " [" << it << ": mu=" << mu << " k=" << k << " sse=" << sse << "]";
    res.iterations = it;
    if (alpha * std::abs(step[0]) <= 1e-14 * std::abs(mu) && alpha * std::abs(step[1]) <= 1e-14 * std::max(1.0, std::abs(k))) {
      res.mu = mu;
      res.k = k;
      res.residual = sse_at(mu, k);
      return res;
    }
  }
  throw FitFailure("Gauss-Newton did not converge in 100 iterations:" + trace.str().substr(0, 2000));
}

void emit_curves(std::ostream& out, const CurveRecord& record)
{
  for (size_t c = 0; c < record.columns.size(); ++c) out << (c ? "," : "") << record.columns[c];
  out << '\n';
  out << std::setprecision(17);
  for (const auto& row : record.rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

void write_curves(const std::string& path, const CurveRecord& record)
{
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  emit_curves(out, record);
  if (!out) throw IoError("write failed: " + path);
}

CurveRecord read_curves(std::istream& in)
{
  CurveRecord rec;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  std::stringstream head(line);
  std::string cell;
  while (std::getline(head, cell, ',')) rec.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("CSV: not a number '" + cell + "'");
      }
    }
    if (row.size() != rec.columns.size()) throw IoError("CSV: row width does not match the header");
    rec.rows.push_back(std::move(row));
  }
  return rec;
}

void emit_fields(std::ostream& out, const fem::Mesh& mesh, const Eigen::VectorXd& u,
                 const std::vector<std::vector<fem::GaussOutput>>& gauss, const std::string& title)
{
  if (u.size() != mesh.num_dofs()) throw ConfigError("field output: displacement size mismatch");
  if (!gauss.empty() && static_cast<int>(gauss.size()) != mesh.num_elements())
    throw ConfigError("field output: Gauss data size mismatch");
  const int nen = mesh.nodes_per_element();
  const int ne = mesh.num_elements();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& x : mesh.nodes) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  out << "CELLS " << ne << ' ' << ne * (nen + 1) << '\n';
  for (const auto& conn : mesh.elements) {
    out << nen;
    for (int a = 0; a < nen; ++a) out << ' ' << conn[a];
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << (mesh.kind == fem::ElementKind::Q4 ? 9 : 12) << '\n';

  out << "POINT_DATA " << mesh.num_nodes() << "\nVECTORS displacement double\n";
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    for (int c = 0; c < 3; ++c) out << (c ? " " : "") << (c < mesh.dim ? u[dof_index(mesh.dim, n, c)] : 0.0);
    out << '\n';
  }

  out << "CELL_DATA " << ne << '\n';
  std::vector<double> maxlog(ne, 0.0);
  std::vector<double> iso(ne, 0.0);
  std::vector<double> vol(ne, 0.0);
  for (int e = 0; e < static_cast<int>(gauss.size()); ++e) {
    for (const auto& gp : gauss[e]) {
      double m = gp.state.loglam[0];
      for (int k = 1; k < gp.state.dim; ++k) m = std::max(m, gp.state.loglam[k]);
      const auto w = materials::log_strain_measures(gp.state);
      maxlog[e] += m;
      iso[e] += w.omega_iso;
      vol[e] += w.omega_vol;
    }
    const double n = static_cast<double>(std::max<size_t>(1, gauss[e].size()));
    maxlog[e] /= n;
    iso[e] /= n;
    vol[e] /= n;
  }
  auto scalars = [&](const char* name, const std::vector<double>& v) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) out << x << '\n';
  };
  scalars("max_principal_log_strain", maxlog);
  scalars("omega_iso", iso);
  scalars("omega_vol", vol);
}

void write_fields(const std::string& path, const fem::Mesh& mesh, const Eigen::VectorXd& u,
                  const std::vector<std::vector<fem::GaussOutput>>& gauss, const std::string& title)
{
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  emit_fields(out, mesh, u, gauss, title);
  if (!out) throw IoError("write failed: " + path);
}

CaseRun run_case(const CaseSpec& spec, const solver::NewtonConfig& cfg, int threads)
{
  CaseRun run;
  run.setup = generate_case(spec);
  solver::Problem problem{run.setup.mesh, run.setup.dofs, spec.material, threads};
  run.result = solver::run_program(problem, run.setup.program, cfg);
  if (!run.result.trajectory.empty()) {
    fem::AssemblyOptions opt;
    opt.with_stiffness = false;
    opt.threads = threads;
    opt.keep_gauss = true;
    const double f = run.result.trajectory.back().factor;
    run.result.system = fem::assemble(run.setup.mesh, run.setup.dofs, spec.material, run.result.u,
                                      f * run.setup.program.f_ext, opt);
  }

  CurveRecord& c = run.curve;
  c.tag = output_stem(spec);
  const bool cube = spec.id == CaseId::UniaxialCube;
  const bool cook = spec.id == CaseId::Cook2d;
  c.columns = {"step", "factor", cook ? "tip_displacement" : "prescribed_displacement", cook ? "load" : "resultant"};
  if (cube) {
    c.columns.push_back("stretch");
    c.columns.push_back("nominal_stress_over_mu");
  }
  auto add = [&](int step, double factor, double disp, double resultant) {
    std::vector<double> row{static_cast<double>(step), factor, disp, cook ? factor * spec.final_target() : resultant};
    if (cube) {
      row.push_back(1.0 + disp / kCubeSize);
      row.push_back(resultant / run.setup.area / spec.material.mu);
    }
    c.rows.push_back(std::move(row));
  };
  add(0, 0.0, 0.0, 0.0);
  for (size_t s = 0; s < run.result.trajectory.size(); ++s) {
    const auto& t = run.result.trajectory[s];
    add(static_cast<int>(s + 1), t.factor, t.displacement, t.resultant);
  }
  return run;
}

} // namespace hencky::bench
