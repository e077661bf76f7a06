#include "hencky/fem.hpp"

#include "hencky/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

namespace hencky::fem {

namespace {

constexpr double kGauss = 0.57735026918962576451; // 1/sqrt(3)

// Reference coordinates of the element nodes (VTK ordering).
constexpr double kQ4Nodes[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
constexpr double kH8Nodes[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                   {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

std::array<QuadraturePoint, 4> make_q4_rule()
{
  std::array<QuadraturePoint, 4> r;
  for (int a = 0; a < 4; ++a) r[a] = {Vec3(kQ4Nodes[a][0] * kGauss, kQ4Nodes[a][1] * kGauss, 0.0), 1.0};
  return r;
}

std::array<QuadraturePoint, 8> make_h8_rule()
{
  std::array<QuadraturePoint, 8> r;
  for (int a = 0; a < 8; ++a)
    r[a] = {Vec3(kH8Nodes[a][0] * kGauss, kH8Nodes[a][1] * kGauss, kH8Nodes[a][2] * kGauss), 1.0};
  return r;
}

const std::array<QuadraturePoint, 4> kQ4Rule = make_q4_rule();
const std::array<QuadraturePoint, 8> kH8Rule = make_h8_rule();

// Voigt rows of the symmetric gradient operator for one node; shear rows carry the factor 2
// through the two gradient entries.
void fill_b_block(Eigen::MatrixXd& bmat, int dim, int col, const Vec3& g)
{
  if (dim == 2) {
    bmat(0, col) = g[0];
    bmat(1, col + 1) = g[1];
    bmat(2, col) = g[1];
    bmat(2, col + 1) = g[0];
    return;
  }
  bmat(0, col) = g[0];
  bmat(1, col + 1) = g[1];
  bmat(2, col + 2) = g[2];
  bmat(3, col) = g[1];
  bmat(3, col + 1) = g[0];
  bmat(4, col + 1) = g[2];
  bmat(4, col + 2) = g[1];
  bmat(5, col) = g[2];
  bmat(5, col + 2) = g[0];
}

template <class E>
[[noreturn]] void rethrow_annotated(const E& e, int element)
{
  throw E("element " + std::to_string(element) + ": " + e.what());
}

ElementResult element_annotated(const MaterialParams& material, const Mesh& mesh, const Eigen::VectorXd& u, int e,
                                bool with_stiffness)
{
  const int nen = mesh.nodes_per_element();
  const auto x = mesh.element_coordinates(e);
  std::array<Vec3, kMaxElementNodes> ue{};
  for (int a = 0; a < nen; ++a) {
    const int node = mesh.elements[e][a];
    ue[a].setZero();
    for (int c = 0; c < mesh.dim; ++c) ue[a][c] = u[dof_index(mesh.dim, node, c)];
  }
  try {
    return element_force_and_stiffness(material, mesh.kind, std::span(x.data(), nen), std::span(ue.data(), nen),
                                       with_stiffness);
  } catch (const LockingLimit& err) {
    rethrow_annotated(err, e);
  } catch (const InvalidDeformation& err) {
    rethrow_annotated(err, e);
  } catch (const DegenerateElement& err) {
    rethrow_annotated(err, e);
  }
}

} // namespace

int nodes_per_element(ElementKind kind) { return kind == ElementKind::Q4 ? 4 : 8; }

int element_dim(ElementKind kind) { return kind == ElementKind::Q4 ? 2 : 3; }

std::string to_string(ElementKind kind) { return kind == ElementKind::Q4 ? "Q4" : "H8"; }

ElementKind element_kind_from_string(const std::string& name)
{
  if (name == "Q4" || name == "q4") return ElementKind::Q4;
  if (name == "H8" || name == "h8") return ElementKind::H8;
  throw ConfigError("unknown element kind '" + name + "'");
}

std::array<Vec3, kMaxElementNodes> Mesh::element_coordinates(int e) const
{
  std::array<Vec3, kMaxElementNodes> x{};
  for (int a = 0; a < nodes_per_element(); ++a) x[a] = nodes[elements[e][a]];
  return x;
}

void Mesh::validate() const
{
  if (dim != element_dim(kind)) throw ConfigError("mesh dimension does not match element kind " + to_string(kind));
  const int nen = nodes_per_element();
  std::array<Vec3, kMaxElementNodes> zero;
  zero.fill(Vec3::Zero());
  for (int e = 0; e < num_elements(); ++e) {
    for (int a = 0; a < nen; ++a)
      if (elements[e][a] < 0 || elements[e][a] >= num_nodes())
        throw ConfigError("element " + std::to_string(e) + " references node " + std::to_string(elements[e][a]) +
                          " out of range");
    const auto x = element_coordinates(e);
    try {
      for (const auto& q : gauss_rule(kind))
        deformation_gradient(kind, std::span(x.data(), nen), std::span(zero.data(), nen), q.zeta, q.weight);
    } catch (const DegenerateElement& err) {
      rethrow_annotated(err, e);
    }
  }
}

Mesh read_mesh(std::istream& in)
{
  Mesh mesh;
  int nnodes = 0;
  int nelems = 0;
  std::string kind;
  if (!(in >> mesh.dim >> nnodes >> nelems >> kind)) throw IoError("mesh header: expected `dim nnodes nelems kind`");
  mesh.kind = element_kind_from_string(kind);
  if (mesh.dim != element_dim(mesh.kind)) throw IoError("mesh header: dimension does not match element kind");
  if (nnodes < 0 || nelems < 0) throw IoError("mesh header: negative counts");
  mesh.nodes.assign(nnodes, Vec3::Zero());
  for (auto& x : mesh.nodes)
    for (int c = 0; c < mesh.dim; ++c)
      if (!(in >> x[c])) throw IoError("mesh: truncated node coordinates");
  mesh.elements.assign(nelems, {});
  for (auto& conn : mesh.elements) {
    conn.fill(-1);
    for (int a = 0; a < mesh.nodes_per_element(); ++a)
      if (!(in >> conn[a])) throw IoError("mesh: truncated connectivity");
  }
  mesh.validate();
  return mesh;
}

void write_mesh(std::ostream& out, const Mesh& mesh)
{
  out << mesh.dim << ' ' << mesh.num_nodes() << ' ' << mesh.num_elements() << ' ' << to_string(mesh.kind) << '\n';
  out.precision(17);
  for (const auto& x : mesh.nodes) {
    for (int c = 0; c < mesh.dim; ++c) out << (c ? " " : "") << x[c];
    out << '\n';
  }
  for (const auto& conn : mesh.elements) {
    for (int a = 0; a < mesh.nodes_per_element(); ++a) out << (a ? " " : "") << conn[a];
    out << '\n';
  }
}

Mesh load_mesh(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file " + path);
  try {
    return read_mesh(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

ShapeValues shape_functions(ElementKind kind, const Vec3& zeta)
{
  ShapeValues s;
  if (kind == ElementKind::Q4) {
    s.count = 4;
    for (int a = 0; a < 4; ++a) {
      const double xa = kQ4Nodes[a][0];
      const double ya = kQ4Nodes[a][1];
      const double fx = 1.0 + xa * zeta[0];
      const double fy = 1.0 + ya * zeta[1];
      s.value[a] = 0.25 * fx * fy;
      s.grad[a] = Vec3(0.25 * xa * fy, 0.25 * ya * fx, 0.0);
    }
    return s;
  }
  s.count = 8;
  for (int a = 0; a < 8; ++a) {
    const double xa = kH8Nodes[a][0];
    const double ya = kH8Nodes[a][1];
    const double za = kH8Nodes[a][2];
    const double fx = 1.0 + xa * zeta[0];
    const double fy = 1.0 + ya * zeta[1];
    const double fz = 1.0 + za * zeta[2];
    s.value[a] = 0.125 * fx * fy * fz;
    s.grad[a] = Vec3(0.125 * xa * fy * fz, 0.125 * ya * fx * fz, 0.125 * za * fx * fy);
  }
  return s;
}

std::span<const QuadraturePoint> gauss_rule(ElementKind kind)
{
  if (kind == ElementKind::Q4) return kQ4Rule;
  return kH8Rule;
}

GaussPointState deformation_gradient(ElementKind kind, std::span<const Vec3> x_ref, std::span<const Vec3> u,
                                     const Vec3& zeta, double weight)
{
  const int dim = element_dim(kind);
  const ShapeValues sh = shape_functions(kind, zeta);
  if (static_cast<int>(x_ref.size()) != sh.count || static_cast<int>(u.size()) != sh.count)
    throw ConfigError("element node count does not match element kind");

  Mat3 jac = Mat3::Identity();
  jac.topLeftCorner(dim, dim).setZero();
  for (int a = 0; a < sh.count; ++a)
    jac.topLeftCorner(dim, dim) += x_ref[a].head(dim) * sh.grad[a].head(dim).transpose();
  const double det_j = jac.determinant();
  if (!(det_j > 0.0)) throw DegenerateElement("reference Jacobian determinant " + std::to_string(det_j) + " <= 0");

  GaussPointState g;
  g.dim = dim;
  g.count = sh.count;
  g.dV = weight * det_j;
  const Mat3 jinv_t = jac.inverse().transpose();
  Mat3 f = Mat3::Identity();
  f.topLeftCorner(dim, dim).setZero();
  for (int a = 0; a < sh.count; ++a) {
    g.grad_X[a] = jinv_t * sh.grad[a];
    if (dim == 2) g.grad_X[a][2] = 0.0;
    f.topLeftCorner(dim, dim) += (x_ref[a] + u[a]).head(dim) * g.grad_X[a].head(dim).transpose();
  }
  g.F = f;
  g.J = f.determinant();
  if (!(g.J > 0.0)) throw InvalidDeformation("inverted element: det F = " + std::to_string(g.J));
  const Mat3 finv_t = f.inverse().transpose();
  for (int a = 0; a < sh.count; ++a) {
    g.grad_x[a] = finv_t * g.grad_X[a];
    if (dim == 2) g.grad_x[a][2] = 0.0;
  }
  g.B = SymTensor::from_matrix(dim, f * f.transpose());
  return g;
}

ElementResult element_force_and_stiffness(const MaterialParams& material, ElementKind kind,
                                          std::span<const Vec3> x_ref, std::span<const Vec3> u, bool with_stiffness)
{
  const int dim = element_dim(kind);
  if (material.dim != dim) throw ConfigError("material dimension does not match element kind " + to_string(kind));
  const int nen = nodes_per_element(kind);
  const int ndof = dim * nen;
  const int nv = tensor::voigt_size(dim);

  ElementResult r;
  r.f_int = Eigen::VectorXd::Zero(ndof);
  if (with_stiffness) r.K = Eigen::MatrixXd::Zero(ndof, ndof);
  Eigen::MatrixXd bmat(nv, ndof);
  Eigen::MatrixXd db(nv, ndof);

  for (const auto& q : gauss_rule(kind)) {
    const GaussPointState g = deformation_gradient(kind, x_ref, u, q.zeta, q.weight);
    const auto st = materials::spatial_tangent_and_stress(material, g.B);
    const Mat3 tau = st.tau_tensor.matrix();
    r.gauss.push_back({st.tau_tensor, st.state});

    for (int a = 0; a < nen; ++a) r.f_int.segment(dim * a, dim) += g.dV * (tau * g.grad_x[a]).head(dim);
    if (!with_stiffness) continue;

    bmat.setZero();
    for (int a = 0; a < nen; ++a) fill_b_block(bmat, dim, dim * a, g.grad_x[a]);
    db.noalias() = st.c_spatial.matrix() * bmat;
    r.K.noalias() += g.dV * bmat.transpose() * db;
    for (int a = 0; a < nen; ++a)
      for (int b = 0; b < nen; ++b) {
        const double geo = g.dV * g.grad_x[a].dot(tau * g.grad_x[b]);
        for (int c = 0; c < dim; ++c) r.K(dim * a + c, dim * b + c) += geo;
      }
  }
  return r;
}

DofMap::DofMap(int dim, int num_nodes) : dim_(dim), constrained_(static_cast<size_t>(dim) * num_nodes, 0)
{
  finalize();
}

void DofMap::constrain(int dof)
{
  if (dof < 0 || dof >= num_dofs()) throw ConfigError("constrained dof " + std::to_string(dof) + " out of range");
  constrained_[dof] = 1;
}

void DofMap::finalize()
{
  free_.clear();
  fixed_.clear();
  local_.assign(constrained_.size(), -1);
  for (int d = 0; d < num_dofs(); ++d) {
    auto& list = constrained_[d] ? fixed_ : free_;
    local_[d] = static_cast<int>(list.size());
    list.push_back(d);
  }
}

GlobalSystem assemble(const Mesh& mesh, const DofMap& dofs, const MaterialParams& material, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& f_ext, const AssemblyOptions& options)
{
  const int ndof = mesh.num_dofs();
  if (u.size() != ndof || f_ext.size() != ndof || dofs.num_dofs() != ndof)
    throw ConfigError("assembly: vector sizes do not match the mesh dof count");

  const int ne = mesh.num_elements();
  const int nen = mesh.nodes_per_element();
  const int dim = mesh.dim;
  std::vector<ElementResult> results(ne);

  const int threads = std::clamp(options.threads, 1, std::max(1, ne));
  if (threads == 1) {
    for (int e = 0; e < ne; ++e) results[e] = element_annotated(material, mesh, u, e, options.with_stiffness);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      const int lo = static_cast<int>(static_cast<long>(ne) * t / threads);
      const int hi = static_cast<int>(static_cast<long>(ne) * (t + 1) / threads);
      pool.emplace_back([&, t, lo, hi] {
        try {
          for (int e = lo; e < hi; ++e) results[e] = element_annotated(material, mesh, u, e, options.with_stiffness);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  // Serial scatter in element order: the sums do not depend on the thread count.
  GlobalSystem sys;
  sys.f_int = Eigen::VectorXd::Zero(ndof);
  std::vector<Eigen::Triplet<double>> triplets;
  if (options.with_stiffness) triplets.reserve(static_cast<size_t>(ne) * nen * nen * dim * dim);
  std::vector<int> map(static_cast<size_t>(nen) * dim);
  for (int e = 0; e < ne; ++e) {
    for (int a = 0; a < nen; ++a)
      for (int c = 0; c < dim; ++c) map[dim * a + c] = dof_index(dim, mesh.elements[e][a], c);
    const ElementResult& r = results[e];
    for (size_t i = 0; i < map.size(); ++i) sys.f_int[map[i]] += r.f_int[i];
    if (options.with_stiffness)
      for (size_t j = 0; j < map.size(); ++j)
        for (size_t i = 0; i < map.size(); ++i) triplets.emplace_back(map[i], map[j], r.K(i, j));
  }
  if (options.with_stiffness) {
    sys.K.resize(ndof, ndof);
    sys.K.setFromTriplets(triplets.begin(), triplets.end());
    sys.K.makeCompressed();
  }
  sys.residual = f_ext - sys.f_int;
  sys.reactions = Eigen::VectorXd::Zero(ndof);
  for (int d : dofs.constrained_dofs()) sys.reactions[d] = -sys.residual[d];
  if (options.keep_gauss) {
    sys.gauss.resize(ne);
    for (int e = 0; e < ne; ++e) sys.gauss[e] = std::move(results[e].gauss);
  }
  return sys;
}

CondensedSystem condense(const GlobalSystem& system, const DofMap& dofs)
{
  const int nf = static_cast<int>(dofs.free_dofs().size());
  const int nc = static_cast<int>(dofs.constrained_dofs().size());
  CondensedSystem out;
  out.r_f.resize(nf);
  for (int i = 0; i < nf; ++i) out.r_f[i] = system.residual[dofs.free_dofs()[i]];

  std::vector<Eigen::Triplet<double>> ff;
  std::vector<Eigen::Triplet<double>> fc;
  ff.reserve(system.K.nonZeros());
  for (int col = 0; col < system.K.outerSize(); ++col) {
    const bool col_fixed = dofs.is_constrained(col);
    const int lc = dofs.local_index(col);
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.K, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (dofs.is_constrained(row)) continue;
      const int lr = dofs.local_index(row);
      (col_fixed ? fc : ff).emplace_back(lr, lc, it.value());
    }
  }
  out.K_ff.resize(nf, nf);
  out.K_ff.setFromTriplets(ff.begin(), ff.end());
  out.K_fc.resize(nf, nc);
  out.K_fc.setFromTriplets(fc.begin(), fc.end());
  return out;
}

int threads_from_environment()
{
  const char* env = std::getenv("HENCKY_FEM_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError(std::string("HENCKY_FEM_THREADS must be a positive integer, got '") +
                                               env + "'");
  return static_cast<int>(std::min<long>(n, 256));
}

} // namespace hencky::fem
