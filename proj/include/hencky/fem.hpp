#pragma once

#include "hencky/materials.hpp"
#include "hencky/tensor.hpp"

#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hencky::fem {

using materials::MaterialParams;
using tensor::Mat3;
using tensor::SymTensor;
using tensor::Vec3;

enum class ElementKind { Q4, H8 };

int nodes_per_element(ElementKind kind);
int element_dim(ElementKind kind);
std::string to_string(ElementKind kind);
ElementKind element_kind_from_string(const std::string& name);

constexpr int kMaxElementNodes = 8;

/// Nodes in mm and Q4/H8 connectivity (0-based, counter-clockwise / VTK ordering).
struct Mesh
{
  int dim = 3;
  ElementKind kind = ElementKind::H8;
  std::vector<Vec3> nodes;
  std::vector<std::array<int, kMaxElementNodes>> elements;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_dofs() const { return dim * num_nodes(); }
  int nodes_per_element() const { return fem::nodes_per_element(kind); }

  /// Reference coordinates of the nodes of element e.
  std::array<Vec3, kMaxElementNodes> element_coordinates(int e) const;

  /// Index range and positive reference Jacobian at every Gauss point.
  void validate() const;
};

/// Plain-text mesh: `dim nnodes nelems kind`, then node coordinates, then connectivity.
Mesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

struct ShapeValues
{
  int count = 0;
  std::array<double, kMaxElementNodes> value{};
  std::array<Vec3, kMaxElementNodes> grad{}; ///< reference-coordinate gradients
};

ShapeValues shape_functions(ElementKind kind, const Vec3& zeta);

struct QuadraturePoint
{
  Vec3 zeta;
  double weight;
};

/// Full 2-point Gauss product rule (4 points for Q4, 8 for H8).
std::span<const QuadraturePoint> gauss_rule(ElementKind kind);

struct GaussPointState
{
  int dim = 3;
  Mat3 F = Mat3::Identity();
  SymTensor B;
  double J = 1.0;
  double dV = 0.0; ///< weight x det(reference Jacobian), mm^dim
  int count = 0;
  std::array<Vec3, kMaxElementNodes> grad_X{};
  std::array<Vec3, kMaxElementNodes> grad_x{};
};

/// F = sum (X_A + u_A) (x) grad_X N^A at zeta, with spatial gradients F^-T grad_X N^A.
GaussPointState deformation_gradient(ElementKind kind, std::span<const Vec3> x_ref, std::span<const Vec3> u,
                                     const Vec3& zeta, double weight = 1.0);

/// Per-Gauss-point output kept for field export.
struct GaussOutput
{
  SymTensor tau;
  materials::PrincipalState state;
};

struct ElementResult
{
  Eigen::VectorXd f_int;
  Eigen::MatrixXd K;
  std::vector<GaussOutput> gauss;
};

/// Internal force and tangent stiffness (material + geometric) over the reference volume.
ElementResult element_force_and_stiffness(const MaterialParams& material, ElementKind kind,
                                          std::span<const Vec3> x_ref, std::span<const Vec3> u,
                                          bool with_stiffness = true);

inline int dof_index(int dim, int node, int component) { return dim * node + component; }

/// Partition of the dofs into free and constrained sets.
class DofMap
{
public:
  DofMap() = default;
  DofMap(int dim, int num_nodes);

  void constrain(int dof);
  /// Rebuilds the free/constrained index lists after constrain() calls.
  void finalize();

  int dim() const { return dim_; }
  int num_dofs() const { return static_cast<int>(constrained_.size()); }
  bool is_constrained(int dof) const { return constrained_[dof] != 0; }
  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& constrained_dofs() const { return fixed_; }
  /// Position in free_dofs() or constrained_dofs().
  int local_index(int dof) const { return local_[dof]; }

private:
  int dim_ = 3;
  std::vector<char> constrained_;
  std::vector<int> free_;
  std::vector<int> fixed_;
  std::vector<int> local_;
};

struct AssemblyOptions
{
  bool with_stiffness = true;
  int threads = 1;
  bool keep_gauss = false;
};

struct GlobalSystem
{
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd f_int;
  Eigen::VectorXd residual;  ///< f_ext - f_int
  Eigen::VectorXd reactions; ///< -residual at constrained dofs, zero elsewhere
  std::vector<std::vector<GaussOutput>> gauss;
};

GlobalSystem assemble(const Mesh& mesh, const DofMap& dofs, const MaterialParams& material, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& f_ext, const AssemblyOptions& options = {});

/// Free-free and free-constrained blocks of K, with the free part of the residual.
struct CondensedSystem
{
  Eigen::SparseMatrix<double> K_ff;
  Eigen::SparseMatrix<double> K_fc;
  Eigen::VectorXd r_f;
};

CondensedSystem condense(const GlobalSystem& system, const DofMap& dofs);

/// Thread count from HENCKY_FEM_THREADS (default 1).
int threads_from_environment();

} // namespace hencky::fem
