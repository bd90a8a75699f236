#include <cmath>

#include "axmhd/mhd.hpp"

namespace axmhd {
namespace {

// Unit tangent per boundary node; zero vector at corners so the poloidal velocity vanishes there.
std::vector<Point> tangents(const Mesh& mesh) {
  const auto frame = boundary_frame(mesh);
  std::vector<Point> t(frame.nodes.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = frame.corner[k] ? Point{0.0, 0.0} : frame.tangent[k];
  return t;
}

void constrain_velocity(const Mesh& mesh, NodalField& vr, NodalField& vphi, NodalField& vz,
                        const BoundaryConditions& bc) {
  const auto& loop = mesh.boundary_nodes();
  if (bc.velocity_mode == VelocityMode::AllZero) {
    for (auto b : loop) {
      vr[b] = 0.0;
      vz[b] = 0.0;
      if (!bc.angular_momentum_mode) vphi[b] = 0.0;
    }
    return;
  }
  const auto t = tangents(mesh);
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const auto b = loop[k];
    const double vt = vr[b] * t[k].r + vz[b] * t[k].z;
    vr[b] = vt * t[k].r;
    vz[b] = vt * t[k].z;
  }
}

}  // namespace

std::vector<bool> psi_dirichlet_mask(const Mesh& mesh, const BoundaryConditions& bc) {
  if (bc.psi_mode == PsiMode::Free && !bc.angular_momentum_mode) return std::vector<bool>(mesh.num_nodes(), false);
  return mesh.boundary_mask();
}

void apply_boundary_conditions(const Mesh& mesh, PlasmaState& s, const BoundaryConditions& bc, double t, double Z) {
  const auto& loop = mesh.boundary_nodes();
  constrain_velocity(mesh, s.v_r, s.v_phi, s.v_z, bc);

  if (bc.angular_momentum_mode || bc.psi_mode == PsiMode::Zero) {
    for (auto b : loop) s.psi[b] = 0.0;
  } else if (bc.psi_mode == PsiMode::Table) {
    if (!bc.psi_boundary) fail(ErrorCode::ConfigError, "psi boundary table requested but not provided");
    const auto values = bc.psi_boundary(t);
    if (values.size() != loop.size()) fail(ErrorCode::SizeMismatch, "psi boundary values do not cover the boundary");
    for (std::size_t k = 0; k < loop.size(); ++k) s.psi[loop[k]] = values[k];
  }

  if (bc.T_wall_eV) {
    const double T = *bc.T_wall_eV * constants::eV;
    for (auto b : loop) {
      s.p_i[b] = s.n[b] * T;
      s.p_e[b] = Z * s.n[b] * T;
    }
  }
  if (bc.f_interface)
    for (auto i : bc.interface_nodes) s.f[i] = *bc.f_interface;
}

void constrain_derivative(const Mesh& mesh, PlasmaState& d, const BoundaryConditions& bc) {
  constrain_velocity(mesh, d.v_r, d.v_phi, d.v_z, bc);
  const auto mask = psi_dirichlet_mask(mesh, bc);
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) d.psi[i] = 0.0;
  if (bc.f_interface)
    for (auto i : bc.interface_nodes) d.f[i] = 0.0;
}

}  // namespace axmhd
