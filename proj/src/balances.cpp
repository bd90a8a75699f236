#include <cmath>
#include <numbers>

#include "axmhd/diagnostics.hpp"

namespace axmhd {
namespace {

Weighted weigh(const NodalField& dV, const NodalField& x) {
  Weighted w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w.value += dV[i] * x[i];
    w.scale += dV[i] * std::abs(x[i]);
  }
  return w;
}

Weighted weigh(const ElementField& dV, const ElementField& x) {
  Weighted w;
  for (std::size_t e = 0; e < x.size(); ++e) {
    w.value += dV[e] * x[e];
    w.scale += dV[e] * std::abs(x[e]);
  }
  return w;
}

Weighted operator+(Weighted a, const Weighted& b) {
  a.value += b.value;
  a.scale += b.scale;
  return a;
}

Weighted operator*(double k, Weighted a) {
  a.value *= k;
  a.scale *= std::abs(k);
  return a;
}

BracketResidual bracket(std::string name, const Weighted& a, const Weighted& b) {
  return {std::move(name), a.value, b.value, a.value + b.value, a.scale + b.scale};
}

NodalField masked(NodalField x, const std::vector<bool>& mask) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mask[i]) x[i] = 0.0;
  return x;
}

}  // namespace

BalanceReport semi_discrete_balances(const Mesh& mesh, const OperatorSet& ops, const PlasmaState& s,
                                     const PhysicsCoefficients& c, const BoundaryConditions& bc,
                                     const NodalField* f_source_rate) {
  const std::size_t nn = s.n.size();
  const double mu0 = constants::mu0;
  const double m_i = c.m_i();
  const double gm1 = c.gamma - 1.0;
  const auto psi_mask = psi_dirichlet_mask(mesh, bc);
  std::vector<bool> f_mask(nn, false);
  if (bc.f_interface)
    for (auto i : bc.interface_nodes) f_mask[i] = true;

  const RhsTerms t = evaluate_rhs_terms(ops, s, c, psi_mask, f_source_rate);
  PlasmaState d = assemble_rhs(t);
  constrain_derivative(mesh, d, bc);

  const NodalField& dV = ops.dV_n;
  const NodalField inv_r2 = ops.inv_r * ops.inv_r;
  const NodalField v2h = 0.5 * (square(s.v_r) + square(s.v_phi) + square(s.v_z));
  auto work = [&](const NodalVector3& a) {
    return t.rho * (s.v_r * a.r + s.v_phi * a.phi + s.v_z * a.z);
  };
  const auto grad_psi = gradient_node_to_element(ops, s.psi);
  auto psi_power = [&](const NodalField& psi_dot) {
    const auto g = gradient_node_to_element(ops, psi_dot);
    return (1.0 / mu0) *
           weigh(ops.dV_e, (grad_psi.r * g.r + grad_psi.z * g.z) * ops.inv_r_e * ops.inv_r_e);
  };
  auto f_power = [&](const NodalField& f_dot) { return (1.0 / mu0) * weigh(dV, s.f * f_dot * inv_r2); };

  BalanceReport rep;
  rep.dN = weigh(dV, d.n);
  rep.dN.scale = weigh(dV, t.n_adv).scale + weigh(dV, t.n_diff).scale;

  const NodalField f_src = masked(t.f_src, f_mask);
  const double two_pi = 2.0 * std::numbers::pi;
  rep.dPhi = (1.0 / two_pi) * weigh(dV, d.f * inv_r2);
  rep.dPhi.value -= (1.0 / two_pi) * dot(dV, f_src * inv_r2);
  rep.dPhi.scale = 0.0;
  for (const auto* x : {&t.f_adv, &t.f_omega, &t.f_res, &t.f_src})
    rep.dPhi.scale += (1.0 / two_pi) * weigh(dV, masked(*x, f_mask) * inv_r2).scale;

  const NodalField rvphi = ops.r * s.v_phi;
  rep.dP_phi = m_i * (weigh(dV, rvphi * d.n) + weigh(dV, s.n * ops.r * d.v_phi));

  // Time derivative of U_total from the constrained derivative.
  const NodalField rate_k = m_i * v2h * d.n + t.rho * (s.v_r * d.v_r + s.v_phi * d.v_phi + s.v_z * d.v_z);
  const Weighted dU_nodal = weigh(dV, rate_k + (1.0 / gm1) * (d.p_i + d.p_e)) + f_power(d.f);
  const Weighted dU_psi = psi_power(d.psi);
  rep.source_power = f_power(f_src).value;
  rep.dU = dU_nodal + dU_psi;
  rep.dU.value -= rep.source_power;

  const NodalField psi_adv = masked(t.psi_adv, psi_mask);
  const NodalField psi_res = masked(t.psi_res, psi_mask);
  auto& b = rep.brackets;
  b.push_back(bracket("advection", weigh(dV, m_i * v2h * t.n_adv), weigh(dV, work(t.a_adv))));
  b.push_back(bracket("pressure", weigh(dV, work(t.a_pres)), (1.0 / gm1) * weigh(dV, t.pi_adv + t.pe_adv)));
  b.push_back(bracket("lorentz_psi", weigh(dV, work(t.a_lor_psi)), psi_power(psi_adv)));
  b.push_back(bracket("lorentz_f", weigh(dV, work(t.a_lor_f)), f_power(masked(t.f_adv, f_mask))));
  b.push_back(bracket("lorentz_phi", weigh(dV, work(t.a_lor_phi)), f_power(masked(t.f_omega, f_mask))));
  b.push_back(bracket("ohmic_toroidal", psi_power(psi_res), (1.0 / gm1) * weigh(dV, t.pe_ohm_tor)));
  b.push_back(bracket("ohmic_poloidal", f_power(masked(t.f_res, f_mask)), (1.0 / gm1) * weigh(dV, t.pe_ohm_pol)));
  b.push_back(bracket("heat_flux", (1.0 / gm1) * weigh(dV, t.pi_flux), (1.0 / gm1) * weigh(dV, t.pe_flux)));
  b.push_back(bracket("viscous", weigh(dV, work(t.a_visc)), (1.0 / gm1) * weigh(dV, t.pi_Qpi)));
  b.push_back(bracket("exchange", (1.0 / gm1) * weigh(dV, t.pi_Qie), (1.0 / gm1) * weigh(dV, t.pe_Qie)));
  b.push_back(bracket("density_correction", weigh(dV, m_i * v2h * t.n_diff),
                      weigh(dV, work(t.a_corr)) + (1.0 / gm1) * weigh(dV, t.pi_Qzeta)));

  const std::array<const NodalField*, 3> v{&s.v_r, &s.v_phi, &s.v_z};
  const std::array<const NodalField*, 3> corr{&t.a_corr.r, &t.a_corr.phi, &t.a_corr.z};
  for (int k = 0; k < 3; ++k) {
    const NodalField force = t.rho * *corr[k];
    rep.correction_momentum[k] = weigh(dV, m_i * *v[k] * t.n_diff) + weigh(dV, force);
    // Q_ζ (model 1) is shared equally among the three components of ½ m_i v².
    rep.correction_energy[k] = weigh(dV, 0.5 * m_i * square(*v[k]) * t.n_diff) + weigh(dV, *v[k] * force);
    if (c.correction_model == CorrectionModel::ParticleSource)
      rep.correction_energy[k] = rep.correction_energy[k] + weigh(dV, 0.5 * m_i * square(*v[k]) * t.n_diff);
  }
  return rep;
}

}  // namespace axmhd
