#include <algorithm>
#include <cmath>

#include "axmhd/mhd.hpp"

namespace axmhd {

PlasmaState PlasmaState::zeros(std::size_t num_nodes) {
  PlasmaState s;
  for (auto* f : s.fields()) *f = NodalField(num_nodes);
  return s;
}

PlasmaState axpy(const PlasmaState& a, double s, const PlasmaState& d) {
  PlasmaState out = a;
  auto of = out.fields();
  auto df = d.fields();
  for (std::size_t k = 0; k < of.size(); ++k) of[k]->add_scaled(s, *df[k]);
  return out;
}

ElementVectorField poloidal_field_e(const OperatorSet& ops, const NodalField& psi) {
  return {-ops.Dze(psi) * ops.inv_r_e, ops.Dre(psi) * ops.inv_r_e};
}

NodalVector3 viscous_force(const OperatorSet& ops, const PlasmaState& s, const NodalField& mu) {
  const ElementField mu_e = ops.Avg(mu);
  const ElementField mu_re = mu_e * ops.r_e;
  const ElementField dr_vr = ops.Dre(s.v_r);
  const ElementField dz_vz = ops.Dze(s.v_z);
  const ElementField shear = ops.Dre(s.v_z) + ops.Dze(s.v_r);
  const ElementField div_e = divergence_node_to_element(ops, {s.v_r, s.v_z});
  const auto grad_w = gradient_node_to_element(ops, s.v_phi * ops.inv_r);
  const ElementField mu_re2 = mu_re * ops.r_e;
  const ElementField mu_div = mu_e * div_e;

  NodalVector3 pi;
  pi.r = (-2.0 * ops.Drn(mu_re * dr_vr) - ops.Dzn(mu_re * shear)) * ops.inv_r + (2.0 / 3.0) * ops.Drn(mu_div) +
         2.0 * mu * s.v_r * ops.inv_r * ops.inv_r;
  pi.phi = -divergence_element_to_node(ops, {mu_re2 * grad_w.r, mu_re2 * grad_w.z}) * ops.inv_r;
  pi.z = (-2.0 * ops.Dzn(mu_re * dz_vz) - ops.Drn(mu_re * shear)) * ops.inv_r + (2.0 / 3.0) * ops.Dzn(mu_div);
  return pi;
}

NodalField viscous_heating_Qpi(const OperatorSet& ops, const PlasmaState& s, const NodalField& mu) {
  const ElementField mu_e = ops.Avg(mu);
  const ElementField dr_vr = ops.Dre(s.v_r);
  const ElementField dz_vz = ops.Dze(s.v_z);
  const ElementField shear = ops.Dre(s.v_z) + ops.Dze(s.v_r);
  const ElementField div_e = divergence_node_to_element(ops, {s.v_r, s.v_z});
  const auto grad_w = gradient_node_to_element(ops, s.v_phi * ops.inv_r);
  const ElementField rot = ops.r_e2 * (square(grad_w.r) + square(grad_w.z));
  const ElementField inner =
      mu_e * (2.0 * square(dr_vr) + 2.0 * square(dz_vz) + rot + square(shear) - (2.0 / 3.0) * square(div_e));
  const NodalField hoop = s.v_r * ops.inv_r;
  return ops.Wn(inner) + 2.0 * mu * hoop * hoop;
}

ElementVectorField heat_flux(const OperatorSet& ops, const NodalField& T, const ElementVectorField& B,
                             double kappa_par, double kappa_perp) {
  const auto g = gradient_node_to_element(ops, T);
  const std::size_t ne = g.r.size();
  ElementVectorField q{ElementField(ne), ElementField(ne)};
  for (std::size_t e = 0; e < ne; ++e) {
    const double b2 = B.r[e] * B.r[e] + B.z[e] * B.z[e];
    double qr = kappa_perp * g.r[e];
    double qz = kappa_perp * g.z[e];
    if (b2 > 0.0) {
      const double proj = (kappa_par - kappa_perp) * (B.r[e] * g.r[e] + B.z[e] * g.z[e]) / b2;
      qr += proj * B.r[e];
      qz += proj * B.z[e];
    }
    q.r[e] = -qr;
    q.z[e] = -qz;
  }
  return q;
}

DensityCorrection density_corrections(const OperatorSet& ops, const PlasmaState& s, double m_i, double zeta,
                                      CorrectionModel model) {
  const std::size_t nn = s.n.size();
  DensityCorrection out{{NodalField(nn), NodalField(nn), NodalField(nn)}, NodalField(nn)};
  if (zeta == 0.0 || model == CorrectionModel::None) return out;
  const auto gn = gradient_node_to_element(ops, s.n);
  const NodalField lap_n = divergence_element_to_node(ops, gn);
  if (model == CorrectionModel::ParticleSource) {
    const NodalField zeta_n = zeta * lap_n;
    out.force.r = -m_i * s.v_r * zeta_n;
    out.force.phi = -m_i * s.v_phi * zeta_n;
    out.force.z = -m_i * s.v_z * zeta_n;
    out.Q = 0.5 * m_i * (square(s.v_r) + square(s.v_phi) + square(s.v_z)) * zeta_n;
    return out;
  }
  auto component = [&](const NodalField& v) {
    const auto gv = gradient_node_to_element(ops, v);
    const ElementField v_e = ops.Avg(v);
    const NodalField t1 = ops.Wn(gn.r * gv.r + gn.z * gv.z);
    const NodalField t2 = divergence_element_to_node(ops, {v_e * gn.r, v_e * gn.z});
    return (0.5 * m_i * zeta) * (t1 + t2 - v * lap_n);
  };
  out.force.r = component(s.v_r);
  out.force.phi = component(s.v_phi);
  out.force.z = component(s.v_z);
  return out;
}

void check_state(const PlasmaState& s) {
  const auto fields = s.fields();
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto& f = *fields[k];
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!std::isfinite(f[i]))
        fail(ErrorCode::NonFiniteValue, std::string("field ") + PlasmaState::names[k] + " at node " + std::to_string(i));
  }
  for (std::size_t i = 0; i < s.n.size(); ++i)
    if (!(s.n[i] > 0.0))
      fail(ErrorCode::NonPositiveDensity, "field n at node " + std::to_string(i) + " = " + std::to_string(s.n[i]));
  const double scale = std::max(max_abs(s.p_i), max_abs(s.p_e));
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    if (s.p_i[i] < -1e-12 * scale)
      fail(ErrorCode::NegativePressure, "field p_i at node " + std::to_string(i) + " = " + std::to_string(s.p_i[i]));
    if (s.p_e[i] < -1e-12 * scale)
      fail(ErrorCode::NegativePressure, "field p_e at node " + std::to_string(i) + " = " + std::to_string(s.p_e[i]));
  }
}

RhsTerms evaluate_rhs_terms(const OperatorSet& ops, const PlasmaState& s, const PhysicsCoefficients& c,
                            const std::vector<bool>& psi_dirichlet, const NodalField* f_source_rate) {
  check_state(s);
  const std::size_t nn = s.n.size();
  const double m_i = c.m_i();
  const double mu0 = constants::mu0;
  const double gm1 = c.gamma - 1.0;
  const NodalField& inv_r = ops.inv_r;
  const NodalField inv_r2 = inv_r * inv_r;

  RhsTerms t;
  t.rho = m_i * s.n;
  const NodalField inv_rho = map(t.rho, [](double x) { return 1.0 / x; });

  // continuity
  t.n_adv = -divergence_node_to_node(ops, {s.n * s.v_r, s.n * s.v_z});
  const auto grad_n_e = gradient_node_to_element(ops, s.n);
  t.n_diff = c.zeta * divergence_element_to_node(ops, grad_n_e);

  // momentum: −∇(v²/2) + v×(∇×v)
  const NodalField v2h = 0.5 * (square(s.v_r) + square(s.v_phi) + square(s.v_z));
  const NodalField curl_phi = ops.Dz(s.v_r) - ops.Dr(s.v_z);
  const NodalField rvphi = ops.r * s.v_phi;
  const NodalField dr_rvphi = ops.Dr(rvphi);
  const NodalField dz_rvphi = ops.Dz(rvphi);
  t.a_adv.r = -ops.Dr(v2h) - s.v_z * curl_phi + s.v_phi * dr_rvphi * inv_r;
  t.a_adv.phi = -(s.v_r * dr_rvphi + s.v_z * dz_rvphi) * inv_r;
  t.a_adv.z = -ops.Dz(v2h) + s.v_r * curl_phi + s.v_phi * dz_rvphi * inv_r;

  const NodalField p = s.p_i + s.p_e;
  t.a_pres.r = -ops.Dr(p) * inv_rho;
  t.a_pres.phi = NodalField(nn);
  t.a_pres.z = -ops.Dz(p) * inv_rho;

  const NodalField mu_num(nn, c.mu_num());
  const auto visc = viscous_force(ops, s, mu_num);
  t.a_visc.r = -visc.r * inv_rho;
  t.a_visc.phi = -visc.phi * inv_rho;
  t.a_visc.z = -visc.z * inv_rho;

  t.delta_star_psi = ops.DeltaStar(s.psi);
  const NodalField dr_psi = ops.Dr(s.psi);
  const NodalField dz_psi = ops.Dz(s.psi);
  const NodalField inv_mu0_r2_rho = (1.0 / mu0) * inv_r2 * inv_rho;
  t.a_lor_psi.r = -dr_psi * t.delta_star_psi * inv_mu0_r2_rho;
  t.a_lor_psi.phi = NodalField(nn);
  t.a_lor_psi.z = -dz_psi * t.delta_star_psi * inv_mu0_r2_rho;
  t.a_lor_f.r = -s.f * ops.Dr(s.f) * inv_mu0_r2_rho;
  t.a_lor_f.phi = NodalField(nn);
  t.a_lor_f.z = -s.f * ops.Dz(s.f) * inv_mu0_r2_rho;

  const ElementVectorField b_theta = poloidal_field_e(ops, s.psi);
  const auto grad_f_e = gradient_node_to_element(ops, s.f);
  t.a_lor_phi.r = NodalField(nn);
  t.a_lor_phi.phi = ops.Wn(b_theta.r * grad_f_e.r + b_theta.z * grad_f_e.z) * ((1.0 / mu0) * inv_r * inv_rho);
  t.a_lor_phi.z = NodalField(nn);

  const auto corr = density_corrections(ops, s, m_i, c.zeta, c.correction_model);
  t.a_corr.r = corr.force.r * inv_rho;
  t.a_corr.phi = corr.force.phi * inv_rho;
  t.a_corr.z = corr.force.z * inv_rho;

  // closures
  const NodalField inv_n = map(s.n, [](double x) { return 1.0 / x; });
  const NodalField Ti = s.p_i * inv_n;
  const NodalField Te = s.p_e * inv_n * (1.0 / c.Z);
  const NodalField Ti_eV = Ti * (1.0 / constants::eV);
  const NodalField Te_eV = map(Te, [&](double x) { return std::max(x / constants::eV, c.Te_floor_eV); });
  t.eta = c.eta_constant ? NodalField(nn, *c.eta_constant) : spitzer_eta(Te_eV, c.Z, c.eta_max);
  const ElementField eta_e = ops.Avg(t.eta);

  // pressures
  const NodalField div_v = divergence_node_to_node(ops, {s.v_r, s.v_z});
  t.pi_adv = -(s.v_r * ops.Dr(s.p_i) + s.v_z * ops.Dz(s.p_i)) - c.gamma * s.p_i * div_v;
  t.pe_adv = -(s.v_r * ops.Dr(s.p_e) + s.v_z * ops.Dz(s.p_e)) - c.gamma * s.p_e * div_v;
  const auto q_i = heat_flux(ops, Ti, b_theta, c.n0 * c.chi_par_i, c.n0 * c.chi_perp_i);
  const auto q_e = heat_flux(ops, Te, b_theta, c.n0 * c.chi_par_e, c.n0 * c.chi_perp_e);
  t.pi_flux = -gm1 * divergence_element_to_node(ops, q_i);
  t.pe_flux = -gm1 * divergence_element_to_node(ops, q_e);
  const NodalField qie = heat_exchange_Qie(s.n, Te_eV, Ti_eV, c.Z, c.mu_i);
  t.pi_Qie = gm1 * qie;
  t.pe_Qie = -gm1 * qie;
  t.pi_Qpi = gm1 * viscous_heating_Qpi(ops, s, NodalField(nn, c.mu_phys()));
  t.pi_Qzeta = gm1 * corr.Q;
  const NodalField j_tor = t.delta_star_psi * inv_r;
  t.pe_ohm_tor = (gm1 / mu0) * t.eta * j_tor * j_tor;
  for (std::size_t i = 0; i < nn; ++i)
    if (psi_dirichlet[i]) t.pe_ohm_tor[i] = 0.0;
  t.pe_ohm_pol = (gm1 / mu0) * ops.Wn(eta_e * (square(grad_f_e.r) + square(grad_f_e.z)) * ops.inv_r_e * ops.inv_r_e);

  // ψ
  t.psi_adv = -(s.v_r * dr_psi + s.v_z * dz_psi);
  t.psi_res = t.eta * t.delta_star_psi;

  // f
  const NodalField f_r2 = s.f * inv_r2;
  t.f_adv = -ops.r2 * divergence_node_to_node(ops, {f_r2 * s.v_r, f_r2 * s.v_z});
  const ElementField omega_e = ops.Avg(s.v_phi * inv_r);
  t.f_omega = ops.r2 * divergence_element_to_node(ops, {b_theta.r * omega_e, b_theta.z * omega_e});
  const ElementField eta_re2 = eta_e * ops.inv_r_e * ops.inv_r_e;
  t.f_res = ops.r2 * divergence_element_to_node(ops, {eta_re2 * grad_f_e.r, eta_re2 * grad_f_e.z});
  t.f_src = f_source_rate ? *f_source_rate : NodalField(nn);
  return t;
}

PlasmaState assemble_rhs(const RhsTerms& t) {
  PlasmaState d;
  d.n = t.n_adv + t.n_diff;
  d.v_r = t.a_adv.r + t.a_pres.r + t.a_visc.r + t.a_lor_psi.r + t.a_lor_f.r + t.a_lor_phi.r + t.a_corr.r;
  d.v_phi = t.a_adv.phi + t.a_pres.phi + t.a_visc.phi + t.a_lor_psi.phi + t.a_lor_f.phi + t.a_lor_phi.phi + t.a_corr.phi;
  d.v_z = t.a_adv.z + t.a_pres.z + t.a_visc.z + t.a_lor_psi.z + t.a_lor_f.z + t.a_lor_phi.z + t.a_corr.z;
  d.p_i = t.pi_adv + t.pi_flux + t.pi_Qie + t.pi_Qpi + t.pi_Qzeta;
  d.p_e = t.pe_adv + t.pe_flux + t.pe_Qie + t.pe_ohm_tor + t.pe_ohm_pol;
  d.psi = t.psi_adv + t.psi_res;
  d.f = t.f_adv + t.f_omega + t.f_res + t.f_src;
  return d;
}

PlasmaState compute_rhs(const OperatorSet& ops, const PlasmaState& s, const PhysicsCoefficients& c,
                        const std::vector<bool>& psi_dirichlet, const NodalField* f_source_rate) {
  return assemble_rhs(evaluate_rhs_terms(ops, s, c, psi_dirichlet, f_source_rate));
}

}  // namespace axmhd
