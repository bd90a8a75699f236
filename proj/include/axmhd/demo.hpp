#pragma once

#include <string>

#include "axmhd/mesh.hpp"

namespace axmhd {

struct FormationDemo {
  double h_e = 0.025;
  // Gun annulus below z = 0, containment region above, insulating wall beyond r_wall.
  double r_axis = 0.05, r_gun_in = 0.10, r_gun_out = 0.20, r_wall = 0.30, r_out = 0.40;
  double z_bottom = -0.40, z_top = 0.30;
  // Gun flux crossing the annulus: rises from 0 at the muzzle to stuffing_flux below −stuffing_length.
  double stuffing_flux = 3e-3;
  double stuffing_length = 0.3;
  double V_peak = 1.5e3;
  double pulse = 40e-6;
  double t_end = 50e-6;
};

// Boundary ψ: zero on every containment wall, so gun field lines start and end on the electrodes.
double stuffing_psi(const FormationDemo& d, Point p);

Mesh formation_demo_mesh(const FormationDemo& d);

// Writes mesh, coil tables, gun waveform and run config into dir; returns the config path.
std::string write_formation_demo(const std::string& dir, const FormationDemo& d = {});

}  // namespace axmhd
