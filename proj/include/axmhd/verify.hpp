#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "axmhd/mesh.hpp"
#include "axmhd/ops.hpp"

namespace axmhd {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// Largest |A_ij| over entries touching an interior row or column, relative to scale.
double max_interior_entry(const CsrMatrix& a, const std::vector<bool>& interior);

// Projects nodal vector boundary values onto the boundary tangent; zero at corners.
NodalVectorField project_tangential(const Mesh& mesh, NodalVectorField p);

std::vector<CheckResult> operator_identity_suite(const Mesh& mesh, int random_fields = 100, std::uint64_t seed = 1);

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);
bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace axmhd
