#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "axmhd/config.hpp"
#include "axmhd/demo.hpp"
#include "axmhd/runner.hpp"
#include "axmhd/simd/kernels.hpp"
#include "axmhd/verify.hpp"

using namespace axmhd;

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric two-temperature MHD on triangular meshes"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a configuration (simulate or verify-conservation mode)");
  run->add_option("config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);

  std::string mesh_path;
  int random_fields = 100;
  std::string dump_dir;
  auto* vops = app.add_subcommand("verify-operators", "Check the discrete operator identities on a mesh");
  vops->add_option("mesh", mesh_path, "mesh file")->required()->check(CLI::ExistingFile);
  vops->add_option("--fields", random_fields, "random fields per identity")->check(CLI::PositiveNumber);
  vops->add_option("--dump", dump_dir, "write the operator matrices (Matrix Market) to this directory");

  std::string cons_path;
  auto* vcons = app.add_subcommand("verify-conservation", "Two-level conservation study for a configuration");
  vcons->add_option("config", cons_path, "key = value configuration file")->required()->check(CLI::ExistingFile);

  double r0 = 0, r1 = 0, z0 = 0, z1 = 0, h = 0;
  std::string out_path;
  auto* rect = app.add_subcommand("mesh-rect", "Write a structured rectangle mesh");
  rect->add_option("r0", r0)->required();
  rect->add_option("r1", r1)->required();
  rect->add_option("z0", z0)->required();
  rect->add_option("z1", z1)->required();
  rect->add_option("h_e", h, "element size [m]")->required()->check(CLI::PositiveNumber);
  rect->add_option("-o,--output", out_path, "output file (default stdout)");

  std::string demo_dir;
  FormationDemo demo;
  auto* dsetup = app.add_subcommand("demo-setup", "Write the coarse formation scenario (mesh, tables, config)");
  dsetup->add_option("dir", demo_dir, "output directory")->required();
  dsetup->add_option("--h-e", demo.h_e, "element size [m]")->check(CLI::PositiveNumber);
  dsetup->add_option("--t-end", demo.t_end, "simulated time [s]")->check(CLI::PositiveNumber);

  bool scalar = false;
  app.add_flag("--scalar", scalar, "force the scalar kernels");

  CLI11_PARSE(app, argc, argv);
  if (scalar) simd::force_isa(simd::Isa::Scalar);

  try {
    if (*run) {
      const auto cfg = load_config(config_path);
      if (cfg.mode == "verify-conservation") {
        const auto checks = verify_conservation(cfg, std::cout);
        print_checks(std::cout, checks);
        return all_pass(checks) ? 0 : 1;
      }
      simulate(cfg, std::cout);
      return 0;
    }
    if (*vops) {
      const Mesh mesh = load_mesh(mesh_path);
      std::cout << "mesh " << mesh_path << ": " << mesh.num_nodes() << " nodes, " << mesh.num_elements()
                << " elements, kernels " << simd::kernels().name << "\n";
      if (!dump_dir.empty()) dump_operators(build_operators(mesh, compute_geometry(mesh)), dump_dir);
      const auto checks = operator_identity_suite(mesh, random_fields);
      print_checks(std::cout, checks);
      return all_pass(checks) ? 0 : 1;
    }
    if (*vcons) {
      const auto cfg = load_config(cons_path);
      const auto checks = verify_conservation(cfg, std::cout);
      print_checks(std::cout, checks);
      return all_pass(checks) ? 0 : 1;
    }
    if (*rect) {
      const Mesh mesh = generate_rect_mesh({r0, r1}, {z0, z1}, h);
      if (out_path.empty())
        write_mesh(mesh, std::cout);
      else
        save_mesh(mesh, out_path);
      return 0;
    }
    if (*dsetup) {
      std::cout << write_formation_demo(demo_dir, demo) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
