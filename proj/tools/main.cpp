#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kernelsurf/cli.hpp"

namespace {

bool parse_kernel(const std::string& text, kernelsurf::KernelFamily& family) {
  if (text == "gaussian") {
    family = kernelsurf::KernelFamily::gaussian;
  } else if (text == "uniform") {
    family = kernelsurf::KernelFamily::uniform;
  } else if (text == "poisson-radial") {
    family = kernelsurf::KernelFamily::poisson_radial;
  } else {
    return false;
  }
  return true;
}

bool parse_nystrom(const std::string& text, kernelsurf::NystromSpec& spec) {
  if (text == "all") {
    spec = kernelsurf::NystromSpec::all_points();
    return true;
  }
  if (text.rfind("radius:", 0) == 0) {
    try {
      double radius = std::stod(text.substr(7));
      if (!(radius > 0.0)) return false;
      spec = kernelsurf::NystromSpec::with_radius(radius);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }
  try {
    std::size_t used = 0;
    long long count = std::stoll(text, &used);
    if (used != text.size() || count < 1) return false;
    spec = kernelsurf::NystromSpec::with_count(count);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicit surface reconstruction with ridge-regression kernels"};
  app.require_subcommand(1);

  kernelsurf::ReconstructRequest reconstruct_request;
  std::string kernel_name = "gaussian";
  std::string nystrom_text = "all";
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "fit an implicit surface to an oriented cloud and "
                     "extract its zero level set as a mesh");
  reconstruct
      ->add_option("--input", reconstruct_request.input_path,
                   "oriented point cloud (.xyz or .ply)")
      ->required();
  reconstruct
      ->add_option("--output", reconstruct_request.output_path,
                   "output mesh (.obj)")
      ->required();
  reconstruct->add_option("--kernel", kernel_name,
                          "gaussian | uniform | poisson-radial");
  reconstruct->add_option("--lambda", reconstruct_request.lambda,
                          "ridge strength (>= 0)");
  reconstruct->add_option("--nystrom", nystrom_text,
                          "centers: all | <count> | radius:<r>");
  reconstruct->add_option("--grid-res", reconstruct_request.grid_resolution,
                          "extraction grid resolution per axis [16, 512]");
  reconstruct->add_option("--seed", reconstruct_request.seed, "rng seed");
  reconstruct->add_option("--support-k", reconstruct_request.support_k,
                          "uniform-kernel bias bound (> 0)");

  kernelsurf::MetricsRequest metrics_request;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "chamfer and hausdorff distances between two meshes");
  metrics->add_option("mesh_a", metrics_request.mesh_a_path, "first mesh (.obj)")
      ->required();
  metrics
      ->add_option("mesh_b", metrics_request.mesh_b_path, "second mesh (.obj)")
      ->required();
  metrics->add_option("--samples", metrics_request.samples,
                      "surface samples per mesh");
  metrics->add_option("--seed", metrics_request.seed, "rng seed");
  bool no_normalize = false;
  metrics->add_flag("--no-normalize", no_normalize,
                    "skip the joint unit-cube normalization");

  std::uint64_t selftest_seed = 0;
  bool inject_fault = false;
  CLI::App* selftest =
      app.add_subcommand("selftest", "run the kernel invariant suite");
  selftest->add_option("--seed", selftest_seed, "rng seed");
  selftest->add_flag("--inject-fault", inject_fault, "corrupt one kernel entry")
      ->group("");  // hidden: exists to prove the checks can fail

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kernelsurf::exit_ok : kernelsurf::exit_usage_error;
  }

  if (reconstruct->parsed()) {
    if (!parse_kernel(kernel_name, reconstruct_request.kernel)) {
      std::cout << "error: unknown kernel \"" << kernel_name << "\"\n";
      return kernelsurf::exit_usage_error;
    }
    if (!parse_nystrom(nystrom_text, reconstruct_request.nystrom)) {
      std::cout << "error: bad nystrom spec \"" << nystrom_text
                << "\" (expected all | <count> | radius:<r>)\n";
      return kernelsurf::exit_usage_error;
    }
    return kernelsurf::cmd_reconstruct(reconstruct_request, std::cout);
  }
  if (metrics->parsed()) {
    metrics_request.normalize = !no_normalize;
    return kernelsurf::cmd_metrics(metrics_request, std::cout);
  }
  if (selftest->parsed()) {
    return kernelsurf::cmd_selftest(selftest_seed, inject_fault, std::cout);
  }
  return kernelsurf::exit_usage_error;
}
