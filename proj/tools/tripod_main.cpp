#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tripod/cluster.hpp"
#include "tripod/errors.hpp"
#include "tripod/gauss1d.hpp"
#include "tripod/model.hpp"
#include "tripod/search.hpp"
#include "tripod/variation.hpp"
#include "verify_suite.hpp"

namespace {

using nlohmann::json;
using namespace tripod;

constexpr const char* kVersion = "1.0.0";

constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

json make_meta(const std::string& command, const json& config) {
  return json{{"command", command}, {"config", config}, {"version", kVersion}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::domain_error("cannot write output file: " + path);
  }
  return out;
}

void write_csv_preamble(std::ostream& out, const std::string& echo) {
  out << "# tripod " << kVersion << "\n# command: " << echo << "\n";
}

SimplexVolume volume_from_flags(double v1, double v2) {
  return SimplexVolume::from_triple(v1, v2, 1.0 - (v1 + v2));
}

int run_profile(int grid, const std::string& out, bool edges) {
  std::ofstream file = open_output(out);
  std::ostringstream echo;
  echo << "profile --grid " << grid << " --out " << out
       << (edges ? " --edges" : "");
  write_csv_preamble(file, echo.str());

  char line[512];
  const int denom = grid + 1;
  if (edges) {
    // Boundary values of the profile along the three simplex edges, where
    // the cluster degenerates to two cells and the profile to the
    // single-bubble value of the dominant cell.
    file << "v1,v2,v3,I_edge\n";
    for (int zero = 1; zero <= 3; ++zero) {
      for (int i = 1; i < denom; ++i) {
        const double t = static_cast<double>(i) / denom;
        double v1 = 0.0, v2 = 0.0, v3 = 0.0;
        if (zero == 1) {
          v2 = t;
          v3 = 1.0 - t;
        } else if (zero == 2) {
          v1 = t;
          v3 = 1.0 - t;
        } else {
          v1 = t;
          v2 = 1.0 - t;
        }
        const double value =
            gauss::single_bubble_profile(std::max(t, 1.0 - t));
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", v1, v2,
                      v3, value);
        file << line;
      }
    }
    return 0;
  }

  file << "v1,v2,v3,x_u1,x_u2,I_m,grad_u1,grad_u2,hess_11,hess_12,hess_22,"
          "trace_residual\n";
  for (int i = 1; i <= denom - 2; ++i) {
    for (int j = 1; j <= denom - 1 - i; ++j) {
      const double v1 = static_cast<double>(i) / denom;
      const double v2 = static_cast<double>(j) / denom;
      const SimplexVolume v = SimplexVolume::from_triple(v1, v2,
                                                         1.0 - (v1 + v2));
      const PlanePoint x = invert_volume_map(v);
      const std::array<double, 2> xu = x.coords2();
      const std::array<double, 2> grad = model_profile_gradient(v).coords2();
      const Eigen::Matrix2d hess = model_profile_hessian(v).m22;
      std::snprintf(line, sizeof line,
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                    "%.17g,%.17g,%.17g\n",
                    v[0], v[1], v[2], xu[0], xu[1], model_profile(v), grad[0],
                    grad[1], hess(0, 0), hess(0, 1), hess(1, 1),
                    trace_identity_residual(v));
      file << line;
    }
  }
  return 0;
}

int run_invert(double v1, double v2, double tol) {
  const SimplexVolume v = volume_from_flags(v1, v2);
  const PlanePoint x = invert_volume_map(v, tol);
  const SimplexVolume check = volume_map(x, 1e-12);
  double residual = 0.0;
  for (int i = 0; i < 3; ++i) {
    residual = std::max(residual, std::abs(check[i] - v[i]));
  }
  const std::array<double, 2> xu = x.coords2();
  json doc;
  doc["meta"] = make_meta(
      "invert", json{{"v1", v1}, {"v2", v2}, {"tol", tol}});
  doc["result"] = json{{"residual", residual},
                       {"volumes", v.v()},
                       {"x", x.coords3()},
                       {"x_u1", xu[0]},
                       {"x_u2", xu[1]}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_verify(const std::string& level, const std::string& out,
               bool tamperDv) {
  VerifyOptions options;
  options.full = level == "full";
  if (tamperDv) {
    options.jacobianScale = 1.4142135623730951;
  }
  const VerifyReport report = run_verify_suite(options);

  json checks = json::array();
  for (const VerifyCheck& c : report.checks) {
    checks.push_back(json{{"name", c.name},
                          {"pass", c.pass},
                          {"residual", c.residual},
                          {"tolerance", c.tolerance}});
  }
  json doc;
  doc["meta"] = make_meta(
      "verify", json{{"level", level}, {"tamper-dv", tamperDv}});
  doc["summary"] = json{{"checks", report.checks.size()},
                        {"failed", report.failed},
                        {"level", level},
                        {"pass", report.failed == 0}};
  doc["checks"] = checks;
  std::ofstream file = open_output(out);
  file << doc.dump(2) << "\n";

  std::cout << "verify " << level << ": " << report.checks.size()
            << " checks, " << report.failed << " failed\n";
  for (const VerifyCheck& c : report.checks) {
    if (!c.pass) {
      std::cout << "  FAIL " << c.name << ": residual " << c.residual
                << " > tolerance " << c.tolerance << "\n";
    }
  }
  return report.failed == 0 ? 0 : kExitVerification;
}

int run_variation(double xu1, double xu2, double wu1, double wu2) {
  const PlanePoint x = PlanePoint::from_coords2(xu1, xu2);
  const PlanePoint w = PlanePoint::from_coords2(wu1, wu2);
  const VariationReport rep = index_form_translation(x, w);
  json doc;
  doc["meta"] = make_meta("variation", json{{"x-u1", xu1},
                                            {"x-u2", xu2},
                                            {"w-u1", wu1},
                                            {"w-u2", wu2}});
  doc["result"] = json{{"Q", rep.Q},
                       {"d2A", rep.d2A},
                       {"d2V", rep.d2V.coords3()},
                       {"dA", rep.dA},
                       {"dV", rep.dV.coords3()}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_search(double v1, double v2, const std::string& preset,
               std::uint64_t seed, const std::string& out,
               const std::string& init) {
  const SimplexVolume v = volume_from_flags(v1, v2);
  SearchParams params;
  params.seed = seed;
  params.resolution = preset == "fast" ? 256 : 512;

  std::filesystem::create_directories(out);
  std::vector<std::pair<std::string, SearchInit>> runs;
  if (init == "model" || init == "both") {
    runs.emplace_back("model", SearchInit::model);
  }
  if (init == "random" || init == "both") {
    runs.emplace_back("random", SearchInit::random);
  }

  std::vector<std::string> failures;
  for (const auto& [name, mode] : runs) {
    const SearchResult result = search(v, params, mode);
    json doc;
    doc["meta"] = make_meta("search", json{{"init", name},
                                           {"out", out},
                                           {"preset", preset},
                                           {"seed", seed},
                                           {"v1", v1},
                                           {"v2", v2}});
    doc["result"] = json::parse(search_result_json(result));
    const std::filesystem::path base = std::filesystem::path(out) / name;
    {
      std::ofstream file = open_output(base.string() + ".json");
      file << doc.dump(2) << "\n";
    }
    {
      std::ofstream file(base.string() + ".bin", std::ios::binary);
      if (!file) {
        throw std::domain_error("cannot write output file: " +
                                base.string() + ".bin");
      }
      save_grid(result.cluster, file);
    }
    {
      std::ofstream file = open_output(base.string() + ".csv");
      save_grid_csv(result.cluster, file);
    }
    std::cout << name << " init: perimeter " << result.achievedPerimeter
              << ", gap to model " << result.gapToModel << ", converged "
              << (result.converged ? "yes" : "no") << "\n";
    if (!result.converged) {
      failures.push_back(name + ": " + result.diagnostics);
    }
  }

  if (!failures.empty()) {
    std::ofstream file =
        open_output((std::filesystem::path(out) / "diagnostics.txt").string());
    for (const std::string& f : failures) {
      file << f << "\n";
    }
    std::cerr << "search failed; see diagnostics.txt\n";
    return kExitNumerical;
  }
  return 0;
}

int run_bound(double k, double v1, double v2) {
  const SimplexVolume v = volume_from_flags(v1, v2);
  json doc;
  doc["meta"] =
      make_meta("bound", json{{"k", k}, {"v1", v1}, {"v2", v2}});
  doc["result"] = json{{"bound", strongly_convex_lower_bound(k, v)},
                       {"modelProfile", model_profile(v)}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian three-cell isoperimetry toolkit"};
  app.require_subcommand(1);

  int grid = 20;
  std::string profileOut;
  bool edges = false;
  CLI::App* profile =
      app.add_subcommand("profile", "Tabulate the tripod profile, its "
                                    "derivatives and the trace identity "
                                    "residual over a barycentric grid");
  profile->add_option("--grid", grid, "Grid refinement (rows at i/(grid+1))")
      ->check(CLI::Range(5, 200));
  profile->add_option("--out", profileOut, "Output CSV path")->required();
  profile->add_flag("--edges", edges,
                    "Tabulate boundary values along the simplex edges "
                    "instead of the interior grid");

  double iv1 = 0.0, iv2 = 0.0, itol = 1e-10;
  CLI::App* invert = app.add_subcommand(
      "invert", "Invert the volume map at one volume triple");
  invert->add_option("--v1", iv1, "First cell volume")->required();
  invert->add_option("--v2", iv2, "Second cell volume")->required();
  invert->add_option("--tol", itol, "Newton tolerance");

  std::string level = "fast";
  std::string verifyOut;
  bool tamperDv = false;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the identity and invariant suites and write a JSON "
                "report");
  verify->add_option("--level", level, "Suite size")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--out", verifyOut, "Output JSON path")->required();
  verify->add_flag("--tamper-dv", tamperDv)->group("");

  double xu1 = 0.0, xu2 = 0.0, wu1 = 0.0, wu2 = 0.0;
  CLI::App* variation = app.add_subcommand(
      "variation", "Translation variation data at a tripod vertex");
  variation->add_option("--x-u1", xu1, "Vertex u1 coordinate")->required();
  variation->add_option("--x-u2", xu2, "Vertex u2 coordinate")->required();
  variation->add_option("--w-u1", wu1, "Direction u1 coordinate")->required();
  variation->add_option("--w-u2", wu2, "Direction u2 coordinate")->required();

  double sv1 = 0.0, sv2 = 0.0;
  std::string preset = "fast";
  std::uint64_t seed = 1;
  std::string searchOut;
  std::string init = "both";
  CLI::App* searchCmd = app.add_subcommand(
      "search", "Anneal a grid cluster toward minimal perimeter at fixed "
                "volumes");
  searchCmd->add_option("--v1", sv1, "First cell volume")->required();
  searchCmd->add_option("--v2", sv2, "Second cell volume")->required();
  searchCmd->add_option("--preset", preset, "Search size")
      ->check(CLI::IsMember({"fast", "accurate"}));
  searchCmd->add_option("--seed", seed, "Annealing seed");
  searchCmd->add_option("--out", searchOut, "Output directory")->required();
  searchCmd->add_option("--init", init, "Initial labeling")
      ->check(CLI::IsMember({"model", "random", "both"}));

  double bk = 1.0, bv1 = 0.0, bv2 = 0.0;
  CLI::App* bound = app.add_subcommand(
      "bound", "Profile lower bound for a strongly convex potential");
  bound->add_option("--k", bk, "Convexity constant")->required();
  bound->add_option("--v1", bv1, "First cell volume")->required();
  bound->add_option("--v2", bv2, "Second cell volume")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    if (*profile) return run_profile(grid, profileOut, edges);
    if (*invert) return run_invert(iv1, iv2, itol);
    if (*verify) return run_verify(level, verifyOut, tamperDv);
    if (*variation) return run_variation(xu1, xu2, wu1, wu2);
    if (*searchCmd) return run_search(sv1, sv2, preset, seed, searchOut, init);
    if (*bound) return run_bound(bk, bv1, bv2);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
