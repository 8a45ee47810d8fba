// Command-line front end: experiment sweeps, single-octonion decomposition
// reports and a runtime selftest of the library invariants.

#include "cdpolar/quaternion_euler.hpp"
#include "cdpolar/sweep.hpp"
#include "cdpolar/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using cdpolar::CdElement;
using Vec = Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitAllFailed = 3;

Vec random_gaussian(std::mt19937_64& gen, int size) {
  std::normal_distribution<double> gauss;
  Vec v(size);
  for (int i = 0; i < size; ++i) v[i] = gauss(gen);
  return v;
}

CdElement<double> random_unit(std::mt19937_64& gen, int dim_log) {
  Vec v = random_gaussian(gen, 1 << dim_log);
  while (v.norm() < 1e-12) v = random_gaussian(gen, 1 << dim_log);
  return CdElement<double>{v / v.norm()};
}

// ---------------------------------------------------------------------------
// selftest

struct Check {
  std::string name;
  std::function<bool(std::string&)> run;
};

bool run_selftest() {
  std::vector<Check> checks;
  const auto add = [&](std::string name, std::function<bool(std::string&)> fn) {
    checks.push_back({std::move(name), std::move(fn)});
  };

  add("composition norm law (dim 8)", [](std::string& detail) {
    std::mt19937_64 gen(1);
    double worst = 0;
    for (int i = 0; i < 2000; ++i) {
      const CdElement<double> x{random_gaussian(gen, 8)}, y{random_gaussian(gen, 8)};
      const double lhs = norm(cd_mul(x, y)), rhs = norm(x) * norm(y);
      worst = std::max(worst, std::abs(lhs - rhs) / (1 + rhs));
    }
    std::ostringstream fmt;
    fmt.precision(3);
    fmt << std::scientific << worst;
    detail = "worst rel " + fmt.str();
    return worst <= 1e-12;
  });

  add("norm law fails for dim 16", [](std::string& detail) {
    for (int i = 1; i < 16; ++i) {
      for (int j = i + 1; j < 16; ++j) {
        for (int k = 1; k < 16; ++k) {
          for (int l = k + 1; l < 16; ++l) {
            const auto x = CdElement<double>::unit(4, i) + CdElement<double>::unit(4, j);
            const auto y = CdElement<double>::unit(4, k) - CdElement<double>::unit(4, l);
            if (std::abs(norm(cd_mul(x, y)) - norm(x) * norm(y)) > 0.5) {
              detail = "e" + std::to_string(i) + "+e" + std::to_string(j) + " times e" +
                       std::to_string(k) + "-e" + std::to_string(l);
              return true;
            }
          }
        }
      }
    }
    return false;
  });

  add("quaternion associativity", [](std::string&) {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 1000; ++i) {
      const CdElement<double> x{random_gaussian(gen, 4)}, y{random_gaussian(gen, 4)},
          z{random_gaussian(gen, 4)};
      if (norm(cd_mul(cd_mul(x, y), z) - cd_mul(x, cd_mul(y, z))) > 1e-13 * norm(x) * norm(y) * norm(z))
        return false;
    }
    return true;
  });

  add("octonion alternativity", [](std::string&) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 1000; ++i) {
      const auto x = random_unit(gen, 3), y = random_unit(gen, 3);
      if (norm(cd_mul(cd_mul(x, x), y) - cd_mul(x, cd_mul(x, y))) > 1e-12) return false;
      if (norm(cd_mul(cd_mul(y, x), x) - cd_mul(y, cd_mul(x, x))) > 1e-12) return false;
    }
    return true;
  });

  add("octonion non-associativity witness", [](std::string& detail) {
    for (int i = 1; i < 8; ++i)
      for (int j = 1; j < 8; ++j)
        for (int k = 1; k < 8; ++k) {
          const auto ei = CdElement<double>::unit(3, i), ej = CdElement<double>::unit(3, j),
                     ek = CdElement<double>::unit(3, k);
          if (norm(cd_mul(cd_mul(ei, ej), ek) - cd_mul(ei, cd_mul(ej, ek))) > 1.0) {
            detail = "(e" + std::to_string(i) + " e" + std::to_string(j) + ") e" + std::to_string(k);
            return true;
          }
        }
    return false;
  });

  add("exp_series matches exp_closed", [](std::string&) {
    std::mt19937_64 gen(4);
    for (int i = 0; i < 200; ++i) {
      Vec v = random_gaussian(gen, 8);
      v *= std::uniform_real_distribution<double>(0.0, 2.0)(gen) / v.norm();
      const CdElement<double> x{v};
      if (norm(exp_series(x, 1e-12) - exp_closed(x)) > 1e-9) return false;
    }
    return true;
  });

  add("exp additivity iff commuting", [](std::string&) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_unit(gen, 3);
      const auto y = 0.3 * cd_mul(x, x) + 0.7 * x + CdElement<double>::from_real(0.2, 3);
      if (norm(cd_mul(x, y) - cd_mul(y, x)) > 1e-13) return false;
      if (norm(exp_closed(x + y) - cd_mul(exp_closed(x), exp_closed(y))) > 1e-10) return false;
    }
    const auto a = (kPi / 2) * CdElement<double>::unit(3, 1);
    const auto b = (kPi / 2) * CdElement<double>::unit(3, 2);
    return norm(exp_closed(a + b) - cd_mul(exp_closed(a), exp_closed(b))) > 0.1;
  });

  add("basic polar round trip", [](std::string&) {
    std::mt19937_64 gen(6);
    for (int i = 0; i < 2000; ++i) {
      Vec v = random_gaussian(gen, 8);
      v *= std::pow(10.0, std::uniform_real_distribution<double>(-6, 6)(gen)) / v.norm();
      const CdElement<double> o{v};
      if (norm(from_basic_polar(to_basic_polar(o)) - o) > 1e-12 * std::max(1.0, norm(o)))
        return false;
    }
    return true;
  });

  add("euler round trip and ranges", [](std::string&) {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 2000; ++i) {
      const auto q = random_unit(gen, 2);
      const auto t = euler_decompose(q);
      if (!(t.phi >= -kPi && t.phi < kPi)) return false;
      if (!(t.psi >= -kPi / 2 && t.psi < kPi / 2)) return false;
      if (!(t.theta >= -kPi / 4 && t.theta <= kPi / 4)) return false;
      if (norm(euler_compose(t, 1.0) - q) > 1e-10) return false;
    }
    return true;
  });

  add("hs special family exact, generic fails", [](std::string&) {
    std::mt19937_64 gen(8);
    for (int i = 0; i < 100; ++i) {
      const double psi1 = std::uniform_real_distribution<double>(-3.0, 3.0)(gen);
      const auto o = exp_closed(psi1 * CdElement<double>::unit(3, 1));
      if (cdpolar::hs_error(o) > 1e-10) return false;
    }
    double worst = 0;
    for (int i = 0; i < 200; ++i) worst = std::max(worst, cdpolar::hs_error(random_unit(gen, 3)));
    return worst > 0.5;
  });

  add("hypersphere cascade is unit", [](std::string&) {
    std::mt19937_64 gen(9);
    for (int i = 0; i < 500; ++i) {
      std::array<double, 7> psi;
      for (int k = 0; k < 6; ++k) psi[k] = std::uniform_real_distribution<double>(-kPi / 2, kPi / 2)(gen);
      psi[6] = std::uniform_real_distribution<double>(-kPi, kPi)(gen);
      if (std::abs(cdpolar::hypersphere_point(psi).norm() - 1.0) > 1e-13) return false;
    }
    return true;
  });

  add("jacobian analytic vs finite differences", [](std::string&) {
    std::mt19937_64 gen(10);
    for (int i = 0; i < 50; ++i) {
      const Eigen::Vector4d y = random_gaussian(gen, 4).normalized();
      Eigen::Vector4d phi;
      for (int k = 0; k < 4; ++k) phi[k] = std::uniform_real_distribution<double>(-kPi, kPi)(gen);
      const auto ja = cdpolar::forward_jacobian(y, phi);
      const auto jf = cdpolar::forward_jacobian_fd(y, phi);
      if ((ja - jf).norm() > 1e-5 * std::max(1.0, ja.norm())) return false;
    }
    return true;
  });

  add("factor solver round trip", [](std::string& detail) {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 20; ++i) {
      const Eigen::Vector4d y = random_gaussian(gen, 4).normalized();
      Eigen::Vector4d phi;
      for (int k = 0; k < 4; ++k) phi[k] = std::uniform_real_distribution<double>(-kPi, kPi)(gen);
      const auto target = cdpolar::forward_compose(y, phi);
      cdpolar::SolverConfig cfg;
      cfg.rng_seed = static_cast<std::uint64_t>(i);
      const auto sol = cdpolar::solve(target, cfg);
      if (sol.residual_norm > 1e-8) {
        std::ostringstream fmt;
        fmt.precision(3);
        fmt << std::scientific << sol.residual_norm;
        detail = "residual " + fmt.str();
        return false;
      }
      if (cdpolar::verify_stage_rotations(sol, target) > 1e-8) {
        detail = "stage deviation too large";
        return false;
      }
    }
    return true;
  });

  int failed = 0;
  for (const auto& check : checks) {
    std::string detail;
    const bool ok = check.run(detail);
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << check.name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failed;
  }
  std::cout << (failed == 0 ? "selftest: all checks passed\n"
                            : "selftest: " + std::to_string(failed) + " check(s) FAILED\n");
  return failed == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdpolar: octonion polar decomposition experiments"};
  app.set_version_flag("--version", std::string(cdpolar::kVersion));
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment sweep and write a CSV file");
  std::string experiment;
  cdpolar::SweepSpec spec;
  sweep_cmd->add_option("--experiment", experiment, "hs-recon or factor-sweep")->required();
  sweep_cmd->add_option("--vary", spec.vary, "index of the swept angle (1..7)")
      ->required()
      ->check(CLI::Range(1, 7));
  sweep_cmd->add_option("--grid", spec.grid_points, "grid points across the swept range")
      ->check(CLI::Range(2, 100000000));
  sweep_cmd->add_option("--seed", spec.seed, "seed for frozen angles and solver starts");
  sweep_cmd->add_option("--out", spec.output_path, "output CSV path")->required();
  sweep_cmd->add_flag("--parallel", spec.parallel,
                      "independent grid points (factor-sweep: disables warm starts)");
  sweep_cmd->add_option("--tol", spec.solver.tol, "solver residual tolerance")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--starts", spec.solver.n_starts, "solver multi-start attempts")
      ->check(CLI::Range(1, 10000));

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "report every decomposition of one octonion");
  std::vector<double> coords;
  std::string csv_path;
  cdpolar::SolverConfig dec_cfg;
  dec_cmd->add_option("--coords", coords, "x0,...,x7")->required()->delimiter(',');
  dec_cmd->add_option("--tol", dec_cfg.tol, "solver residual tolerance")
      ->check(CLI::PositiveNumber);
  dec_cmd->add_option("--starts", dec_cfg.n_starts, "solver multi-start attempts")
      ->check(CLI::Range(1, 10000));
  dec_cmd->add_option("--seed", dec_cfg.rng_seed, "seed for solver starts");
  dec_cmd->add_option("--csv", csv_path, "also write the report as a single-row CSV");

  // sample: unit octonions as CSV. The hyperspherical ranges never reach
  // x0 < 0, so gaussian mode is the one that covers the whole sphere.
  auto* sample_cmd = app.add_subcommand("sample", "write random unit octonions as CSV");
  int sample_count = 100;
  std::uint64_t sample_seed = 0;
  std::string sample_mode = "gaussian";
  std::string sample_out;
  sample_cmd->add_option("--count", sample_count, "number of samples")->check(CLI::Range(1, 100000000));
  sample_cmd->add_option("--seed", sample_seed, "random seed");
  sample_cmd->add_option("--mode", sample_mode, "gaussian (full sphere) or spherical (angle cascade)");
  sample_cmd->add_option("--out", sample_out, "output CSV path")->required();

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the invariant suite and print pass/fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep_cmd->parsed()) {
      const auto kind = cdpolar::experiment_from_name(experiment);
      if (!kind) {
        std::cerr << "unknown experiment '" << experiment << "' (use hs-recon or factor-sweep)\n";
        return kExitUsage;
      }
      spec.experiment = *kind;
      spec.solver.rng_seed = spec.seed;
      const auto records = cdpolar::run_sweep(spec);
      if (spec.experiment == cdpolar::Experiment::factor_sweep) {
        const auto converged = std::count_if(records.begin(), records.end(),
                                             [](const auto& r) { return r.converged; });
        std::cout << "wrote " << spec.output_path << ": " << records.size() << " points, "
                  << converged << " converged\n";
        if (converged == 0) return kExitAllFailed;
      } else {
        std::cout << "wrote " << spec.output_path << ": " << records.size() << " points\n";
      }
      return kExitOk;
    }

    if (dec_cmd->parsed()) {
      if (coords.size() != 8) {
        std::cerr << "--coords needs exactly 8 comma-separated values\n";
        return kExitUsage;
      }
      const cdpolar::Vector8d x = Eigen::Map<const cdpolar::Vector8d>(coords.data());
      const auto report = cdpolar::decompose_one(x, dec_cfg);
      std::cout << cdpolar::decompose_text(report);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw cdpolar::IoError("cannot open output file: " + csv_path);
        out << cdpolar::decompose_csv(report);
        if (!out.flush()) throw cdpolar::IoError("write failed: " + csv_path);
      }
      return kExitOk;
    }

    if (sample_cmd->parsed()) {
      if (sample_mode != "gaussian" && sample_mode != "spherical") {
        std::cerr << "unknown mode '" << sample_mode << "' (use gaussian or spherical)\n";
        return kExitUsage;
      }
      std::mt19937_64 gen(sample_seed);
      std::string csv = "# cdpolar v" + std::string(cdpolar::kVersion) + " sample mode=" +
                        sample_mode + " seed=" + std::to_string(sample_seed) + "\n";
      csv += "x0,x1,x2,x3,x4,x5,x6,x7\n";
      for (int i = 0; i < sample_count; ++i) {
        cdpolar::Vector8d x;
        if (sample_mode == "gaussian") {
          x = random_unit(gen, 3).coeffs();
        } else {
          std::array<double, 7> psi;
          for (int k = 0; k < 6; ++k) psi[k] = std::uniform_real_distribution<double>(-kPi / 2, kPi / 2)(gen);
          psi[6] = std::uniform_real_distribution<double>(-kPi, kPi)(gen);
          x = cdpolar::hypersphere_point(psi);
        }
        for (int k = 0; k < 8; ++k) {
          csv += cdpolar::format_shortest(x[k]);
          csv += k == 7 ? '\n' : ',';
        }
      }
      std::ofstream out(sample_out, std::ios::binary);
      if (!out) throw cdpolar::IoError("cannot open output file: " + sample_out);
      out << csv;
      if (!out.flush()) throw cdpolar::IoError("write failed: " + sample_out);
      std::cout << "wrote " << sample_out << ": " << sample_count << " samples\n";
      return kExitOk;
    }

    if (self_cmd->parsed()) {
      return run_selftest() ? kExitOk : kExitUsage;
    }
  } catch (const cdpolar::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
