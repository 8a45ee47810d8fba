#pragma once

/** \file
 * Experiment sweeps: vary one hyperspherical angle over its range with the
 * other six frozen at seeded random values, and record per grid point either
 * the seven-angle reconstruction error (hs-recon) or a solved factorization
 * (factor-sweep). Results are returned in memory and optionally written as a
 * self-describing CSV.
 */

#include "cdpolar/basic_polar.hpp"
#include "cdpolar/factor_solver.hpp"
#include "cdpolar/hahn_snopek.hpp"
#include "cdpolar/sphere.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cdpolar {

/// Raised when an output file cannot be created or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Experiment { hs_recon, factor_sweep };

std::string_view experiment_name(Experiment e);
std::optional<Experiment> experiment_from_name(std::string_view name);

struct SweepSpec {
  Experiment experiment = Experiment::hs_recon;
  int vary = 1;             // which psi sweeps, 1..7
  int grid_points = 181;    // >= 2, equally spaced over the swept angle's range
  std::uint64_t seed = 0;   // fixes the frozen angles and the solver's random starts
  std::string output_path;  // empty: no file side effect
  bool parallel = false;    // hs-recon: concurrent grid points;
                            // factor-sweep: independent multi-start instead of warm starts
  SolverConfig solver{};    // factor-sweep settings
  // Test hook: fixes the six frozen angles (in ascending index order) instead
  // of drawing them from seed.
  std::optional<std::array<double, 6>> frozen_angles;
};

struct SweepRecord {
  double swept_value = 0.0;
  Vector8d target = Vector8d::Zero();
  // hs-recon
  Vector8d reconstructed = Vector8d::Zero();
  double hs_error = 0.0;
  // factor-sweep
  Eigen::Vector4d y = Eigen::Vector4d::Zero();
  Eigen::Vector4d phi = Eigen::Vector4d::Zero();
  double residual_norm = 0.0;
  bool converged = false;
};

/** Runs the sweep and, when output_path is set, writes the CSV. factor-sweep
 * grid points are warm-started from their left neighbour unless parallel is
 * set. A solver failure is recorded with converged = false and the run
 * continues. Throws std::invalid_argument for a bad spec and IoError for an
 * unwritable output path. */
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// The CSV text for a finished sweep: a comment line identifying the run, a
/// header row, then one row per record with shortest round-trip numbers.
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRecord>& records);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_shortest(double value);

/// Full single-input report: modulus, basic polar form, the seven-angle
/// reconstruction error and a solved factorization of the unit part.
/// hs_degenerate marks inputs whose component moduli vanish pairwise; the
/// angle formulas are undefined there and hs/hs_error are not meaningful.
struct DecomposeReport {
  Vector8d coords = Vector8d::Zero();
  double modulus = 0.0;
  BasicPolar<double> polar;
  bool hs_degenerate = false;
  HsAngles<double> hs{};
  double hs_error = 0.0;
  FactorSolution factor;
};

/// Throws std::domain_error on zero input.
DecomposeReport decompose_one(const Vector8d& coords, const SolverConfig& cfg = {});

std::string decompose_text(const DecomposeReport& report);
std::string decompose_csv(const DecomposeReport& report);

}  // namespace cdpolar
