#include "cdpolar/sweep.hpp"

#include "cdpolar/version.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace cdpolar {

namespace {

constexpr double kPi = std::numbers::pi;

struct AngleRange {
  double lo, hi;
};

AngleRange range_of(int index) {
  return index == 7 ? AngleRange{-kPi, kPi} : AngleRange{-kPi / 2, kPi / 2};
}

// Frozen values for all seven angles; the varied slot is overwritten per grid
// point. Drawing every slot keeps the frozen set independent of which angle
// varies.
std::array<double, 7> frozen_base(const SweepSpec& spec) {
  std::array<double, 7> psi{};
  if (spec.frozen_angles) {
    int j = 0;
    for (int k = 1; k <= 7; ++k) {
      if (k == spec.vary) continue;
      psi[k - 1] = (*spec.frozen_angles)[j++];
    }
  } else {
    std::mt19937_64 gen(spec.seed);
    for (int k = 1; k <= 7; ++k) {
      const auto [lo, hi] = range_of(k);
      psi[k - 1] = std::uniform_real_distribution<double>(lo, hi)(gen);
    }
  }
  return psi;
}

SolverConfig point_config(const SweepSpec& spec, int point) {
  SolverConfig cfg = spec.solver;
  // Distinct deterministic random-start stream per grid point.
  cfg.rng_seed = spec.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(point + 1));
  return cfg;
}

void fill_hs_record(SweepRecord& rec) {
  const CdElement<double> target{rec.target};
  const HsAngles<double> angles = hs_angles(hs_components(target));
  const CdElement<double> recon = hs_reconstruct(norm(target), angles);
  rec.reconstructed = recon.coeffs();
  rec.hs_error = norm(recon - target);
}

void fill_factor_record(SweepRecord& rec, const FactorSolution& sol) {
  rec.y = sol.y;
  rec.phi = sol.phi;
  rec.residual_norm = sol.residual_norm;
  rec.converged = sol.converged;
}

// Runs fn(i) for i in [0, n) across a small thread pool, each index exactly
// once. The first exception thrown by any worker is rethrown on the caller.
void parallel_for(int n, const std::function<void(int)>& fn) {
  const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  return e == Experiment::hs_recon ? "hs-recon" : "factor-sweep";
}

std::optional<Experiment> experiment_from_name(std::string_view name) {
  if (name == "hs-recon") return Experiment::hs_recon;
  if (name == "factor-sweep") return Experiment::factor_sweep;
  return std::nullopt;
}

std::string format_shortest(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  if (spec.vary < 1 || spec.vary > 7) {
    throw std::invalid_argument("run_sweep: vary must be in 1..7");
  }
  if (spec.grid_points < 2) {
    throw std::invalid_argument("run_sweep: grid_points must be at least 2");
  }

  const std::array<double, 7> base = frozen_base(spec);
  const AngleRange swept = range_of(spec.vary);
  const double lo = swept.lo;
  const double step = (swept.hi - swept.lo) / spec.grid_points;  // half-open: hi is excluded

  std::vector<SweepRecord> records(static_cast<std::size_t>(spec.grid_points));
  const auto target_at = [&](int i) {
    std::array<double, 7> psi = base;
    psi[spec.vary - 1] = lo + i * step;
    return psi;
  };

  if (spec.experiment == Experiment::hs_recon) {
    const auto eval = [&](int i) {
      SweepRecord& rec = records[static_cast<std::size_t>(i)];
      const auto psi = target_at(i);
      rec.swept_value = psi[spec.vary - 1];
      rec.target = hypersphere_point(psi);
      fill_hs_record(rec);
    };
    if (spec.parallel) {
      parallel_for(spec.grid_points, eval);
    } else {
      for (int i = 0; i < spec.grid_points; ++i) eval(i);
    }
  } else {
    const auto eval_independent = [&](int i) {
      SweepRecord& rec = records[static_cast<std::size_t>(i)];
      const auto psi = target_at(i);
      rec.swept_value = psi[spec.vary - 1];
      rec.target = hypersphere_point(psi);
      fill_factor_record(rec, solve(CdElement<double>{rec.target}, point_config(spec, i)));
    };
    if (spec.parallel) {
      parallel_for(spec.grid_points, eval_independent);
    } else {
      // Warm-started branch: each point starts from its left neighbour's
      // solution, which selects a continuous branch of the non-unique
      // solution set. The first point uses the default multi-start.
      FactorSolution previous;
      bool have_previous = false;
      for (int i = 0; i < spec.grid_points; ++i) {
        SweepRecord& rec = records[static_cast<std::size_t>(i)];
        const auto psi = target_at(i);
        rec.swept_value = psi[spec.vary - 1];
        rec.target = hypersphere_point(psi);
        const CdElement<double> target{rec.target};
        const SolverConfig cfg = point_config(spec, i);
        const FactorSolution sol =
            have_previous ? solve(target, cfg, previous) : solve(target, cfg);
        fill_factor_record(rec, sol);
        if (sol.converged) {
          previous = sol;
          have_previous = true;
        }
      }
    }
  }

  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) {
      throw IoError("cannot open output file: " + spec.output_path);
    }
    out << sweep_csv(spec, records);
    out.flush();
    if (!out) {
      throw IoError("write failed: " + spec.output_path);
    }
  }
  return records;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRecord>& records) {
  std::string out;
  out += "# cdpolar v";
  out += kVersion;
  out += " experiment=";
  out += experiment_name(spec.experiment);
  out += " vary=" + std::to_string(spec.vary);
  out += " seed=" + std::to_string(spec.seed);
  out += '\n';

  const bool hs = spec.experiment == Experiment::hs_recon;
  out += "swept_angle";
  for (int k = 0; k < 8; ++k) out += ",x" + std::to_string(k);
  if (hs) {
    for (int k = 0; k < 8; ++k) out += ",rec_x" + std::to_string(k);
    out += ",hs_error";
  } else {
    for (int k = 0; k < 4; ++k) out += ",y" + std::to_string(k);
    for (int k = 4; k < 8; ++k) out += ",phi" + std::to_string(k);
    out += ",residual_norm,converged";
  }
  out += '\n';

  for (const auto& rec : records) {
    out += format_shortest(rec.swept_value);
    for (int k = 0; k < 8; ++k) out += ',' + format_shortest(rec.target[k]);
    if (hs) {
      for (int k = 0; k < 8; ++k) out += ',' + format_shortest(rec.reconstructed[k]);
      out += ',' + format_shortest(rec.hs_error);
    } else {
      for (int k = 0; k < 4; ++k) out += ',' + format_shortest(rec.y[k]);
      for (int k = 0; k < 4; ++k) out += ',' + format_shortest(rec.phi[k]);
      out += ',' + format_shortest(rec.residual_norm);
      out += rec.converged ? ",1" : ",0";
    }
    out += '\n';
  }
  return out;
}

DecomposeReport decompose_one(const Vector8d& coords, const SolverConfig& cfg) {
  if (coords.norm() == 0.0) {
    throw std::domain_error("decompose: zero input has no polar form");
  }
  DecomposeReport report;
  report.coords = coords;
  report.modulus = coords.norm();
  const CdElement<double> o{coords};
  report.polar = to_basic_polar(o);
  try {
    report.hs = hs_angles(hs_components(o));
    report.hs_error = norm(hs_reconstruct(report.modulus, report.hs) - o);
  } catch (const std::domain_error&) {
    report.hs_degenerate = true;
    report.hs_error = std::numeric_limits<double>::quiet_NaN();
  }
  report.factor = solve(CdElement<double>{coords / report.modulus}, cfg);
  return report;
}

std::string decompose_text(const DecomposeReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "input x0..x7      :";
  for (int k = 0; k < 8; ++k) out << ' ' << r.coords[k];
  out << '\n';
  out << "modulus           : " << r.modulus << '\n';
  out << "basic polar theta : " << r.polar.theta << '\n';
  out << "basic polar axis  :";
  for (int k = 0; k < 8; ++k) out << ' ' << r.polar.axis[k];
  out << '\n';
  if (r.hs_degenerate) {
    out << "hs angles psi1..7 : undefined (degenerate component moduli)\n";
    out << "hs recon error    : n/a\n";
  } else {
    out << "hs angles psi1..7 : " << r.hs.psi1 << ' ' << r.hs.psi2 << ' ' << r.hs.psi3 << ' '
        << r.hs.psi4 << ' ' << r.hs.psi5 << ' ' << r.hs.psi6 << ' ' << r.hs.psi7 << '\n';
    out << "hs recon error    : " << r.hs_error << '\n';
  }
  out << "factor y0..y3     :";
  for (int k = 0; k < 4; ++k) out << ' ' << r.factor.y[k];
  out << '\n';
  out << "factor phi4..phi7 :";
  for (int k = 0; k < 4; ++k) out << ' ' << r.factor.phi[k];
  out << '\n';
  out << "factor residual   : " << r.factor.residual_norm
      << (r.factor.converged ? " (converged, start " : " (NOT converged, best start ")
      << r.factor.start_index << ", " << r.factor.iterations << " iterations)\n";
  return out.str();
}

std::string decompose_csv(const DecomposeReport& r) {
  std::string out;
  out += "x0,x1,x2,x3,x4,x5,x6,x7,modulus,theta,hs_error,y0,y1,y2,y3,phi4,phi5,phi6,phi7,"
         "residual_norm,converged\n";
  std::string row;
  for (int k = 0; k < 8; ++k) row += format_shortest(r.coords[k]) + ',';
  row += format_shortest(r.modulus) + ',';
  row += format_shortest(r.polar.theta) + ',';
  row += format_shortest(r.hs_error) + ',';
  for (int k = 0; k < 4; ++k) row += format_shortest(r.factor.y[k]) + ',';
  for (int k = 0; k < 4; ++k) row += format_shortest(r.factor.phi[k]) + ',';
  row += format_shortest(r.factor.residual_norm) + ',';
  row += r.factor.converged ? "1" : "0";
  out += row + '\n';
  return out;
}

}  // namespace cdpolar
