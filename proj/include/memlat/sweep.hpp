#pragma once

#include <string>
#include <vector>

#include "memlat/config.hpp"
#include "memlat/params.hpp"

namespace memlat {

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  bool log_scale = false;

  std::vector<double> values() const;
};

/// (g, gamma_cool) grid over a base model. Only g and gamma_cool change
/// between cells; the diffusion rates stay at their base values.
struct SweepSpec {
  Axis g_axis;
  Axis cool_axis;
  ModelParams base;
};

struct SweepRecord {
  double g = 0.0;
  double gamma_cool = 0.0;
  double nbar_ss = 0.0;
  double f = 0.0;
  bool ok = false;  // false: no steady state (not Hurwitz)
};

struct SweepResult {
  int g_points = 0;
  int cool_points = 0;
  std::vector<SweepRecord> records;  // row-major over (g, gamma_cool)

  const SweepRecord& at(int ig, int ic) const { return records[ig * cool_points + ic]; }
};

/// points >= 2, min <= max, positive bounds for log axes. InvalidInput
/// otherwise.
void validate(const Axis& axis, const std::string& name);

/// { "base": <config>, "g_axis": {"min", "max", "points", "scale": "log" or
///   "linear"}, "cool_axis": {...},
///   "solver": "gaussian" }
SweepSpec parse_sweep_spec(const json& spec);

/// Worker-pool evaluation; results land at fixed indices, so the output does
/// not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec, int threads);

/// Header g,gamma_cool,nbar_ss,f,status; numbers with 17 significant digits.
std::string to_csv(const SweepResult& result);

/// MEMLAT_THREADS if set and positive, else the hardware concurrency.
int threads_from_env();

}  // namespace memlat
