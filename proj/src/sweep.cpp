#include "memlat/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "memlat/errors.hpp"
#include "memlat/gaussian.hpp"

namespace memlat {

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(points - 1);
    v[static_cast<std::size_t>(i)] =
        log_scale ? std::exp(std::log(min) + s * (std::log(max) - std::log(min)))
                  : min + s * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void validate(const Axis& axis, const std::string& name) {
  if (axis.points < 2) throw Error(ErrorCode::InvalidInput, name + ": points must be >= 2");
  if (!(axis.min <= axis.max)) throw Error(ErrorCode::InvalidInput, name + ": min must not exceed max");
  if (axis.log_scale && !(axis.min > 0.0)) {
    throw Error(ErrorCode::InvalidInput, name + ": log axis needs positive bounds");
  }
  if (!(axis.min >= 0.0)) throw Error(ErrorCode::InvalidInput, name + ": rates must be >= 0");
}

namespace {

Axis parse_axis(const json& spec, const char* name) {
  if (!spec.contains(name) || !spec.at(name).is_object()) {
    throw Error(ErrorCode::ParseError, std::string(name) + ": missing axis object");
  }
  const json& a = spec.at(name);
  for (const auto& item : a.items()) {
    if (item.key() != "min" && item.key() != "max" && item.key() != "points" &&
        item.key() != "scale") {
      throw Error(ErrorCode::ParseError, std::string(name) + "." + item.key() + ": unknown field");
    }
  }
  Axis axis;
  try {
    axis.min = parse_quantity(a.at("min"), Dimension::AngularFrequency, std::string(name) + ".min");
    axis.max = parse_quantity(a.at("max"), Dimension::AngularFrequency, std::string(name) + ".max");
    axis.points = a.at("points").get<int>();
    const std::string scale = a.value("scale", std::string("log"));
    if (scale != "log" && scale != "linear") {
      throw Error(ErrorCode::ParseError, std::string(name) + ".scale must be log or linear");
    }
    axis.log_scale = scale == "log";
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(name) + ": " + e.what());
  }
  validate(axis, name);
  return axis;
}

SweepRecord evaluate_cell(const ModelParams& base, double g, double gamma_cool) {
  SweepRecord rec;
  rec.g = g;
  rec.gamma_cool = gamma_cool;
  ModelParams m = base;
  m.g = g;
  m.gamma_cool = gamma_cool;
  try {
    const CoolingResult c = cooling_factor(m);
    rec.nbar_ss = c.nbar_ss;
    rec.f = c.factor;
    rec.ok = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotHurwitz) throw;
    rec.nbar_ss = std::numeric_limits<double>::quiet_NaN();
    rec.f = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

}  // namespace

SweepSpec parse_sweep_spec(const json& spec) {
  if (!spec.is_object()) throw Error(ErrorCode::ParseError, "sweep spec must be an object");
  if (spec.contains("solver") && spec.at("solver") != "gaussian") {
    throw Error(ErrorCode::ParseError, "solver: only \"gaussian\" is supported");
  }
  SweepSpec out;
  out.g_axis = parse_axis(spec, "g_axis");
  out.cool_axis = parse_axis(spec, "cool_axis");
  out.base = load_model(spec.contains("base") ? spec.at("base") : json::object());
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  validate(spec.g_axis, "g_axis");
  validate(spec.cool_axis, "cool_axis");
  const std::vector<double> gs = spec.g_axis.values();
  const std::vector<double> cools = spec.cool_axis.values();

  SweepResult result;
  result.g_points = static_cast<int>(gs.size());
  result.cool_points = static_cast<int>(cools.size());
  result.records.resize(gs.size() * cools.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t idx = next++; idx < result.records.size(); idx = next++) {
        result.records[idx] = evaluate_cell(spec.base, gs[idx / cools.size()],
                                            cools[idx % cools.size()]);
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = result.records.size();
    }
  };

  {
    const int n = std::max(1, threads);
    std::vector<std::jthread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::string to_csv(const SweepResult& result) {
  std::string out = "g,gamma_cool,nbar_ss,f,status\n";
  char buf[160];
  for (const auto& r : result.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s\n", r.g, r.gamma_cool,
                  r.nbar_ss, r.f, r.ok ? "ok" : "not_hurwitz");
    out += buf;
  }
  return out;
}

int threads_from_env() {
  if (const char* env = std::getenv("MEMLAT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace memlat
