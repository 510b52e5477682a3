// Copyright 2026 The cowqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cowqkd/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace cowqkd {

namespace {

constexpr int kCoarseGrid = 15;
constexpr int kGoldenSteps = 22;

// a better than b: trusted first, then larger key rate, then smaller e_phase.
bool better(const ScanRow& a, const ScanRow& b) {
  if (a.ok() != b.ok()) return a.ok();
  if (!a.ok()) return false;
  if (a.key_rate != b.key_rate) return a.key_rate > b.key_rate;
  return a.e_phase < b.e_phase;
}

void check_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw ConfigError(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw ConfigError(std::string(name) + " grid is not finite");
    if (i > 0 && !(g[i] > g[i - 1])) {
      throw ConfigError(std::string(name) + " grid is not strictly increasing");
    }
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_number(const std::string& field) {
  if (field.empty()) throw std::invalid_argument("empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) {
    throw std::invalid_argument("bad number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string to_string(BetaMode m) {
  switch (m) {
    case BetaMode::equal: return "equal";
    case BetaMode::half: return "half";
    case BetaMode::grid: return "grid";
  }
  return "?";
}

BetaMode parse_beta_mode(const std::string& text) {
  if (text == "equal") return BetaMode::equal;
  if (text == "half") return BetaMode::half;
  if (text == "grid") return BetaMode::grid;
  throw ConfigError("unknown beta mode '" + text + "'");
}

std::vector<double> beta_ratios(BetaMode m) {
  switch (m) {
    case BetaMode::equal: return {1.0};
    case BetaMode::half: return {0.5};
    case BetaMode::grid: return {1.0, 0.5, 0.25, 0.125};
  }
  return {};
}

double loss_to_eta(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

std::vector<double> ScanSpec::losses() const {
  if (distance_km.empty()) return loss_db;
  std::vector<double> out;
  out.reserve(distance_km.size());
  for (double km : distance_km) out.push_back(attenuation_db_per_km * km);
  return out;
}

std::vector<double> ScanSpec::preparation_probs() const {
  return probs.empty() ? default_probs(variant) : probs;
}

void ScanSpec::validate() const {
  if (distance_km.empty()) {
    check_grid(loss_db, "loss");
    if (loss_db.front() < 0.0) throw ConfigError("loss must be nonnegative");
  } else {
    check_grid(distance_km, "distance");
    if (distance_km.front() < 0.0) throw ConfigError("distance must be nonnegative");
    if (!(attenuation_db_per_km > 0.0) || !std::isfinite(attenuation_db_per_km)) {
      throw ConfigError("attenuation must be positive");
    }
  }
  if (alpha_auto != alpha.empty()) {
    throw ConfigError("give either an alpha grid or alpha auto, not both");
  }
  if (!alpha_auto) {
    check_grid(alpha, "alpha");
    if (!(alpha.front() > 0.0)) throw ConfigError("alpha must be positive");
  }
  if (!(e_z >= 0.0 && e_z <= 0.5) || !(e_x >= 0.0 && e_x <= 0.5)) {
    throw ConfigError("error rates must lie in [0, 1/2]");
  }
  if (!(tol > 0.0) || !(tol < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
  if (threads < 0) throw ConfigError("thread count must be nonnegative");
  ProtocolConfig c;
  c.variant = variant;
  c.probs = preparation_probs();
  c.e_z = e_z;
  c.e_x = e_x;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ScanRow evaluate_point(const ScanSpec& spec, double loss_db, double alpha, double beta) {
  ScanRow row;
  row.loss_db = loss_db;
  row.eta = loss_to_eta(loss_db);
  row.alpha = alpha;
  row.beta = beta;
  row.plob = plob_bound(row.eta);
  row.gap = std::numeric_limits<double>::infinity();
  ProtocolConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.eta = row.eta;
  c.e_z = spec.e_z;
  c.e_x = spec.e_x;
  c.variant = spec.variant;
  c.probs = spec.preparation_probs();
  try {
    const KeyRateResult k = key_rate(c, spec.tol, spec.error_mode);
    row.e_phase = k.e_phase_certified;
    row.e_z = k.e_z;
    row.p_det_z = k.p_det_z_lower;
    row.key_rate = k.key_rate;
    row.gap = k.duality_gap;
    row.status = to_string(k.status);
  } catch (const std::exception&) {
    row.status = "error";
  }
  return row;
}

ScanRow evaluate_alpha(const ScanSpec& spec, double loss_db, double alpha) {
  ScanRow best;
  bool first = true;
  for (double r : beta_ratios(spec.beta_mode)) {
    ScanRow row = evaluate_point(spec, loss_db, alpha, r * alpha);
    if (first || better(row, best)) best = std::move(row);
    first = false;
  }
  return best;
}

ScanRow optimize_alpha(const ScanSpec& spec, double loss_db) {
  const double lo = std::log10(kAlphaMin);
  const double hi = std::log10(kAlphaMax);
  ScanRow best;
  bool have = false;
  auto eval = [&](double u) {
    ScanRow row = evaluate_alpha(spec, loss_db, std::pow(10.0, u));
    if (!have || better(row, best)) best = row;
    have = true;
    return row;
  };
  // Untrusted points rank below every trusted one.
  auto score = [](const ScanRow& r) { return r.ok() ? r.key_rate : -1.0; };

  std::vector<double> u(kCoarseGrid);
  std::vector<double> f(kCoarseGrid);
  for (int i = 0; i < kCoarseGrid; ++i) {
    u[i] = lo + (hi - lo) * i / (kCoarseGrid - 1);
    f[i] = score(eval(u[i]));
  }
  const int i_best = static_cast<int>(std::max_element(f.begin(), f.end()) - f.begin());
  if (!(f[i_best] > 0.0)) return best;

  double a = u[std::max(0, i_best - 1)];
  double b = u[std::min(kCoarseGrid - 1, i_best + 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = score(eval(x1));
  double f2 = score(eval(x2));
  for (int k = 0; k < kGoldenSteps; ++k) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = score(eval(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = score(eval(x2));
    }
  }
  return best;
}

std::vector<ScanRow> scan(const ScanSpec& spec) {
  spec.validate();
  const std::vector<double> losses = spec.losses();
  struct Task {
    double loss;
    double alpha;
  };
  std::vector<Task> tasks;
  for (double l : losses) {
    if (spec.alpha_auto) {
      tasks.push_back({l, 0.0});
    } else {
      for (double a : spec.alpha) tasks.push_back({l, a});
    }
  }
  std::vector<ScanRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      rows[i] = spec.alpha_auto ? optimize_alpha(spec, tasks[i].loss)
                                : evaluate_alpha(spec, tasks[i].loss, tasks[i].alpha);
    }
  };
  unsigned n = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

double fit_scaling(const std::vector<ScanRow>& rows, double loss_lo, double loss_hi) {
  std::vector<double> x, y;
  for (const ScanRow& r : rows) {
    if (r.loss_db < loss_lo || r.loss_db > loss_hi) continue;
    if (!(r.key_rate > 0.0)) {
      throw std::invalid_argument("non-positive key rate in the fit window");
    }
    x.push_back(std::log(r.eta));
    y.push_back(std::log(r.key_rate));
  }
  if (x.size() < 5) throw std::invalid_argument("fewer than five rows in the fit window");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("degenerate fit window");
  return sxy / sxx;
}

const char* const kCsvHeader = "loss_db,eta,alpha,beta,e_phase,e_z,p_det_z,key_rate,plob,gap,status";

void emit_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ScanRow& r : rows) {
    for (double v : {r.loss_db, r.eta, r.alpha, r.beta, r.e_phase, r.e_z, r.p_det_z,
                     r.key_rate, r.plob, r.gap}) {
      out << format_number(v) << ',';
    }
    out << r.status << '\n';
  }
}

std::string emit_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  emit_csv(out, rows);
  return out.str();
}

std::vector<ScanRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("missing or unexpected CSV header");
  }
  std::vector<ScanRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 11) throw std::invalid_argument("expected 11 fields: " + line);
    ScanRow r;
    double* dst[] = {&r.loss_db, &r.eta,      &r.alpha, &r.beta, &r.e_phase,
                     &r.e_z,     &r.p_det_z, &r.key_rate, &r.plob, &r.gap};
    for (int i = 0; i < 10; ++i) *dst[i] = parse_number(f[i]);
    if (f[10].empty()) throw std::invalid_argument("empty status field");
    r.status = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<double> parse_range(const std::string& text) {
  const std::vector<std::string> f = split(text, ':');
  double a = 0, b = 0, step = 0;
  try {
    if (f.size() == 1) return {parse_number(f[0])};
    if (f.size() != 3) throw std::invalid_argument("");
    a = parse_number(f[0]);
    b = parse_number(f[1]);
    step = parse_number(f[2]);
  } catch (const std::invalid_argument&) {
    throw ConfigError("range '" + text + "' is not of the form a:b:step");
  }
  if (!(step > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("range '" + text + "' needs step > 0 and b >= a");
  }
  const long count = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 1000000) throw ConfigError("range '" + text + "' is too long");
  std::vector<double> out;
  for (long k = 0; k < count; ++k) out.push_back(a + step * static_cast<double>(k));
  return out;
}

namespace {

using nlohmann::json;

std::vector<double> read_grid(const json& v, const char* key) {
  if (v.is_string()) return parse_range(v.get<std::string>());
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return v.get<std::vector<double>>();
  if (v.is_object()) {
    const double a = v.at("start").get<double>();
    const double b = v.at("stop").get<double>();
    const double s = v.at("step").get<double>();
    return parse_range(format_number(a) + ":" + format_number(b) + ":" + format_number(s));
  }
  throw ConfigError(std::string("bad value for ") + key);
}

}  // namespace

ErrorMode parse_error_mode(const std::string& text) {
  if (text == "worst-case" || text == "worst_case") return ErrorMode::worst_case;
  if (text == "expected") return ErrorMode::expected;
  throw ConfigError("unknown error mode '" + text + "'");
}

ScanSpec parse_scan_config(const std::string& json_text, std::string* out_path) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.contains("qber") && (doc.contains("e_z") || doc.contains("e_x"))) {
    throw ConfigError("qber sets both error rates; do not combine it with e_z or e_x");
  }
  ScanSpec spec;
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "loss_db") {
        spec.loss_db = read_grid(v, "loss_db");
      } else if (key == "distance_km") {
        spec.distance_km = read_grid(v, "distance_km");
      } else if (key == "attenuation_db_per_km") {
        spec.attenuation_db_per_km = v.get<double>();
      } else if (key == "alpha") {
        if (v.is_string() && v.get<std::string>() == "auto") {
          spec.alpha.clear();
          spec.alpha_auto = true;
        } else {
          spec.alpha = read_grid(v, "alpha");
          spec.alpha_auto = false;
        }
      } else if (key == "beta_mode") {
        spec.beta_mode = parse_beta_mode(v.get<std::string>());
      } else if (key == "variant") {
        spec.variant = parse_variant(v.get<std::string>());
      } else if (key == "qber") {
        spec.e_z = spec.e_x = v.get<double>();
      } else if (key == "e_z") {
        spec.e_z = v.get<double>();
      } else if (key == "e_x") {
        spec.e_x = v.get<double>();
      } else if (key == "probs") {
        spec.probs = v.get<std::vector<double>>();
      } else if (key == "tol") {
        spec.tol = v.get<double>();
      } else if (key == "seed") {
        spec.seed = v.get<std::uint64_t>();
      } else if (key == "threads") {
        spec.threads = v.get<int>();
      } else if (key == "error_mode") {
        spec.error_mode = parse_error_mode(v.get<std::string>());
      } else if (key == "out") {
        if (out_path) *out_path = v.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace cowqkd
