#include "fidsus/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fidsus/error.hpp"
#include "fidsus/fs_engine.hpp"
#include "fidsus/model_ising.hpp"
#include "fidsus/model_kitaev.hpp"
#include "fidsus/model_lmg.hpp"

namespace fidsus {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, "'" + key + "' expects a number, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (d != std::floor(d)) throw Error(ErrorKind::ConfigError, "'" + key + "' expects an integer");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::ConfigError, "'" + key + "' expects a boolean, got '" + v + "'");
}

double default_scale_dim(Model model, double lambda) {
  switch (model) {
    case Model::Kitaev: return 2.0;
    case Model::Ising: return 1.0;
    case Model::Lmg: return lambda > 1.0 ? 0.0 : 1.0;
  }
  return 1.0;
}

FsEstimate run_engine(SweepMethod method, const ParametrizedHamiltonian& p) {
  switch (method) {
    case SweepMethod::Spectral: return fs_spectral(p);
    case SweepMethod::Overlap: return fs_overlap(p);
    case SweepMethod::Correlator: return fs_correlator(p);
    case SweepMethod::ClosedForm: break;
  }
  throw Error(ErrorKind::ConfigError, "closed_form is not an engine method");
}

}  // namespace

std::string_view name(Model model) noexcept {
  switch (model) {
    case Model::Lmg: return "lmg";
    case Model::Ising: return "ising";
    case Model::Kitaev: return "kitaev";
  }
  return "unknown";
}

std::string_view name(SweepMethod method) noexcept {
  switch (method) {
    case SweepMethod::Spectral: return "spectral";
    case SweepMethod::Overlap: return "overlap";
    case SweepMethod::Correlator: return "correlator";
    case SweepMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

Model parse_model(std::string_view text) {
  if (text == "lmg") return Model::Lmg;
  if (text == "ising") return Model::Ising;
  if (text == "kitaev" || text == "khm") return Model::Kitaev;
  if (text == "ktm") throw Error(ErrorKind::UnsupportedModel, "the Kitaev toric model is not implemented");
  throw Error(ErrorKind::ConfigError, "unknown model '" + std::string(text) + "'");
}

SweepMethod parse_method(std::string_view text) {
  if (text == "spectral") return SweepMethod::Spectral;
  if (text == "overlap") return SweepMethod::Overlap;
  if (text == "correlator") return SweepMethod::Correlator;
  if (text == "closed_form") return SweepMethod::ClosedForm;
  throw Error(ErrorKind::ConfigError, "unknown method '" + std::string(text) + "'");
}

SweepMethod default_method(Model model) noexcept {
  return model == Model::Lmg ? SweepMethod::Spectral : SweepMethod::ClosedForm;
}

unsigned default_workers() {
  if (const char* env = std::getenv("FIDSUS_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::vector<double> CouplingGrid::values() const {
  if (count < 1) throw Error(ErrorKind::ConfigError, "grid count must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = start;
    return v;
  }
  if (log_spaced && !(start > 0.0 && stop > 0.0)) {
    throw Error(ErrorKind::ConfigError, "log grid needs positive endpoints");
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    v[i] = log_spaced ? start * std::pow(stop / start, t) : start + (stop - start) * t;
  }
  v.back() = stop;
  return v;
}

void RunConfig::validate() const {
  if (grid.count < 1) throw Error(ErrorKind::ConfigError, "grid count must be >= 1");
  if (sizes.empty()) throw Error(ErrorKind::ConfigError, "size list is empty");
  for (int s : sizes) {
    if (s < 1) throw Error(ErrorKind::ConfigError, "sizes must be positive");
  }
  if (workers < 1) throw Error(ErrorKind::ConfigError, "workers must be >= 1");
  if (method == SweepMethod::ClosedForm && model == Model::Lmg) {
    throw Error(ErrorKind::ConfigError, "closed_form is only available for ising and kitaev");
  }
  if (model == Model::Kitaev && method != SweepMethod::ClosedForm) {
    throw Error(ErrorKind::ConfigError, "kitaev supports only the closed_form method");
  }
  (void)grid.values();
}

std::vector<std::string> apply_config_text(std::string_view text, RunConfig& config) {
  std::vector<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "config line " + std::to_string(lineno) + " lacks '='");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    seen.push_back(key);
    if (key == "model") {
      config.model = parse_model(value);
    } else if (key == "start") {
      config.grid.start = parse_double(key, value);
    } else if (key == "stop") {
      config.grid.stop = parse_double(key, value);
    } else if (key == "count") {
      config.grid.count = parse_int(key, value);
    } else if (key == "log") {
      config.grid.log_spaced = parse_bool(key, value);
    } else if (key == "sizes") {
      config.sizes.clear();
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) {
        if (!trim(item).empty()) config.sizes.push_back(parse_int(key, trim(item)));
      }
    } else if (key == "method") {
      config.method = parse_method(value);
    } else if (key == "robust_fit") {
      config.robust_fit = parse_bool(key, value);
    } else if (key == "workers") {
      config.workers = static_cast<unsigned>(std::max(0, parse_int(key, value)));
    } else if (key == "output") {
      config.output = value;
    } else if (key == "gamma") {
      config.gamma = parse_double(key, value);
    } else if (key == "scale_dim") {
      config.scale_dim = parse_double(key, value);
    } else if (key == "extended") {
      config.extended = parse_bool(key, value);
    } else if (key == "timing") {
      config.record_timing = parse_bool(key, value);
    } else {
      throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "'");
    }
  }
  return seen;
}

std::vector<std::string> apply_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return apply_config_text(buf.str(), config);
}

SweepRow compute_point(const RunConfig& config, int size, double lambda) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.model = config.model;
  row.lambda = lambda;
  row.size = size;
  row.method = config.method;

  switch (config.model) {
    case Model::Lmg: {
      const LmgParams p{size, config.gamma, lambda};
      row.params = {{"gamma", config.gamma}};
      row.chi_f = run_engine(config.method, build_lmg(p)).value;
      break;
    }
    case Model::Ising: {
      const IsingParams p{size, lambda};
      if (config.method == SweepMethod::ClosedForm) {
        row.chi_f = ising_fs_freefermion(p).value;
      } else {
        row.chi_f = run_engine(config.method, build_ising_ed(p, IsingSector::EvenParity)).value;
      }
      break;
    }
    case Model::Kitaev: {
      const KitaevParams p{size, KitaevCouplings::on_line(lambda), true};
      row.params = {{"jx", p.couplings.jx}, {"jy", p.couplings.jy}, {"jz", p.couplings.jz}};
      row.chi_f = kitaev_fs_sum(p, {1, config.extended}).value;
      break;
    }
  }
  row.d_a_used = config.scale_dim.value_or(default_scale_dim(config.model, lambda));
  row.chi_f_scaled = row.chi_f / std::pow(static_cast<double>(size), row.d_a_used);
  if (config.record_timing) {
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  const std::vector<double> couplings = config.grid.values();
  std::vector<std::pair<int, double>> points;
  for (int s : config.sizes) {
    for (double c : couplings) points.emplace_back(s, c);
  }
  return run_points(config, std::move(points));
}

std::vector<SweepRow> run_points(const RunConfig& config, std::vector<std::pair<int, double>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return parallel_map(points.size(), config.workers,
                      [&](std::size_t i) { return compute_point(config, points[i].first, points[i].second); });
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"model"};
  if (!rows.empty()) {
    for (const auto& [key, _] : rows.front().params) t.header.push_back(key);
  }
  for (const char* col : {"lambda", "size", "chi_f", "chi_f_scaled", "method", "d_a_used", "wall_time_ms"}) {
    t.header.emplace_back(col);
  }
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::string(name(r.model))};
    for (const auto& [_, value] : r.params) cells.push_back(format_number(value));
    cells.push_back(format_number(r.lambda));
    cells.push_back(std::to_string(r.size));
    cells.push_back(format_number(r.chi_f));
    cells.push_back(format_number(r.chi_f_scaled));
    cells.emplace_back(name(r.method));
    cells.push_back(format_number(r.d_a_used));
    cells.push_back(r.wall_time_ms ? format_number(*r.wall_time_ms) : std::string());
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace fidsus
