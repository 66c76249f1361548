// fidsus: fidelity-susceptibility sweeps, QAD classification and exponent fits.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fidsus/backend.hpp"
#include "fidsus/csv.hpp"
#include "fidsus/error.hpp"
#include "fidsus/reproduce.hpp"
#include "fidsus/scaling.hpp"
#include "fidsus/sweep.hpp"

namespace {

using namespace fidsus;

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kAmbiguous = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParams:
    case ErrorKind::TooLarge:
    case ErrorKind::UnsupportedModel:
    case ErrorKind::InvalidNu:
      return kConfig;
    case ErrorKind::Ambiguous:
      return kAmbiguous;
    default:
      return kNumerical;
  }
}

std::vector<int> parse_sizes(const std::string& text) {
  RunConfig tmp;
  apply_config_text("sizes = " + text, tmp);
  return tmp.sizes;
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << content;
  } else {
    write_file_atomically(output, content);
  }
}

// Flags that also exist as config-file keys; unset ones leave the file value.
struct SweepFlags {
  std::string config_file;
  std::optional<std::string> model, method, sizes, output;
  std::optional<double> start, stop, gamma, scale_dim;
  std::optional<int> count;
  std::optional<unsigned> workers;
  bool log = false, robust = false, extended = false, timing = false;
};

void add_model_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--model", f.model, "lmg | ising | kitaev");
  cmd->add_option("--method", f.method, "spectral | overlap | correlator | closed_form");
  cmd->add_option("--gamma", f.gamma, "LMG anisotropy (default 0)");
  cmd->add_option("--scale-dim", f.scale_dim, "d_a used for chi_f_scaled (default: model-specific)");
  cmd->add_flag("--extended", f.extended, "allow Kitaev L up to 20001");
  cmd->add_flag("--timing", f.timing, "fill wall_time_ms (output no longer reproducible)");
  cmd->add_option("-o,--output", f.output, "output CSV (default stdout)");
}

RunConfig build_config(const SweepFlags& f) {
  RunConfig cfg;
  cfg.workers = default_workers();
  bool method_given = false;
  if (!f.config_file.empty()) {
    const auto keys = apply_config_file(f.config_file, cfg);
    method_given = std::find(keys.begin(), keys.end(), "method") != keys.end();
  }
  if (f.model) cfg.model = parse_model(*f.model);
  if (f.method) {
    cfg.method = parse_method(*f.method);
    method_given = true;
  }
  if (!method_given) cfg.method = default_method(cfg.model);
  if (f.sizes) cfg.sizes = parse_sizes(*f.sizes);
  if (f.output) cfg.output = *f.output;
  if (f.start) cfg.grid.start = *f.start;
  if (f.stop) cfg.grid.stop = *f.stop;
  if (f.count) cfg.grid.count = *f.count;
  if (f.gamma) cfg.gamma = *f.gamma;
  if (f.scale_dim) cfg.scale_dim = *f.scale_dim;
  if (f.workers) cfg.workers = *f.workers;
  if (f.log) cfg.grid.log_spaced = true;
  if (f.robust) cfg.robust_fit = true;
  if (f.extended) cfg.extended = true;
  if (f.timing) cfg.record_timing = true;
  return cfg;
}

struct Grouped {
  std::map<double, SizeSweep> by_lambda;
};

Grouped group_by_lambda(const CsvTable& t, int system_dim) {
  const std::size_t lc = t.column("lambda"), sc = t.column("size"), cc = t.column("chi_f");
  Grouped g;
  for (const auto& row : t.rows) {
    auto& sweep = g.by_lambda[std::stod(row[lc])];
    sweep.system_dim = system_dim;
    sweep.samples.push_back({std::stod(row[sc]), std::stod(row[cc])});
  }
  for (auto& [lambda, sweep] : g.by_lambda) {
    std::sort(sweep.samples.begin(), sweep.samples.end(),
              [](const SizeSample& a, const SizeSample& b) { return a.size < b.size; });
    sweep.metadata = "lambda=" + format_number(lambda);
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  fidsus::reexec_with_working_blas(argv);
  CLI::App app{"Fidelity susceptibility of LMG, transverse-field Ising and Kitaev honeycomb models"};
  app.require_subcommand(1);

  // compute
  SweepFlags cf;
  double c_lambda = 0.0;
  int c_size = 0;
  auto* compute = app.add_subcommand("compute", "chi_F at a single (size, coupling) point");
  compute->add_option("--lambda", c_lambda, "coupling: h for lmg/ising, J_z for kitaev")->required();
  compute->add_option("--size", c_size, "N for lmg, L for ising/kitaev")->required();
  add_model_flags(compute, cf);

  // sweep
  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "parallel sweep over sizes x couplings, written as CSV");
  sweep->add_option("--config", sf.config_file, "key = value config file; flags override it");
  add_model_flags(sweep, sf);
  sweep->add_option("--start", sf.start, "first coupling");
  sweep->add_option("--stop", sf.stop, "last coupling");
  sweep->add_option("--count", sf.count, "number of couplings (>= 1)");
  sweep->add_flag("--log", sf.log, "log-spaced couplings");
  sweep->add_option("--sizes", sf.sizes, "comma-separated size list");
  sweep->add_option("-j,--workers", sf.workers, "worker threads (default $FIDSUS_WORKERS or 1)");

  // classify
  std::string k_input;
  int k_dim = 1;
  std::size_t k_bins = 0;
  std::optional<double> k_lambda;
  bool k_robust = false;
  auto* classify = app.add_subcommand("classify", "QAD of each coupling's size sweep in a sweep CSV");
  classify->add_option("input", k_input, "sweep CSV")->required();
  classify->add_option("--dim", k_dim, "system dimension used for the envelope (default 1)");
  classify->add_option("--bins", k_bins, "reduce to the per-log-bin minimum of chi/L^dim first (0 = off)");
  classify->add_option("--lambda", k_lambda, "only this coupling");
  classify->add_flag("--robust", k_robust, "also report a Theil-Sen power-law exponent");

  // exponents
  std::string e_input;
  std::optional<double> e_lambda_c;
  std::string e_side = "above";
  std::optional<int> e_size;
  bool e_log = false;
  std::optional<double> e_mu, e_nu, e_da;
  auto* exponents = app.add_subcommand("exponents", "critical exponent fits and the scaling relation");
  exponents->add_option("input", e_input, "sweep CSV (rows at one size, several couplings)");
  exponents->add_option("--lambda-c", e_lambda_c, "critical coupling");
  exponents->add_option("--side", e_side, "above | below")->check(CLI::IsMember({"above", "below"}));
  exponents->add_option("--size", e_size, "size to use (default: largest in the file)");
  exponents->add_flag("--log", e_log, "fit chi_scaled against ln|lambda - lambda_c| instead of a power");
  exponents->add_option("--mu", e_mu, "mu for the scaling relation");
  exponents->add_option("--nu", e_nu, "nu for the scaling relation");
  exponents->add_option("--d-a", e_da, "d_a for the scaling relation");

  // reproduce
  std::string r_target;
  std::string r_row;
  std::string r_dir = ".";
  std::optional<unsigned> r_workers;
  bool r_extended = false;
  auto* repro = app.add_subcommand("reproduce", "canonical figure/table runs with a pass/fail summary");
  repro->add_option("target", r_target, "fig1_left | fig1_right | table1")->required();
  repro->add_option("--row", r_row, "table1 row: ising | lmg | khm");
  repro->add_option("-d,--output-dir", r_dir, "directory for CSV, plot script and summary");
  repro->add_option("-j,--workers", r_workers, "worker threads (default $FIDSUS_WORKERS or 1)");
  repro->add_flag("--extended", r_extended, "fig1_right at L = 20001");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*compute) {
      RunConfig cfg = build_config(cf);
      cfg.sizes = {c_size};
      cfg.grid = {c_lambda, c_lambda, 1, false};
      cfg.validate();
      const SweepRow row = compute_point(cfg, c_size, c_lambda);
      emit(to_csv_string(sweep_table({row})), cf.output.value_or(""));
    } else if (*sweep) {
      const RunConfig cfg = build_config(sf);
      const auto rows = run_sweep(cfg);
      emit(to_csv_string(sweep_table(rows)), cfg.output.string());
    } else if (*classify) {
      const Grouped g = group_by_lambda(read_csv_file(k_input), k_dim);
      CsvTable out;
      out.header = {"lambda", "d_a", "log_factor", "class", "fit_r2", "residual_curvature"};
      if (k_robust) out.header.push_back("robust_exponent");
      bool ambiguous = false;
      for (const auto& [lambda, raw] : g.by_lambda) {
        if (k_lambda && std::abs(lambda - *k_lambda) > 1e-12) continue;
        const SizeSweep s = k_bins > 0 ? log_binned_minimum(raw, k_bins) : raw;
        std::vector<std::string> cells{format_number(lambda)};
        try {
          const QadResult q = classify_qad(s);
          for (const std::string& c : {format_number(q.exponent), std::string(q.has_log_factor ? "1" : "0"),
                                       format_qad(q), format_number(q.fit_r2), format_number(q.residual_curvature)}) {
            cells.push_back(c);
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Ambiguous) throw;
          ambiguous = true;
          std::cerr << "warning: lambda=" << format_number(lambda) << ": " << e.what() << "\n";
          for (const char* c : {"nan", "", "ambiguous", "nan", "nan"}) cells.emplace_back(c);
        }
        if (k_robust) cells.push_back(format_number(fit_power_law(s, true).exponent));
        out.rows.push_back(std::move(cells));
      }
      std::cout << to_csv_string(out);
      if (ambiguous) return kAmbiguous;
    } else if (*exponents) {
      if (e_mu || e_nu || e_da) {
        if (!(e_mu && e_nu && e_da)) throw Error(ErrorKind::ConfigError, "--mu, --nu and --d-a go together");
        const auto sc = singularity_condition(*e_mu, *e_da);
        std::cout << "predicted_alpha," << format_number(check_scaling_relation(*e_mu, *e_nu, *e_da)) << "\n"
                  << "singular," << (sc.singular ? 1 : 0) << "\n"
                  << "log_possible," << (sc.log_possible ? 1 : 0) << "\n";
      }
      if (!e_input.empty()) {
        if (!e_lambda_c) throw Error(ErrorKind::ConfigError, "--lambda-c is required with an input file");
        const CsvTable t = read_csv_file(e_input);
        const std::size_t lc = t.column("lambda"), sc = t.column("size"), yc = t.column("chi_f_scaled");
        int size = e_size.value_or(0);
        if (!e_size) {
          for (const auto& r : t.rows) size = std::max(size, std::stoi(r[sc]));
        }
        ParamSweep ps;
        ps.lambda_c = *e_lambda_c;
        ps.side = e_side == "above" ? Side::Above : Side::Below;
        for (const auto& r : t.rows) {
          if (std::stoi(r[sc]) != size) continue;
          const double lambda = std::stod(r[lc]);
          if ((lambda > ps.lambda_c) == (ps.side == Side::Above) && lambda != ps.lambda_c) {
            ps.samples.push_back({lambda, std::stod(r[yc])});
          }
        }
        if (e_log) {
          const LogDivergenceFit f = fit_log_divergence(ps);
          std::cout << "size,slope,intercept,r2\n"
                    << size << "," << format_number(f.slope) << "," << format_number(f.intercept) << ","
                    << format_number(f.r2) << "\n";
        } else {
          const ExponentFit f = fit_critical_exponent(ps);
          std::cout << "size,alpha,r2\n" << size << "," << format_number(f.alpha) << "," << format_number(f.r2) << "\n";
        }
      } else if (!(e_mu || e_nu || e_da)) {
        throw Error(ErrorKind::ConfigError, "exponents needs an input CSV or --mu/--nu/--d-a");
      }
    } else if (*repro) {
      ReproduceRequest req = parse_reproduce_target(r_target);
      if (!r_row.empty()) req.row = r_row;
      if (req.target == ReproduceTarget::Table1 && req.row.empty()) {
        throw Error(ErrorKind::ConfigError, "table1 needs --row ising|lmg|khm");
      }
      req.workers = r_workers.value_or(default_workers());
      req.extended = r_extended;
      const ReproduceReport rep = reproduce(req);
      write_report(rep, r_dir);
      std::cout << rep.summary();
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: ConfigError: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
