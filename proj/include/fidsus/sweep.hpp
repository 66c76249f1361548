#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "fidsus/csv.hpp"

namespace fidsus {

enum class Model { Lmg, Ising, Kitaev };
enum class SweepMethod { Spectral, Overlap, Correlator, ClosedForm };

std::string_view name(Model model) noexcept;
std::string_view name(SweepMethod method) noexcept;
Model parse_model(std::string_view text);
SweepMethod parse_method(std::string_view text);

struct CouplingGrid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool log_spaced = false;

  std::vector<double> values() const;
};

/// Everything a sweep needs. Sizes are N for LMG and L for Ising/Kitaev.
struct RunConfig {
  Model model = Model::Kitaev;
  CouplingGrid grid;
  std::vector<int> sizes;
  SweepMethod method = SweepMethod::ClosedForm;
  bool robust_fit = false;
  unsigned workers = 1;
  std::filesystem::path output;
  double gamma = 0.0;                 // LMG anisotropy
  std::optional<double> scale_dim;    // d_a used for chi_f_scaled; model default when unset
  bool extended = false;              // Kitaev L up to 20001
  bool record_timing = false;         // fills wall_time_ms (breaks byte-identical output)

  /// Throws ConfigError on an unusable configuration.
  void validate() const;
};

/// Default method for a model: closed form where one exists, spectral otherwise.
SweepMethod default_method(Model model) noexcept;

/// Worker count from FIDSUS_WORKERS, falling back to 1.
unsigned default_workers();

/// Parses `key = value` lines ('#' starts a comment) onto `config`.
/// Keys: model, start, stop, count, log, sizes, method, robust_fit, workers,
/// output, gamma, scale_dim, extended, timing. Returns the keys seen, in order.
std::vector<std::string> apply_config_text(std::string_view text, RunConfig& config);
std::vector<std::string> apply_config_file(const std::filesystem::path& path, RunConfig& config);

struct SweepRow {
  Model model = Model::Kitaev;
  std::vector<std::pair<std::string, double>> params;
  double lambda = 0.0;
  int size = 0;
  double chi_f = 0.0;
  double chi_f_scaled = 0.0;
  SweepMethod method = SweepMethod::ClosedForm;
  double d_a_used = 0.0;
  std::optional<double> wall_time_ms;
};

/// chi_F for one (size, coupling) point; each point runs single-threaded.
SweepRow compute_point(const RunConfig& config, int size, double lambda);

/// All grid points, computed in parallel and sorted by (size, lambda).
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// Explicit (size, lambda) points; same ordering and determinism as run_sweep.
std::vector<SweepRow> run_points(const RunConfig& config, std::vector<std::pair<int, double>> points);

CsvTable sweep_table(const std::vector<SweepRow>& rows);

/// Runs `fn(i)` for i in [0, count) on a work queue and returns results in
/// index order. The first exception thrown by any task is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<std::optional<Result>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) slots[i].emplace(fn(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(std::max(workers, 1u), count));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace fidsus
