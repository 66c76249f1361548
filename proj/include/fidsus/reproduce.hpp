#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fidsus/csv.hpp"
#include "fidsus/sweep.hpp"

namespace fidsus {

enum class ReproduceTarget { Fig1Left, Fig1Right, Table1 };

struct ReproduceRequest {
  ReproduceTarget target = ReproduceTarget::Fig1Left;
  std::string row;  // table1 only: ising, lmg, khm (ktm is rejected)
  unsigned workers = 1;
  bool extended = false;
};

/// "fig1_left", "fig1_right", "table1" or "table1:<row>".
ReproduceRequest parse_reproduce_target(std::string_view text);

enum class CheckStatus { Pass, Fail, Unverified, Reported };
std::string_view name(CheckStatus status) noexcept;

struct Check {
  std::string id;        // e.g. "kitaev.gapped_slope.jz=0.55"
  std::string quantity;  // human-readable description
  double value = 0.0;
  std::string expected;  // e.g. "2 +- 0.1"
  CheckStatus status = CheckStatus::Reported;
  std::string note;
};

struct ReproduceReport {
  std::string stem;  // file stem for outputs
  CsvTable data;
  std::string plot_script;
  std::vector<Check> checks;

  const Check& check(std::string_view id) const;
  bool passed() const;  // no Fail entries
  std::string summary() const;
  CsvTable check_table() const;
};

ReproduceReport reproduce(const ReproduceRequest& request);

/// Writes <stem>.csv, <stem>.gp, <stem>_checks.csv and <stem>_summary.txt.
void write_report(const ReproduceReport& report, const std::filesystem::path& directory);

// Canonical size sets used by the recipes.
std::vector<int> kitaev_checkpoint_sizes();  // 201, 401, ..., 2001
std::vector<int> kitaev_dense_sizes();       // odd L, 51 .. 2001
std::vector<int> lmg_canonical_sizes();      // 256 .. 4096
std::vector<int> ising_canonical_sizes();    // 2^10 .. 2^16

inline constexpr std::size_t kKitaevEnvelopeBins = 8;
inline constexpr int kFig1RightSide = 2001;

}  // namespace fidsus
