// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fidsus/backend.hpp"
#include "fidsus/csv.hpp"
#include "fidsus/error.hpp"
#include "fidsus/fs_engine.hpp"
#include "fidsus/model_kitaev.hpp"
#include "fidsus/regression.hpp"
#include "fidsus/reproduce.hpp"
#include "fidsus/scaling.hpp"
#include "fidsus/summation.hpp"
#include "oracles.hpp"

using namespace fidsus;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double kitaev_chi(int L, double jz) { return kitaev_fs_sum({L, KitaevCouplings::on_line(jz)}).value; }

void criterion_1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20080101);
  std::uniform_int_distribution<int> dims(2, 64);
  std::uniform_real_distribution<double> lambdas(-1.0, 1.0);
  double worst_corr = 0.0, worst_overlap = 0.0, worst_chain = -INFINITY;
  int done = 0, errors = 0;
  while (done < 100) {
    const int dim = dims(rng);
    const ParametrizedHamiltonian p(HermitianOperator(oracle::random_hermitian(dim, rng)),
                                    HermitianOperator(oracle::random_hermitian(dim, rng)), lambdas(rng));
    const auto d = decompose(p.assembled());
    if (ground_state(d).gap < 1e-3) continue;  // keep instances clearly nondegenerate
    ++done;
    try {
      const double s = fs_spectral(p, d).value;
      const double scale = std::max(1.0, s);
      worst_corr = std::max(worst_corr, std::abs(s - fs_correlator(p).value) / scale);
      worst_overlap = std::max(worst_overlap, std::abs(s - fs_overlap(p).value) / scale);
      const auto b = inequality_bounds(p);
      worst_chain = std::max({worst_chain, b.chi - b.mid, b.mid - b.upper});
    } catch (const Error& e) {
      ++errors;
      std::printf("  instance %d (dim %d): %s\n", done, dim, e.what());
    }
  }
  const double t = seconds_since(t0);
  const bool ok = errors == 0 && worst_corr <= 1e-7 && worst_overlap <= 1e-5 && worst_chain <= 1e-10 && t < 30.0;
  report(1, ok,
         fmt("estimator equivalence on 100 random pairs: max rel |S-C| = %.2e (<= 1e-7), max rel |S-O| = %.2e "
             "(<= 1e-5), max chain violation = %.2e (<= 1e-10), errors = %d, %.1f s (< 30 s)",
             worst_corr, worst_overlap, worst_chain, errors, t));
}

void criterion_2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string detail;
  for (double jz : {0.55, 0.75}) {
    std::vector<double> x, y;
    for (int L : kitaev_checkpoint_sizes()) {
      x.push_back(std::log(L));
      y.push_back(kitaev_chi(L, jz) / (double(L) * L));
    }
    const double mean = compensated_sum(y) / static_cast<double>(y.size());
    const double ratio = std::abs(ols(x, y).slope) / mean;
    worst = std::max(worst, ratio);
    detail += fmt("jz=%.2f |slope|/mean=%.2e; ", jz, ratio);
  }
  const double t = seconds_since(t0);
  report(2, worst <= 1e-3 && t < 60.0, "Kitaev gapped intensivity: " + detail + fmt("(<= 1e-3), %.1f s (< 60 s)", t));
}

void criterion_3() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (double jz : {0.15, 0.25, 0.35}) {
    SizeSweep all;
    all.system_dim = 2;
    for (int L : kitaev_dense_sizes()) all.samples.push_back({double(L), kitaev_chi(L, jz)});
    const SizeSweep env = log_binned_minimum(all, kKitaevEnvelopeBins);
    std::vector<double> x, y;
    for (const auto& s : env.samples) {
      x.push_back(std::log(s.size));
      y.push_back(s.chi / (s.size * s.size));
    }
    const LinearFit f = theil_sen(x, y);
    std::string cls = "ambiguous";
    bool cls_ok = false;
    try {
      const QadResult q = classify_qad(env);
      cls = format_qad(q);
      cls_ok = q.has_log_factor && std::abs(q.exponent - 2.0) < 0.25;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Ambiguous) throw;
    }
    ok = ok && f.slope > 0.0 && f.r2 >= 0.95 && cls_ok;
    detail += fmt("jz=%.2f slope=%.3f r2=%.4f qad=%s; ", jz, f.slope, f.r2, cls.c_str());
  }
  const double t = seconds_since(t0);
  report(3, ok && t < 120.0,
         "Kitaev gapless log scaling (envelope of odd L=51..2001, 8 log bins): " + detail +
             fmt("(slope > 0, r2 >= 0.95, qad 2+ln), %.1f s (< 120 s)", t));
}

void criterion_4() {
  SizeSweep s;
  for (int L : kitaev_checkpoint_sizes()) s.samples.push_back({double(L), kitaev_chi(L, 0.5)});
  const double p = fit_power_law(s).exponent;
  report(4, std::abs(p - 2.5) <= 0.1, fmt("Kitaev critical exponent at jz=0.5, L=201..2001: %.4f (2.5 +- 0.1)", p));
}

void criterion_5() {
  const int L = kFig1RightSide;
  ParamSweep ps{{}, 0.5, Side::Below};
  for (double d : geometric_grid(1e-3, 0.1, 16)) {
    const double jz = 0.5 - d;
    ps.samples.push_back({jz, std::sqrt(d) * kitaev_chi(L, jz) / (double(L) * L)});
  }
  const LogDivergenceFit f = fit_log_divergence(ps);
  report(5, f.r2 >= 0.98,
         fmt("Kitaev gapless-side divergence at L=%d, jz in [0.40, 0.499] (16 log-spaced): r2 = %.4f (>= 0.98), "
             "slope = %.4f",
             L, f.r2, f.slope));
}

double value_of(const ReproduceReport& r, const std::string& id) { return r.check(id).value; }
bool pass_of(const ReproduceReport& r, const std::string& id) { return r.check(id).status == CheckStatus::Pass; }

void criterion_6(const ReproduceReport& lmg, double t) {
  const char* ids[] = {"lmg.d_a_plus", "lmg.d_a_minus", "lmg.mu", "lmg.alpha_plus", "lmg.alpha_minus"};
  bool ok = t < 300.0;
  for (const char* id : ids) ok = ok && pass_of(lmg, id);
  report(6, ok,
         fmt("LMG gamma=0, N=256..4096: d_a+ = %.4f (0 +- 0.1), d_a- = %.4f (1 +- 0.1), mu = %.4f (1.333 +- 0.05), "
             "alpha+ = %.4f (2 +- 0.2), alpha- = %.4f (0.5 +- 0.2) [%s], %.1f s (< 300 s)",
             value_of(lmg, ids[0]), value_of(lmg, ids[1]), value_of(lmg, ids[2]), value_of(lmg, ids[3]),
             value_of(lmg, ids[4]), lmg.check("lmg.alpha_plus").note.c_str(), t));
}

void criterion_7(const ReproduceReport& ising) {
  const char* ids[] = {"ising.mu", "ising.d_a_plus", "ising.d_a_minus", "ising.alpha_plus", "ising.alpha_minus",
                       "ising.freefermion_vs_ed"};
  bool ok = true;
  for (const char* id : ids) ok = ok && pass_of(ising, id);
  report(7, ok,
         fmt("Ising free fermions: mu = %.4f (2 +- 0.05), d_a+ = %.4f, d_a- = %.4f (1 +- 0.05), alpha+ = %.4f, "
             "alpha- = %.4f (1 +- 0.05); max rel |ED - FF| = %.2e (<= 1e-6)",
             value_of(ising, ids[0]), value_of(ising, ids[1]), value_of(ising, ids[2]), value_of(ising, ids[3]),
             value_of(ising, ids[4]), value_of(ising, ids[5])));
}

void criterion_8(const ReproduceReport& ising, const ReproduceReport& lmg) {
  struct Row {
    double mu, nu, d_a, alpha;
  };
  const Row table[] = {{2, 1, 1, 1}, {2, 1, 1, 1}, {4.0 / 3, 2.0 / 3, 0, 2}, {4.0 / 3, 2.0 / 3, 1, 0.5}};
  double exact_worst = 0.0;
  for (const Row& r : table) exact_worst = std::max(exact_worst, std::abs(check_scaling_relation(r.mu, r.nu, r.d_a) - r.alpha));
  const char* ids[] = {"ising.scaling_relation_plus", "ising.scaling_relation_minus", "lmg.scaling_relation_plus",
                       "lmg.scaling_relation_minus"};
  bool ok = exact_worst <= 1e-15;
  double worst = 0.0;
  for (const char* id : ids) {
    ok = ok && pass_of(id[0] == 'i' ? ising : lmg, id);
    worst = std::max(worst, std::abs(value_of(id[0] == 'i' ? ising : lmg, id)));
  }
  report(8, ok,
         fmt("scaling relation: max |alpha - (mu - d_a)/nu| over fitted Ising/LMG = %.4f (<= 0.25); "
             "reference exponent table reproduced to %.1e",
             worst, exact_worst));
}

void criterion_9() {
  const auto t0 = Clock::now();
  std::string first;
  bool same = true;
  for (unsigned workers : {1u, 4u, 16u}) {
    const std::string csv = to_csv_string(reproduce({ReproduceTarget::Fig1Left, "", workers, false}).data);
    if (first.empty()) {
      first = csv;
    } else {
      same = same && csv == first;
    }
  }
  report(9, same && !first.empty(),
         fmt("reproduce fig1_left CSV byte-identical at workers 1, 4, 16 (%zu bytes), %.1f s", first.size(),
             seconds_since(t0)));
}

}  // namespace

int main(int, char** argv) {
  reexec_with_working_blas(argv);
  const BackendStatus& backend = lapack_backend_status();
  std::printf("LAPACK self-test: %s (core %s)\n", backend.ok ? "ok" : "FAILED",
              backend.blas_core.empty() ? "unknown" : backend.blas_core.c_str());
  auto guarded = [](int id, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("error: ") + e.what());
    }
  };
  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, criterion_3);
  guarded(4, criterion_4);
  guarded(5, criterion_5);

  ReproduceReport ising, lmg;
  double lmg_time = 0.0;
  bool have_ising = false, have_lmg = false;
  guarded(7, [&] {
    ising = reproduce({ReproduceTarget::Table1, "ising", 1, false});
    have_ising = true;
  });
  guarded(6, [&] {
    const auto t0 = Clock::now();
    lmg = reproduce({ReproduceTarget::Table1, "lmg", 1, false});
    lmg_time = seconds_since(t0);
    have_lmg = true;
  });
  if (have_lmg) guarded(6, [&] { criterion_6(lmg, lmg_time); });
  if (have_ising) guarded(7, [&] { criterion_7(ising); });
  if (have_ising && have_lmg) {
    guarded(8, [&] { criterion_8(ising, lmg); });
  } else {
    report(8, false, "needs the Ising and LMG reports");
  }
  guarded(9, criterion_9);

  std::printf("%d criterion/criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
