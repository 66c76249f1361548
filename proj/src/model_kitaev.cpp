#include "fidsus/model_kitaev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fidsus/error.hpp"
#include "fidsus/summation.hpp"

namespace fidsus {

namespace {

constexpr std::size_t kRowsPerChunk = 8;

void validate_couplings(const KitaevCouplings& j, bool on_simplex) {
  for (double v : {j.jx, j.jy, j.jz}) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::InvalidParams, "Kitaev couplings must be finite and >= 0");
  }
  if (on_simplex && std::abs(j.jx + j.jy + j.jz - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidParams, "Kitaev couplings must satisfy jx + jy + jz = 1");
  }
}

double gap_squared(double qx, double qy, const KitaevCouplings& j) {
  const Dispersion d = dispersion(qx, qy, j);
  return d.eps * d.eps + d.delta * d.delta;
}

struct GapMinimum {
  double value, qx, qy;
};

// Compass search from a start point with step halving.
GapMinimum refine_minimum(double qx, double qy, double step, const KitaevCouplings& j) {
  double best = gap_squared(qx, qy, j);
  constexpr double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step > 1e-11 && best > 0.0) {
    bool moved = false;
    for (const auto& dir : dirs) {
      const double x = qx + step * dir[0];
      const double y = qy + step * dir[1];
      const double v = gap_squared(x, y, j);
      if (v < best) {
        best = v;
        qx = x;
        qy = y;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {best, qx, qy};
}

GapMinimum find_gap_minimum(const KitaevCouplings& couplings) {
  constexpr int kGrid = 64;
  std::vector<GapMinimum> grid;
  grid.reserve((kGrid + 1) * (kGrid + 1));
  for (int a = 0; a <= kGrid; ++a) {
    for (int b = 0; b <= kGrid; ++b) {
      const double qx = -std::numbers::pi + 2.0 * std::numbers::pi * a / kGrid;
      const double qy = -std::numbers::pi + 2.0 * std::numbers::pi * b / kGrid;
      grid.push_back({gap_squared(qx, qy, couplings), qx, qy});
    }
  }
  constexpr std::size_t kStarts = 8;
  std::partial_sort(grid.begin(), grid.begin() + kStarts, grid.end(),
                    [](const GapMinimum& l, const GapMinimum& r) { return l.value < r.value; });
  GapMinimum best = grid.front();
  for (std::size_t s = 0; s < kStarts; ++s) {
    const GapMinimum m = refine_minimum(grid[s].qx, grid[s].qy, 2.0 * std::numbers::pi / kGrid, couplings);
    if (m.value < best.value) best = m;
  }
  return best;
}

// Breakpoints on [c - pi, c + pi], geometric in the distance from c.
std::vector<double> centred_panels(double c, double width) {
  const double pi = std::numbers::pi;
  std::vector<double> offsets;
  for (double w = std::clamp(width, 1e-8, pi); w < pi; w *= 4.0) offsets.push_back(w);
  offsets.push_back(pi);
  std::vector<double> edges;
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) edges.push_back(c - *it);
  edges.push_back(c);
  for (double w : offsets) edges.push_back(c + w);
  return edges;
}

}  // namespace

void KitaevParams::validate() const {
  if (side < 1 || side % 2 == 0) {
    throw Error(ErrorKind::InvalidParams, "Kitaev lattice side must be odd and positive, got " + std::to_string(side));
  }
  validate_couplings(couplings, on_simplex);
}

std::string_view name(KitaevPhase phase) noexcept {
  return phase == KitaevPhase::Gapped ? "gapped" : "gapless";
}

Dispersion dispersion(double qx, double qy, const KitaevCouplings& j) {
  return {j.jx * std::cos(qx) + j.jy * std::cos(qy) + j.jz, j.jx * std::sin(qx) + j.jy * std::sin(qy)};
}

FsEstimate kitaev_fs_sum(const KitaevParams& params, const KitaevSumOptions& options) {
  params.validate();
  const int L = params.side;
  const int limit = options.extended ? kKitaevExtendedMaxSide : kKitaevDeskMaxSide;
  if (L > limit) {
    throw Error(ErrorKind::TooLarge, "Kitaev side " + std::to_string(L) + " exceeds " + std::to_string(limit) +
                                         (options.extended ? "" : " (use extended mode)"));
  }
  const KitaevCouplings& j = params.couplings;

  std::vector<double> cosq(L), sinq(L);
  for (int i = 0; i < L; ++i) {
    const int n = i - (L - 1) / 2;
    const double q = 2.0 * std::numbers::pi * n / L;
    cosq[i] = std::cos(q);
    sinq[i] = std::sin(q);
  }

  auto rows = [&](std::size_t begin, std::size_t end) {
    CompensatedSum chunk;
    for (std::size_t r = begin; r < end; ++r) {
      const double eps_row = j.jx * cosq[r] + j.jz;
      const double del_row = j.jx * sinq[r];
      const double sin_row = sinq[r];
      // Kahan inside the row, Neumaier across rows.
      double sum = 0.0;
      double comp = 0.0;
      double min_den = INFINITY;
      for (int c = 0; c < L; ++c) {
        const double eps = eps_row + j.jy * cosq[c];
        const double del = del_row + j.jy * sinq[c];
        const double den = eps * eps + del * del;
        min_den = std::min(min_den, den);
        const double t = (sin_row + sinq[c]) / den;
        const double y = t * t - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
      }
      if (min_den < kKitaevPoleTol) {
        throw Error(ErrorKind::PoleOnGrid, "eps^2 + delta^2 vanishes on grid row " + std::to_string(r));
      }
      chunk.add(sum);
      chunk.add(-comp);
    }
    return chunk;
  };

  const double total = deterministic_reduce(static_cast<std::size_t>(L), kRowsPerChunk, options.workers, rows);
  return {total / 16.0, FsMethod::ClosedForm, std::nullopt, std::nullopt};
}

double kitaev_min_gap_squared(const KitaevCouplings& couplings) { return find_gap_minimum(couplings).value; }

KitaevPhase kitaev_phase(const KitaevCouplings& couplings) {
  validate_couplings(couplings, false);
  return kitaev_min_gap_squared(couplings) < kKitaevGaplessTol ? KitaevPhase::Gapless : KitaevPhase::Gapped;
}

KitaevIntegral kitaev_fs_integral(const KitaevCouplings& couplings, const QuadratureSpec& quadrature) {
  validate_couplings(couplings, false);
  if (kitaev_phase(couplings) == KitaevPhase::Gapless) {
    return {INFINITY, true, 0.0};
  }
  auto integrand = [&](double qx, double qy) {
    const Dispersion d = dispersion(qx, qy, couplings);
    const double t = (std::sin(qx) + std::sin(qy)) / (d.eps * d.eps + d.delta * d.delta);
    return t * t;
  };
  const double pi = std::numbers::pi;
  const double norm = 1.0 / (64.0 * pi * pi);
  // The integrand is periodic; centre the cell on the gap minimum, where it
  // peaks with width ~ sqrt(min gap^2), and panel geometrically from there.
  const GapMinimum m = find_gap_minimum(couplings);
  const double width = std::sqrt(m.value);
  const std::vector<double> xs = centred_panels(m.qx, width), ys = centred_panels(m.qy, width);
  const double cells = static_cast<double>((xs.size() - 1) * (ys.size() - 1));
  QuadratureSpec cell = quadrature;
  cell.abs_tol = quadrature.abs_tol / norm / cells;
  CompensatedSum value, error;
  for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
    for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
      const QuadratureResult r = integrate_2d(integrand, xs[a], xs[a + 1], ys[b], ys[b + 1], cell);
      value.add(r.value);
      error.add(r.error_estimate);
    }
  }
  return {value.value() * norm, false, error.value() * norm};
}

}  // namespace fidsus
