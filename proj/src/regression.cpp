#include "fidsus/regression.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "fidsus/error.hpp"
#include "fidsus/summation.hpp"

namespace fidsus {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidParams, "x and y lengths differ");
  if (x.size() < 2) throw Error(ErrorKind::DegenerateFit, "need at least two points");
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
    throw Error(ErrorKind::DegenerateFit, "all abscissae are equal");
  }
}

double mean(std::span<const double> v) { return compensated_sum(v) / static_cast<double>(v.size()); }

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::DegenerateFit, "median of empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double line_r2(std::span<const double> x, std::span<const double> y, double slope, double intercept) {
  const double ym = mean(y);
  CompensatedSum ssr, sst;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ssr.add(r * r);
    sst.add((y[i] - ym) * (y[i] - ym));
  }
  if (sst.value() <= 0.0) return ssr.value() <= 0.0 ? 1.0 : 0.0;
  return std::clamp(1.0 - ssr.value() / sst.value(), 0.0, 1.0);
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const double xm = mean(x);
  const double ym = mean(y);
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - xm) * (x[i] - xm));
    sxy.add((x[i] - xm) * (y[i] - ym));
  }
  LinearFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = ym - fit.slope * xm;
  CompensatedSum ssr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr.add(r * r);
  }
  fit.ssr = ssr.value();
  fit.r2 = line_r2(x, y, fit.slope, fit.intercept);
  return fit;
}

LinearFit theil_sen(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  std::vector<double> slopes;
  slopes.reserve(x.size() * (x.size() - 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  LinearFit fit;
  fit.slope = median(std::move(slopes));
  std::vector<double> offsets(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) offsets[i] = y[i] - fit.slope * x[i];
  fit.intercept = median(std::move(offsets));
  CompensatedSum ssr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr.add(r * r);
  }
  fit.ssr = ssr.value();
  fit.r2 = line_r2(x, y, fit.slope, fit.intercept);
  return fit;
}

QuadraticFit quadratic_fit(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  if (x.size() < 3) throw Error(ErrorKind::DegenerateFit, "quadratic fit needs three points");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  QuadraticFit fit;
  fit.center = mean(x);
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = x[i] - fit.center;
    design(i, 0) = 1.0;
    design(i, 1) = z;
    design(i, 2) = z * z;
    rhs(i) = y[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw Error(ErrorKind::DegenerateFit, "quadratic design matrix is rank deficient");
  const Eigen::Vector3d coef = qr.solve(rhs);
  fit.c0 = coef(0);
  fit.c1 = coef(1);
  fit.c2 = coef(2);
  fit.ssr = (rhs - design * coef).squaredNorm();
  if (n > 3) {
    const double sigma2 = fit.ssr / static_cast<double>(n - 3);
    const Eigen::Matrix3d cov = (design.transpose() * design).inverse();
    fit.c2_stderr = std::sqrt(std::max(0.0, sigma2 * cov(2, 2)));
  }
  return fit;
}

}  // namespace fidsus
