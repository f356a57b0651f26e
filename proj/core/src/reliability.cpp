// SPDX-License-Identifier: Apache-2.0
#include "letgames/reliability.hpp"

#include <algorithm>
#include <map>

#include "letgames/error.hpp"

namespace letgames {

namespace {

double delta(double a, double b, MeasurementLevel level) {
  if (level == MeasurementLevel::nominal) return a == b ? 0.0 : 1.0;
  return (a - b) * (a - b);
}

}  // namespace

AgreementResult krippendorff_alpha(const std::vector<std::vector<std::optional<double>>>& ratings,
                                   MeasurementLevel level) {
  if (ratings.size() < 2) throw Error(ErrorCode::invalid_argument, "alpha needs at least two raters");
  std::size_t items = 0;
  for (const auto& row : ratings) items = std::max(items, row.size());

  // Coincidence matrix o[c][k] over the distinct values.
  std::map<double, std::map<double, double>> o;
  double n = 0.0;
  for (std::size_t u = 0; u < items; ++u) {
    std::vector<double> values;
    for (const auto& row : ratings) {
      if (u < row.size() && row[u]) values.push_back(*row[u]);
    }
    const auto m = values.size();
    if (m < 2) continue;
    n += static_cast<double>(m);
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j) o[values[i]][values[j]] += w;
      }
    }
  }
  if (n < 2.0) throw Error(ErrorCode::invalid_argument, "alpha needs at least one item rated by two raters");

  std::map<double, double> marginal;
  for (const auto& [c, row] : o) {
    for (const auto& [k, v] : row) marginal[c] += v;
  }
  double observed = 0.0;
  for (const auto& [c, row] : o) {
    for (const auto& [k, v] : row) observed += v * delta(c, k, level);
  }
  observed /= n;
  double expected = 0.0;
  for (const auto& [c, nc] : marginal) {
    for (const auto& [k, nk] : marginal) expected += nc * nk * delta(c, k, level);
  }
  expected /= n * (n - 1.0);
  if (expected == 0.0) return {1.0, true};
  return {1.0 - observed / expected, false};
}

AgreementResult cohen_kappa(const std::vector<std::string>& r1, const std::vector<std::string>& r2) {
  if (r1.empty() || r1.size() != r2.size()) {
    throw Error(ErrorCode::invalid_argument, "kappa needs two non-empty rating vectors of equal length");
  }
  const double n = static_cast<double>(r1.size());
  std::map<std::string, double> c1;
  std::map<std::string, double> c2;
  double agree = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    c1[r1[i]] += 1.0;
    c2[r2[i]] += 1.0;
    if (r1[i] == r2[i]) agree += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [c, k] : c1) {
    auto it = c2.find(c);
    if (it != c2.end()) pe += (k / n) * (it->second / n);
  }
  if (pe >= 1.0) return {1.0, true};
  return {(po - pe) / (1.0 - pe), false};
}

}  // namespace letgames
