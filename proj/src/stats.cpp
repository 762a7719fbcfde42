#include "hubbard_witness/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace hw {

std::vector<std::vector<double>> bin_rows(const std::vector<std::vector<double>>& rows,
                                          std::size_t bin_size) {
  if (bin_size == 0) throw std::invalid_argument("bin size must be positive");
  std::vector<std::vector<double>> bins;
  const std::size_t n_bins = rows.size() / bin_size;
  for (std::size_t b = 0; b < n_bins; ++b) {
    std::vector<double> acc(rows[b * bin_size].size(), 0.0);
    for (std::size_t r = b * bin_size; r < (b + 1) * bin_size; ++r) {
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += rows[r][c];
    }
    for (double& v : acc) v /= static_cast<double>(bin_size);
    bins.push_back(std::move(acc));
  }
  return bins;
}

Estimate jackknife(const std::vector<std::vector<double>>& bins,
                   const std::function<double(std::span<const double>)>& f) {
  if (bins.empty()) throw std::invalid_argument("jackknife needs at least one bin");
  const std::size_t n = bins.size();
  const std::size_t cols = bins.front().size();
  std::vector<double> total(cols, 0.0);
  for (const auto& b : bins) {
    if (b.size() != cols) throw std::invalid_argument("ragged bins");
    for (std::size_t c = 0; c < cols; ++c) total[c] += b[c];
  }
  std::vector<double> full(cols);
  for (std::size_t c = 0; c < cols; ++c) full[c] = total[c] / static_cast<double>(n);

  Estimate est;
  est.mean = f(full);
  if (n < 2) return est;

  std::vector<double> reduced(cols);
  std::vector<double> values(n);
  double avg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < cols; ++c) {
      reduced[c] = (total[c] - bins[i][c]) / static_cast<double>(n - 1);
    }
    values[i] = f(reduced);
    avg += values[i];
  }
  avg /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - avg) * (v - avg);
  est.error = std::sqrt(var * static_cast<double>(n - 1) / static_cast<double>(n));
  return est;
}

Estimate jackknife_mean(const std::vector<std::vector<double>>& bins, std::size_t column) {
  return jackknife(bins, [column](std::span<const double> m) { return m[column]; });
}

}  // namespace hw
