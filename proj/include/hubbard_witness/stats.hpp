#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hw {

struct Estimate {
  double mean = 0.0;
  double error = 0.0;
};

/// Means of consecutive blocks of `bin_size` rows. Each row is one
/// measurement of several observables; trailing rows that do not fill a
/// bin are dropped.
std::vector<std::vector<double>> bin_rows(const std::vector<std::vector<double>>& rows,
                                          std::size_t bin_size);

/// Leave-one-bin-out jackknife of a (possibly nonlinear) function of the
/// column means. The mean is the function of the full-sample means.
Estimate jackknife(const std::vector<std::vector<double>>& bins,
                   const std::function<double(std::span<const double>)>& f);

/// Jackknife of a single column's mean.
Estimate jackknife_mean(const std::vector<std::vector<double>>& bins, std::size_t column);

}  // namespace hw
