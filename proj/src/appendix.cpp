#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covgame/harness.hpp"

namespace covgame {

namespace {

double log_choose(std::uint64_t d, std::uint64_t i) {
  const auto dd = static_cast<double>(d);
  const auto ii = static_cast<double>(i);
  return std::lgamma(dd + 1.0) - std::lgamma(ii + 1.0) - std::lgamma(dd - ii + 1.0);
}

}  // namespace

double appendix_sum(double a, double c, std::uint64_t d) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("appendix_sum: a must lie in (0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("appendix_sum: c must be positive");
  if (d == 0) return 0.0;
  const auto top = std::min<std::uint64_t>(d, static_cast<std::uint64_t>(std::floor(c)));
  const double la = std::log(a), lb = std::log1p(-a), ld = std::log(static_cast<double>(d));
  // log-sum-exp over the terms.
  std::vector<double> logs;
  for (std::uint64_t i = 0; i <= top; ++i)
    logs.push_back(ld + log_choose(d, i) + static_cast<double>(d - i) * lb + static_cast<double>(i) * la);
  const double peak = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - peak);
  return std::exp(peak) * acc;
}

std::vector<AppendixRow> check_appendix_bound(const std::vector<double>& a_list, const std::vector<double>& c_list,
                                              std::uint64_t d_max) {
  std::vector<AppendixRow> out;
  for (double a : a_list) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("check-appendix: every a must lie in (0, 1)");
    for (double c : c_list) {
      if (!(c > 0.0)) throw std::invalid_argument("check-appendix: every c must be positive");
      if (static_cast<double>(d_max) < c) throw std::invalid_argument("check-appendix: d-max must be at least max c");
      AppendixRow row;
      row.a = a;
      row.c = c;
      row.d_min = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(c)));
      row.d_max = d_max;
      const double denom = std::ceil(c);
      std::vector<double> ratio;
      for (std::uint64_t d = row.d_min; d <= d_max; ++d) ratio.push_back(appendix_sum(a, c, d) / denom);
      const auto it = std::max_element(ratio.begin(), ratio.end());
      row.max_ratio = *it;
      row.argmax_d = row.d_min + static_cast<std::uint64_t>(it - ratio.begin());
      row.finite = std::all_of(ratio.begin(), ratio.end(), [](double r) { return std::isfinite(r); });
      row.interior = row.argmax_d < d_max;
      // Non-increasing past the peak, up to rounding in the last bits.
      row.decreasing_after_peak = true;
      for (auto k = static_cast<std::size_t>(it - ratio.begin()) + 1; k < ratio.size(); ++k)
        if (ratio[k] > ratio[k - 1] * (1.0 + 1e-12) + 1e-300) row.decreasing_after_peak = false;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace covgame
