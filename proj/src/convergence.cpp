#include "lsfem/convergence.hpp"

#include <cmath>

#include "lsfem/error.hpp"

namespace lsfem {

namespace {

bool usable(const std::optional<double>& e) { return e && *e > 0.0 && std::isfinite(*e); }

}  // namespace

std::vector<std::optional<double>> pairwise_orders(std::span<const double> dofs,
                                                   std::span<const std::optional<double>> errors) {
  if (dofs.size() != errors.size()) throw Error("pairwise_orders: length mismatch");
  std::vector<std::optional<double>> out;
  for (std::size_t i = 0; i + 1 < dofs.size(); ++i) {
    if (usable(errors[i]) && usable(errors[i + 1]) && dofs[i + 1] > dofs[i] && dofs[i] > 0.0) {
      out.push_back(std::log(*errors[i] / *errors[i + 1]) / (0.5 * std::log(dofs[i + 1] / dofs[i])));
    } else {
      out.emplace_back();
    }
  }
  return out;
}

std::optional<double> fitted_order(std::span<const double> dofs,
                                   std::span<const std::optional<double>> errors, int window) {
  if (dofs.size() != errors.size()) throw Error("fitted_order: length mismatch");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = dofs.size(); i-- > 0 && static_cast<int>(pts.size()) < window;) {
    if (usable(errors[i]) && dofs[i] > 0.0) pts.emplace_back(std::log(dofs[i]), std::log(*errors[i]));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return -2.0 * sxy / sxx;
}

}  // namespace lsfem
