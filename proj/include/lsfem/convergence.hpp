#pragma once

#include <optional>
#include <span>
#include <vector>

namespace lsfem {

/// log(e_i / e_{i+1}) / log(sqrt(N_{i+1} / N_i)), one entry per consecutive
/// pair; empty when either error is missing or non-positive.
std::vector<std::optional<double>> pairwise_orders(std::span<const double> dofs,
                                                   std::span<const std::optional<double>> errors);

/// -2 times the least-squares slope of log e against log N over the last
/// `window` points with an error value.
std::optional<double> fitted_order(std::span<const double> dofs,
                                   std::span<const std::optional<double>> errors, int window = 4);

}  // namespace lsfem
