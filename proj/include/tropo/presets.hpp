#pragma once

#include "tropo/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tropo::presets {

/// Parameter families behind the purity figures. Each curve is one (mu_p, mu) pair.
struct FigurePreset {
    std::string id;
    std::string description;
    model::TropoParams base;
    std::vector<double> mu_p_values;
    std::vector<double> mu_values;
    std::vector<double> omega_over_kappa;
};

/// Ids: 1a, 1b, 2, 3a, 3b. Throws InvalidParameter for anything else.
FigurePreset figure(std::string_view id);

std::vector<std::string> figure_ids();

std::vector<double> linear_grid(double lo, double hi, int n);

/// Log-spaced |omega| in [lo, hi], mirrored to negative values, with 0 in the middle.
std::vector<double> symmetric_log_grid(double lo, double hi, int per_side);

} // namespace tropo::presets
