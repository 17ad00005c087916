#pragma once

#include <string>
#include <vector>

#include "prdim/local_dim.hpp"
#include "prdim/sweep.hpp"

namespace prdim {

// Line-plus-error-bar panels in plain SVG 1.1: estimate against sample
// size (log axis) with one line per correction, or mean local gamma
// against ball radius. Error bars are standard deviations (across
// repetitions, or across valid centers); invalid estimates become gaps.
void emit_plot(const SweepResult& result, const std::string& path);
void emit_plot(const std::vector<LocalDimResult>& results, const std::string& path);

}  // namespace prdim
