#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpcann/discovery.hpp"

namespace lpcann::cli {

using nlohmann::json;

json to_json(const ParamVector& p);
json to_json(const LossBreakdown& l);
json to_json(const ModeR2& r2);
json to_json(const PenaltyConfig& c);
json to_json(const AdamConfig& c);
json to_json(const FitResult& r);
json to_json(const SubsetReport& r, ModelFamily family, double alpha);
json to_json(const WeightStats& s);
json to_json(const SweepCell& c);

/// Per-term stress curves at the dataset's control values.
json stress_curves(const ParamVector& p, const Dataset& d);

std::string utc_timestamp();

std::string sweep_csv(const std::vector<SweepCell>& cells);
std::string subset_csv(const std::vector<SubsetReport>& rows, ModelFamily family, double alpha, double bold_tol);
std::string landscape_csv(const LandscapeGrid& g);

std::string landscape_svg(const LandscapeGrid& g);
std::string sweep_svg(const std::vector<SweepCell>& cells, ModelFamily family);

}  // namespace lpcann::cli
