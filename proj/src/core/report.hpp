#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "energy.hpp"
#include "fields.hpp"
#include "solvers.hpp"

namespace varfrac {

using Json = nlohmann::ordered_json;

Json to_json(const Interval& i);
Json to_json(const Bounds& b);
Json to_json(const HypothesisReport& r);
Json to_json(const EnergyBreakdown& e);
Json to_json(const GeometryConstants& g);
Json to_json(const EmbeddingEstimate& e);
// The solution itself goes to CSV; the report carries its summary.
Json to_json(const SolverReport& r, bool with_history = true);
Json to_json(const SweepRecord& r);
Json to_json(const ProblemConfig& cfg);

// Profile CSV: header "node,value", one row per grid node (x, u(x)), 17
// significant digits so that reading back is exact.
void write_profile_csv(const std::filesystem::path& path, const GridFunction& u);
struct Profile {
    std::vector<double> x;
    std::vector<double> u;
};
Profile read_profile_csv(const std::filesystem::path& path);

// Sweep CSV: lambda,value1,value2,potential_mass1,potential_mass2,dist1,dist2,status.
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records);

// %.17g
std::string format_double(double v);

} // namespace varfrac
