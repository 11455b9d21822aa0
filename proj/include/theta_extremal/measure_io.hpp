#pragma once

#include "theta_extremal/measure.hpp"
#include "theta_extremal/report.hpp"

#include <filesystem>

namespace theta_extremal {

/// {"n": int, "points": [[x_0, ..., x_n], ...], "weights": [...]}
Json measure_to_json(const DiscreteMeasure &measure);

/// Strict parse of the shape above. Throws std::invalid_argument on any
/// structural problem; points/weights are renormalized within 1e-6.
DiscreteMeasure measure_from_json(const nlohmann::json &doc);

DiscreteMeasure read_measure_file(const std::filesystem::path &path);
void write_measure_file(const std::filesystem::path &path,
                        const DiscreteMeasure &measure);

} // namespace theta_extremal
