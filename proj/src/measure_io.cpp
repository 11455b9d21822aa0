#include "theta_extremal/measure_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace theta_extremal {

Json measure_to_json(const DiscreteMeasure &measure) {
  Json doc;
  doc["n"] = measure.dimension().value();
  Json points = Json::array();
  for (Eigen::Index i = 0; i < measure.points().rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < measure.points().cols(); ++j) {
      row.push_back(measure.points()(i, j));
    }
    points.push_back(std::move(row));
  }
  doc["points"] = std::move(points);
  Json weights = Json::array();
  for (double w : measure.weights()) {
    weights.push_back(w);
  }
  doc["weights"] = std::move(weights);
  return doc;
}

DiscreteMeasure measure_from_json(const nlohmann::json &doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("measure: top level must be an object");
  }
  for (const char *key : {"n", "points", "weights"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("measure: missing key \"") + key + "\"");
    }
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<int>() < 1) {
    throw std::invalid_argument("measure: \"n\" must be a positive integer");
  }
  const int n = doc["n"].get<int>();
  const auto &points = doc["points"];
  const auto &weights = doc["weights"];
  if (!points.is_array() || !weights.is_array() || points.size() != weights.size() ||
      points.empty()) {
    throw std::invalid_argument(
        "measure: \"points\" and \"weights\" must be non-empty arrays of equal length");
  }
  PointSet pts(static_cast<Eigen::Index>(points.size()), n + 1);
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto &row = points[i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n + 1)) {
      throw std::invalid_argument("measure: point " + std::to_string(i) + " must have " +
                                  std::to_string(n + 1) + " coordinates");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        throw std::invalid_argument("measure: non-numeric coordinate");
      }
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
    if (!weights[i].is_number()) {
      throw std::invalid_argument("measure: non-numeric weight");
    }
    w[static_cast<Eigen::Index>(i)] = weights[i].get<double>();
  }
  // Exact inputs pass through untouched, so serialization round-trips bit-exactly.
  try {
    return DiscreteMeasure(pts, w);
  } catch (const std::invalid_argument &) {
    return DiscreteMeasure::normalized(std::move(pts), std::move(w));
  }
}

DiscreteMeasure read_measure_file(const std::filesystem::path &path) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument("cannot open measure file " + path.string());
  }
  nlohmann::json doc;
  try {
    f >> doc;
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument("malformed measure file " + path.string() + ": " +
                                e.what());
  }
  return measure_from_json(doc);
}

void write_measure_file(const std::filesystem::path &path,
                        const DiscreteMeasure &measure) {
  write_file_atomic(path, dump_json(measure_to_json(measure)));
}

} // namespace theta_extremal
