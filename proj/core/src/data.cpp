#include "doseopt/data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace doseopt {

const char* to_string(Family f) {
  return f == Family::gaussian ? "gaussian" : "bernoulli";
}

Family family_from_string(std::string_view s) {
  if (s == "gaussian") return Family::gaussian;
  if (s == "bernoulli") return Family::bernoulli;
  throw std::invalid_argument("unknown family '" + std::string(s) +
                              "' (expected gaussian or bernoulli)");
}

int DoseResponseData::distinct_dose_count() const {
  std::vector<double> d(doses.data(), doses.data() + doses.size());
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return static_cast<int>(d.size());
}

void DoseResponseData::validate() const {
  if (doses.size() != responses.size())
    throw std::invalid_argument("doses and responses differ in length");
  if (doses.size() == 0) throw std::invalid_argument("empty dataset");
  for (Eigen::Index i = 0; i < doses.size(); ++i) {
    if (!std::isfinite(doses[i]) || doses[i] <= 0.0)
      throw std::invalid_argument(
          "dose at row " + std::to_string(i + 1) +
          " is not strictly positive; shift doses by a positive constant before fitting");
    if (!std::isfinite(responses[i]))
      throw std::invalid_argument("response at row " + std::to_string(i + 1) +
                                  " is not finite");
    if (family == Family::bernoulli && responses[i] != 0.0 && responses[i] != 1.0)
      throw std::invalid_argument("response at row " + std::to_string(i + 1) +
                                  " must be exactly 0 or 1 for the bernoulli family");
  }
}

DoseGrid DoseGrid::uniform(double x_min, double x_max, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  if (!(x_min > 0.0) || !std::isfinite(x_max) || x_max < x_min)
    throw std::invalid_argument("grid bounds must satisfy 0 < x_min <= x_max");
  if (points == 1 && x_max != x_min)
    throw std::invalid_argument("a one-point grid cannot span distinct bounds");
  DoseGrid grid;
  grid.x_min = x_min;
  grid.x_max = x_max;
  grid.points = points;
  grid.values.resize(points);
  if (points == 1) {
    grid.values[0] = x_min;
    return grid;
  }
  const double h = (x_max - x_min) / (points - 1);
  for (int i = 0; i < points; ++i) grid.values[i] = x_min + h * i;
  grid.values.front() = x_min;
  grid.values.back() = x_max;  // no accumulated rounding at the ends
  return grid;
}

double DoseGrid::step() const {
  return points > 1 ? (x_max - x_min) / (points - 1) : 0.0;
}

}  // namespace doseopt
