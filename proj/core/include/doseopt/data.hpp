#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace doseopt {

enum class Family { gaussian, bernoulli };

const char* to_string(Family f);
Family family_from_string(std::string_view s);  // throws std::invalid_argument

// Observed doses and responses. Doses must be strictly positive (the basis
// transforms below need log and negative powers); Bernoulli responses must
// be exactly 0 or 1.
struct DoseResponseData {
  Eigen::VectorXd doses;
  Eigen::VectorXd responses;
  Family family = Family::gaussian;

  int n() const { return static_cast<int>(doses.size()); }
  int distinct_dose_count() const;
  void validate() const;  // throws std::invalid_argument on contract violation
};

// Uniform evaluation grid. values.front() == x_min and values.back() == x_max
// exactly; interior points are evenly spaced.
struct DoseGrid {
  double x_min = 0.4;
  double x_max = 30.0;
  int points = 512;
  std::vector<double> values;

  static DoseGrid uniform(double x_min = 0.4, double x_max = 30.0, int points = 512);
  double step() const;
};

}  // namespace doseopt
