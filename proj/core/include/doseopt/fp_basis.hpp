#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace doseopt {

// Canonical exponent ladder. Exponent 0 stands for ln(x), not x^0.
class PowerTable {
 public:
  static const PowerTable& standard();
  double power(int idx) const;  // idx in [0, 8)
  std::span<const double, 8> powers() const { return powers_; }

 private:
  PowerTable() : powers_{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0} {}
  std::array<double, 8> powers_;
};

inline constexpr int kNumTransforms = 16;
inline constexpr double kDefaultRcondThreshold = 1e-10;

// Inclusion mask over the 16 basis transforms. Bit k (1-based) selects
// transform k: k in 1..8 is x^{p_k}, k in 9..16 is x^{p_{k-8}} * ln(x).
// Ordering comparisons are lexicographic over the bit sequence (bit 1 first,
// 0 before 1), which gives enumeration and tie-breaking a fixed total order.
class ModelIndex {
 public:
  ModelIndex() = default;
  explicit ModelIndex(std::uint16_t bits) : bits_(bits) {}
  static ModelIndex from_transforms(std::initializer_list<int> ks);

  bool includes(int k) const;              // k in 1..16
  ModelIndex with_flipped(int k) const;
  int size() const;                        // number of active transforms
  std::uint16_t bits() const { return bits_; }
  std::vector<int> active() const;         // ascending k

  bool operator==(const ModelIndex& o) const { return bits_ == o.bits_; }
  bool operator!=(const ModelIndex& o) const { return bits_ != o.bits_; }
  bool operator<(const ModelIndex& o) const;
  bool operator>(const ModelIndex& o) const { return o < *this; }

 private:
  std::uint16_t bits_ = 0;
};

// Human-readable name of transform k, e.g. "x^-2", "ln(x)", "x^2*ln(x)".
std::string transform_name(int k);

// Transform k applied at dose x. Throws std::domain_error for x <= 0 with a
// hint to shift doses by a positive constant first.
double transform(double x, int k);

// Columns ordered by ascending k, each divided by its root-mean-square so
// downstream shrinkage acts on comparable scales. rank_ok reflects the
// conditioning of the centered columns (the intercept is implicit
// everywhere), via the squared singular-value ratio against the threshold.
struct DesignMatrix {
  Eigen::MatrixXd columns;        // n x p, unit RMS
  Eigen::VectorXd column_scales;  // p, original column RMS
  ModelIndex index;
  bool rank_ok = true;
};

DesignMatrix build_design(std::span<const double> doses, ModelIndex gamma,
                          double rcond_threshold = kDefaultRcondThreshold);

// Rows for new doses under a trained design's scaling. No rank check.
Eigen::MatrixXd design_rows(std::span<const double> doses, ModelIndex gamma,
                            const Eigen::VectorXd& column_scales);

}  // namespace doseopt
