#include "doseopt/fp_basis.hpp"

#include <Eigen/SVD>

#include "doseopt/errors.hpp"
#include <bit>
#include <cmath>
#include <stdexcept>

namespace doseopt {

const PowerTable& PowerTable::standard() {
  static const PowerTable table;
  return table;
}

double PowerTable::power(int idx) const {
  if (idx < 0 || idx >= 8) throw std::out_of_range("power index must be in [0, 8)");
  return powers_[idx];
}

ModelIndex ModelIndex::from_transforms(std::initializer_list<int> ks) {
  std::uint16_t bits = 0;
  for (int k : ks) {
    if (k < 1 || k > kNumTransforms)
      throw std::out_of_range("transform index must be in [1, 16]");
    bits |= static_cast<std::uint16_t>(1u << (k - 1));
  }
  return ModelIndex(bits);
}

bool ModelIndex::includes(int k) const {
  if (k < 1 || k > kNumTransforms)
    throw std::out_of_range("transform index must be in [1, 16]");
  return (bits_ >> (k - 1)) & 1u;
}

ModelIndex ModelIndex::with_flipped(int k) const {
  if (k < 1 || k > kNumTransforms)
    throw std::out_of_range("transform index must be in [1, 16]");
  return ModelIndex(static_cast<std::uint16_t>(bits_ ^ (1u << (k - 1))));
}

int ModelIndex::size() const { return std::popcount(bits_); }

std::vector<int> ModelIndex::active() const {
  std::vector<int> ks;
  ks.reserve(size());
  for (int k = 1; k <= kNumTransforms; ++k)
    if (includes(k)) ks.push_back(k);
  return ks;
}

bool ModelIndex::operator<(const ModelIndex& o) const {
  for (int k = 1; k <= kNumTransforms; ++k) {
    const unsigned a = (bits_ >> (k - 1)) & 1u;
    const unsigned b = (o.bits_ >> (k - 1)) & 1u;
    if (a != b) return a < b;
  }
  return false;
}

std::string transform_name(int k) {
  if (k < 1 || k > kNumTransforms)
    throw std::out_of_range("transform index must be in [1, 16]");
  static const char* base[8] = {"x^-2", "x^-1", "x^-0.5", "ln(x)",
                                "x^0.5", "x",    "x^2",    "x^3"};
  const int idx = (k - 1) % 8;
  if (k <= 8) return base[idx];
  if (idx == 3) return "ln(x)^2";
  return std::string(base[idx]) + "*ln(x)";
}

double transform(double x, int k) {
  if (k < 1 || k > kNumTransforms)
    throw std::out_of_range("transform index must be in [1, 16]");
  if (!(x > 0.0))
    throw std::domain_error(
        "transforms require dose > 0; shift doses by a positive constant first");
  const double p = PowerTable::standard().power((k - 1) % 8);
  double base;
  if (p == 0.0)
    base = std::log(x);
  else if (p == 1.0)
    base = x;
  else
    base = std::pow(x, p);
  return k <= 8 ? base : base * std::log(x);
}

DesignMatrix build_design(std::span<const double> doses, ModelIndex gamma,
                          double rcond_threshold) {
  const int n = static_cast<int>(doses.size());
  if (n == 0) throw std::invalid_argument("build_design needs at least one dose");
  const std::vector<int> ks = gamma.active();
  const int p = static_cast<int>(ks.size());

  DesignMatrix design;
  design.index = gamma;
  design.columns.resize(n, p);
  design.column_scales.resize(p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) design.columns(i, j) = transform(doses[i], ks[j]);
    double rms = std::sqrt(design.columns.col(j).squaredNorm() / n);
    if (!(rms > 0.0)) rms = 1.0;  // all-zero column, caught by the rank check
    design.column_scales[j] = rms;
    design.columns.col(j) /= rms;
  }

  design.rank_ok = true;
  if (p > 0) {
    // Conditioning of the centered columns; a column collinear with the
    // implicit intercept must fail here even though it looks fine raw.
    Eigen::MatrixXd centered = design.columns.rowwise() - design.columns.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smax > 0.0) || p > n - 1) {
      design.rank_ok = false;
    } else {
      const double rcond = (smin / smax) * (smin / smax);
      design.rank_ok = rcond >= rcond_threshold;
    }
  }
  return design;
}

Eigen::MatrixXd design_rows(std::span<const double> doses, ModelIndex gamma,
                            const Eigen::VectorXd& column_scales) {
  const std::vector<int> ks = gamma.active();
  const int p = static_cast<int>(ks.size());
  if (column_scales.size() != p)
    throw DimensionError("column_scales length does not match the model size");
  Eigen::MatrixXd rows(static_cast<int>(doses.size()), p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < static_cast<int>(doses.size()); ++i)
      rows(i, j) = transform(doses[i], ks[j]) / column_scales[j];
  }
  return rows;
}

}  // namespace doseopt
