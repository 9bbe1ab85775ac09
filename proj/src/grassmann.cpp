#include "kptau/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "kptau/error.hpp"

namespace kptau {

FiniteFrame::FiniteFrame(Matrix rows, int charge, bool check_rank)
    : m_(std::move(rows)), charge_(charge) {
  if (charge_ < 1) throw InvalidArgument("frame charge must be >= 1");
  if (m_.cols() != charge_)
    throw InvalidArgument("frame must have exactly N columns");
  if (m_.rows() < charge_) throw InvalidArgument("frame depth R must be >= N");
  if (!m_.allFinite()) throw InvalidArgument("frame entries must be finite");
  if (check_rank) {
    Eigen::JacobiSVD<Matrix> svd(m_);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) < 1e-10 * s(0))
      throw InvalidArgument("frame columns are (numerically) dependent");
  }
}

FiniteFrame FiniteFrame::identity(int charge, int depth) {
  Matrix m = Matrix::Zero(depth, charge);
  for (int k = 1; k <= charge; ++k) m(charge - k, k - 1) = 1.0;
  return FiniteFrame(std::move(m), charge);
}

FiniteFrame FiniteFrame::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("frame JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("charge") || !j.contains("rows") ||
      !j["rows"].is_object())
    throw InvalidArgument("frame JSON needs {\"charge\": N, \"rows\": {...}}");
  const int n = j["charge"].get<int>();
  int depth = n;
  std::vector<std::pair<int, std::vector<double>>> rows;
  for (const auto& [key, value] : j["rows"].items()) {
    const int label = std::stoi(key);
    if (label < 0) throw WindowError("frame JSON: row labels must be >= 0");
    auto entries = value.get<std::vector<double>>();
    if (static_cast<int>(entries.size()) != n)
      throw InvalidArgument("frame JSON: row " + key + " must have N entries");
    depth = std::max(depth, label + 1);
    rows.emplace_back(label, std::move(entries));
  }
  Matrix m = Matrix::Zero(depth, n);
  for (const auto& [label, entries] : rows)
    for (int c = 0; c < n; ++c) m(label, c) = entries[static_cast<std::size_t>(c)];
  return FiniteFrame(std::move(m), n);
}

double FiniteFrame::minor(const std::vector<int>& labels) const {
  const int n = charge_;
  if (static_cast<int>(labels.size()) != n)
    throw InvalidArgument("minor needs exactly N row labels");
  Matrix sub(n, n);
  for (int r = 0; r < n; ++r) {
    const int label = labels[static_cast<std::size_t>(r)];
    if (label < 0 || label >= depth())
      throw WindowError("row label " + std::to_string(label) +
                        " outside frame window [0, " + std::to_string(depth() - 1) + "]");
    sub.row(r) = m_.row(label);
  }
  return det(sub);
}

FiniteFrame FiniteFrame::scaled_rows(const RhoSequence& rho) const {
  Matrix m = m_;
  for (int r = 0; r < depth(); ++r) m.row(r) *= rho.rho(r);
  return FiniteFrame(std::move(m), charge_, false);
}

std::vector<int> partition_labels(const Partition& lambda, int charge) {
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(charge));
  for (int j = 1; j <= charge; ++j) labels.push_back(lambda.site(j, charge));
  return labels;
}

double plucker_coord(const FiniteFrame& w, const Partition& lambda) {
  if (lambda.length() > w.charge())
    throw WindowError("partition " + lambda.to_string() +
                      " is longer than the frame charge");
  return w.minor(partition_labels(lambda, w.charge()));
}

PartitionMap<double> coeffs_from_frame(const FiniteFrame& w, int cutoff) {
  if (cutoff + w.charge() > w.depth())
    throw WindowError("frame depth " + std::to_string(w.depth()) +
                      " too shallow for cutoff " + std::to_string(cutoff));
  PartitionMap<double> out;
  for (const auto& lambda : enumerate_partitions(cutoff, w.charge()))
    out.emplace(lambda, plucker_coord(w, lambda));
  return out;
}

double table_minor(const PartitionMap<double>& coeffs, int charge, int cutoff,
                   const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != charge)
    throw InvalidArgument("minor needs exactly N row labels");
  std::vector<int> sorted = labels;
  // Bubble sort to decreasing order, tracking the permutation sign.
  int sign = 1;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j)
      if (sorted[j] < sorted[j + 1]) {
        std::swap(sorted[j], sorted[j + 1]);
        sign = -sign;
      }
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j)
    if (sorted[j] == sorted[j + 1]) return 0.0;
  if (!sorted.empty() && sorted.back() < 0)
    throw WindowError("row labels must be >= 0");
  std::vector<int> parts;
  for (int j = 1; j <= charge; ++j)
    parts.push_back(sorted[static_cast<std::size_t>(j - 1)] + j - charge);
  const Partition lambda(std::move(parts));
  auto it = coeffs.find(lambda);
  if (it == coeffs.end()) {
    if (lambda.weight() <= cutoff) return 0.0;
    throw WindowError("partition " + lambda.to_string() +
                      " not present in the coefficient table");
  }
  return sign * it->second;
}

PluckerResidual plucker_residual(const MinorFunction& minor,
                                 const std::vector<int>& rows_a,
                                 const std::vector<int>& rows_b) {
  if (rows_b.size() != rows_a.size() + 2)
    throw InvalidArgument("exchange relation needs |rows_b| = |rows_a| + 2");
  if (std::set<int>(rows_a.begin(), rows_a.end()).size() != rows_a.size() ||
      std::set<int>(rows_b.begin(), rows_b.end()).size() != rows_b.size())
    throw InvalidArgument("exchange relation labels must be distinct");
  PluckerResidual out;
  for (std::size_t k = 0; k < rows_b.size(); ++k) {
    std::vector<int> left = rows_a;
    left.push_back(rows_b[k]);
    std::vector<int> right;
    for (std::size_t m = 0; m < rows_b.size(); ++m)
      if (m != k) right.push_back(rows_b[m]);
    const double term = minor(left) * minor(right);
    out.residual += (k % 2 == 0 ? term : -term);
    out.scale += std::abs(term);
  }
  return out;
}

PluckerResidual plucker_residual(const FiniteFrame& w,
                                 const std::vector<int>& rows_a,
                                 const std::vector<int>& rows_b) {
  return plucker_residual(
      [&w](const std::vector<int>& labels) { return w.minor(labels); }, rows_a,
      rows_b);
}

PluckerResidual plucker_residual(const PartitionMap<double>& coeffs, int charge,
                                 int cutoff, const std::vector<int>& rows_a,
                                 const std::vector<int>& rows_b) {
  return plucker_residual(
      [&coeffs, charge, cutoff](const std::vector<int>& labels) {
        return table_minor(coeffs, charge, cutoff, labels);
      },
      rows_a, rows_b);
}

}  // namespace kptau
