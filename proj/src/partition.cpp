#include "kptau/partition.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "kptau/error.hpp"

namespace kptau {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    if (parts_[k] < 1)
      throw InvalidArgument("partition parts must be positive");
    if (k > 0 && parts_[k] > parts_[k - 1])
      throw InvalidArgument("partition parts must be weakly decreasing");
  }
  weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::string Partition::to_string() const {
  if (parts_.empty()) return "()";
  std::string out;
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(parts_[k]);
  }
  return out;
}

Partition Partition::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '(')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == ')')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::vector<int> parts;
  if (text.empty()) return Partition{};
  while (!text.empty()) {
    auto comma = text.find(',');
    auto token = trim(text.substr(0, comma));
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw InvalidArgument("cannot parse partition part '" +
                            std::string(token) + "'");
    parts.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Partition(std::move(parts));
}

namespace {

void append_partitions(int remaining, int max_part, int max_length,
                       std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (static_cast<int>(prefix.size()) == max_length) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    prefix.push_back(p);
    append_partitions(remaining - p, p, max_length, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int max_weight, int max_length) {
  if (max_weight > kMaxEnumerationWeight)
    throw CapacityError("enumerate_partitions: max_weight " +
                        std::to_string(max_weight) + " exceeds guard " +
                        std::to_string(kMaxEnumerationWeight));
  std::vector<Partition> out;
  std::vector<int> prefix;
  for (int w = 0; w <= max_weight; ++w)
    append_partitions(w, w, std::max(max_length, 0), prefix, out);
  return out;
}

Partition conjugate(const Partition& lambda) {
  std::vector<int> parts(static_cast<std::size_t>(lambda.part(1)), 0);
  for (int row : lambda.parts())
    for (int j = 0; j < row; ++j) ++parts[static_cast<std::size_t>(j)];
  return Partition(std::move(parts));
}

FrobeniusCoords to_frobenius(const Partition& lambda) {
  const Partition conj = conjugate(lambda);
  FrobeniusCoords c;
  for (int i = 1; lambda.part(i) >= i; ++i) {
    c.alpha.push_back(lambda.part(i) - i);
    c.beta.push_back(conj.part(i) - i);
  }
  return c;
}

Partition from_frobenius(const FrobeniusCoords& coords) {
  const int k = coords.rank();
  if (static_cast<int>(coords.beta.size()) != k)
    throw InvalidArgument("Frobenius coordinates: arm and leg counts differ");
  for (int i = 0; i < k; ++i) {
    if (coords.alpha[i] < 0 || coords.beta[i] < 0)
      throw InvalidArgument("Frobenius coordinates must be nonnegative");
    if (i > 0 && (coords.alpha[i] >= coords.alpha[i - 1] ||
                  coords.beta[i] >= coords.beta[i - 1]))
      throw InvalidArgument("Frobenius coordinates must strictly decrease");
  }
  std::vector<int> parts;
  for (int i = 1; i <= k; ++i) parts.push_back(coords.alpha[i - 1] + i);
  // Rows below the diagonal only meet the first k columns; column j has
  // length beta_j + j.
  const int depth = k > 0 ? coords.beta[0] + 1 : 0;
  for (int i = k + 1; i <= depth; ++i) {
    int row = 0;
    for (int j = 1; j <= k; ++j)
      if (coords.beta[j - 1] + j >= i) ++row;
    parts.push_back(row);
  }
  return Partition(std::move(parts));
}

int hook_length(const Partition& lambda, int i, int j) {
  int below = 0;
  for (int r = i + 1; lambda.part(r) >= j; ++r) ++below;
  return lambda.part(i) - j + below + 1;
}

double pochhammer_ext(double n, const Partition& lambda) {
  double prod = 1.0;
  for (int i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda.part(i); ++j) prod *= n - i + j;
  return prod;
}

double dimension_glN(const Partition& lambda, int n) {
  if (lambda.length() > n) return 0.0;
  double prod = 1.0;
  for (int i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda.part(i); ++j)
      prod *= static_cast<double>(n + j - i) / hook_length(lambda, i, j);
  return prod;
}

}  // namespace kptau
