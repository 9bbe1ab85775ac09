#include "kptau/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "json.hpp"
#include "kptau/error.hpp"

namespace kptau {

namespace {

constexpr double kUnitarityTolerance = 1e-12;
constexpr double kKronrodTolerance = 1e-12;
constexpr unsigned kKronrodDepth = 15;

HermiteRule build_hermite(int n) {
  // Newton iteration on the orthonormal Hermite recurrence, with the
  // classical asymptotic starting guesses for the largest roots.
  constexpr double kPiM4 = 0.7511255444649425;  // pi^{-1/4}
  constexpr int kMaxIt = 100;
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    for (int it = 0; it < kMaxIt; ++it) {
      double p1 = kPiM4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(m - 1)] = 0.0;
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return {std::move(x), std::move(w)};
}

// Sum of w_k g(x_k) over a symmetric rule, pairing +x and -x before adding so
// odd integrands cancel exactly. Outer nodes first.
double symmetric_sum(const HermiteRule& r, double scale, const Integrand1& g) {
  const std::size_t n = r.nodes.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double x = r.nodes[n - 1 - k] * scale;
    sum += r.weights[n - 1 - k] * (g(x) + g(-x));
  }
  if (n % 2 == 1) sum += r.weights[n / 2] * g(0.0);
  return sum;
}

double hermite_1d(double sigma, int n, const Integrand1& f) {
  const double s = 1.0 / std::sqrt(sigma);
  return s * symmetric_sum(hermite_rule(n), s, f);
}

double sum_rule(const Rule2& r, const Integrand2& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k < r.w.size(); ++k) sum += r.w[k] * f(r.x[k], r.y[k]);
  return sum;
}

int hermite_order(int degree_hint) {
  return std::max(kDefaultHermiteNodes, (degree_hint + 2) / 2);
}

}  // namespace

MeasureSpec MeasureSpec::gauss(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("gauss measure needs sigma > 0");
  MeasureSpec m;
  m.kind_ = MeasureKind::gauss;
  m.sigma_ = sigma;
  m.lo_ = -std::numeric_limits<double>::infinity();
  m.hi_ = std::numeric_limits<double>::infinity();
  return m;
}

MeasureSpec MeasureSpec::table(std::vector<double> nodes, std::vector<double> weights) {
  if (nodes.empty() || nodes.size() != weights.size())
    throw InvalidArgument("weight table needs equally many nodes and weights");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!std::isfinite(nodes[k]) || !std::isfinite(weights[k]))
      throw InvalidArgument("weight table entries must be finite");
    if (!(weights[k] > 0.0)) throw InvalidArgument("weight table weights must be positive");
    if (k > 0 && !(nodes[k] > nodes[k - 1]))
      throw InvalidArgument("weight table nodes must be strictly increasing");
  }
  MeasureSpec m;
  m.kind_ = MeasureKind::table;
  m.lo_ = nodes.front();
  m.hi_ = nodes.back();
  m.nodes_ = std::move(nodes);
  m.weights_ = std::move(weights);
  return m;
}

MeasureSpec MeasureSpec::table_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("measure JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j.contains("weights"))
    throw InvalidArgument("measure JSON needs \"nodes\" and \"weights\" arrays");
  return table(j["nodes"].get<std::vector<double>>(), j["weights"].get<std::vector<double>>());
}

MeasureSpec MeasureSpec::density(Integrand1 rho, double lo, double hi, std::string name) {
  if (!(lo < hi)) throw InvalidArgument("density support needs lo < hi");
  MeasureSpec m;
  m.kind_ = MeasureKind::density;
  m.lo_ = lo;
  m.hi_ = hi;
  m.density_ = std::make_shared<const Integrand1>(std::move(rho));
  m.name_ = std::move(name);
  return m;
}

std::string MeasureSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case MeasureKind::gauss:
      os << "gauss:sigma=" << sigma_;
      break;
    case MeasureKind::table:
      os << "table:nodes=" << nodes_.size();
      break;
    case MeasureKind::density:
      os << "density:" << name_ << "[" << lo_ << "," << hi_ << "]";
      break;
  }
  return os.str();
}

Rule2 gauss_pair_rule(double s1, double s2, double c, int n) {
  const double det_q = 4.0 * s1 * s2 - c * c;
  if (!(s1 > 0.0) || !(s2 > 0.0) || !(det_q > 0.0))
    throw DivergenceError("Gaussian pair weight is not integrable: 4 s1 s2 <= c^2");
  // Q = [[2 s1, -c], [-c, 2 s2]] = L L^T; v = L^{-T} sqrt(2) s turns the
  // weight into e^{-|s|^2} with Jacobian 2 / sqrt(det Q).
  const double l11 = std::sqrt(2.0 * s1);
  const double l21 = -c / l11;
  const double l22 = std::sqrt(2.0 * s2 - l21 * l21);
  const double jac = 2.0 / std::sqrt(det_q);
  const auto& r = hermite_rule(n);
  const std::size_t m = r.nodes.size();
  Rule2 out;
  out.x.reserve(m * m);
  out.y.reserve(m * m);
  out.w.reserve(m * m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      const double y = std::numbers::sqrt2 * r.nodes[l] / l22;
      out.x.push_back((std::numbers::sqrt2 * r.nodes[k] - l21 * y) / l11);
      out.y.push_back(y);
      out.w.push_back(jac * r.weights[k] * r.weights[l]);
    }
  return out;
}

const HermiteRule& hermite_rule(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Hermite order must be >= 1");
  static std::mutex mutex;
  static std::map<int, HermiteRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_hermite(n)).first;
  return it->second;
}

QuadResult quad1d(const MeasureSpec& m, const Integrand1& f, int degree_hint) {
  switch (m.kind()) {
    case MeasureKind::gauss: {
      const int n = hermite_order(degree_hint);
      const double coarse = hermite_1d(m.sigma(), n, f);
      const double fine = hermite_1d(m.sigma(), 2 * n, f);
      return {coarse, std::abs(fine - coarse)};
    }
    case MeasureKind::table: {
      double sum = 0.0;
      for (std::size_t k = 0; k < m.nodes().size(); ++k) sum += m.weights()[k] * f(m.nodes()[k]);
      return {sum, 0.0};
    }
    case MeasureKind::density: {
      double err = 0.0;
      const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double x) { return m.density_at(x) * f(x); }, m.lo(), m.hi(), kKronrodDepth,
          kKronrodTolerance, &err);
      return {v, err};
    }
  }
  return {};
}

QuadResult quad2d_coupled(const MeasureSpec& m1, const MeasureSpec& m2,
                          const Integrand2& f, bool coupled) {
  const double c = coupled ? 1.0 : 0.0;
  if (m1.kind() == MeasureKind::gauss && m2.kind() == MeasureKind::gauss) {
    if (coupled && !(4.0 * m1.sigma() * m2.sigma() > 1.0))
      throw DivergenceError("coupled Gaussian pair diverges: 4 sigma1 sigma2 <= 1");
    const int n = kDefaultHermiteNodes;
    const double coarse = sum_rule(gauss_pair_rule(m1.sigma(), m2.sigma(), c, n), f);
    const double fine = sum_rule(gauss_pair_rule(m1.sigma(), m2.sigma(), c, 2 * n), f);
    return {coarse, std::abs(fine - coarse)};
  }
  double inner_error = 0.0;
  const QuadResult outer = quad1d(m2, [&](double y) {
    const QuadResult inner = quad1d(m1, [&](double x) {
      return (coupled ? std::exp(x * y) : 1.0) * f(x, y);
    });
    inner_error = std::max(inner_error, inner.error_estimate);
    return inner.value;
  });
  return {outer.value, outer.error_estimate + inner_error};
}

CoupledMeasure CoupledMeasure::gauss_pair(double sigma1, double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
    throw InvalidArgument("gauss pair needs positive sigmas");
  if (!(4.0 * sigma1 * sigma2 > 1.0))
    throw DivergenceError("coupled Gaussian pair diverges: 4 sigma1 sigma2 <= 1");
  CoupledMeasure m;
  m.s1_ = sigma1;
  m.s2_ = sigma2;
  return m;
}

CoupledMeasure CoupledMeasure::grid(std::vector<double> xs, std::vector<double> ys, Matrix w) {
  if (xs.empty() || ys.empty() || w.rows() != static_cast<Eigen::Index>(xs.size()) ||
      w.cols() != static_cast<Eigen::Index>(ys.size()))
    throw InvalidArgument("grid measure: weight matrix must be |xs| x |ys|");
  if (!w.allFinite()) throw InvalidArgument("grid measure weights must be finite");
  CoupledMeasure m;
  m.grid_ = true;
  m.xs_ = std::move(xs);
  m.ys_ = std::move(ys);
  m.w_ = std::move(w);
  return m;
}

QuadResult CoupledMeasure::integrate(const Integrand2& f) const {
  if (!grid_) return quad2d_coupled(MeasureSpec::gauss(s1_), MeasureSpec::gauss(s2_), f, true);
  return {sum_rule(rule(), f), 0.0};
}

Rule2 CoupledMeasure::rule(int n) const {
  if (!grid_) return gauss_pair_rule(s1_, s2_, 1.0, n);
  Rule2 out;
  for (std::size_t k = 0; k < xs_.size(); ++k)
    for (std::size_t l = 0; l < ys_.size(); ++l) {
      const double wkl = w_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      if (wkl == 0.0) continue;
      out.x.push_back(xs_[k]);
      out.y.push_back(ys_[l]);
      out.w.push_back(wkl);
    }
  return out;
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(mix(seed) + stream * 0xD1B54A32D192ED03ULL)) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

CMatrix haar_unitary(int n, CounterRng& rng) {
  if (n < 1 || n > kMaxHaarDimension)
    throw CapacityError("Haar sampling supports 1 <= N <= " +
                        std::to_string(kMaxHaarDimension));
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = std::complex<double>(re, im) / std::numbers::sqrt2;
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  const double dev = (q * q.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > kUnitarityTolerance)
    throw std::logic_error("Haar sample failed the unitarity check");
  return q;
}

HaarSample haar_unitary(int n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  return {haar_unitary(n, rng), seed, stream};
}

McResult mc_estimate(const std::function<double(CounterRng&)>& draw, long n_samples,
                     std::uint64_t seed) {
  if (n_samples < 100) throw InvalidArgument("Monte Carlo needs at least 100 samples");
  struct Stats {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  const long batches = (n_samples + kMcBatchSize - 1) / kMcBatchSize;
  std::vector<Stats> stats(static_cast<std::size_t>(batches));
  auto run_batch = [&](long b) {
    CounterRng rng(seed, static_cast<std::uint64_t>(b));
    const long count = std::min(kMcBatchSize, n_samples - b * kMcBatchSize);
    Stats s;
    for (long k = 0; k < count; ++k) {
      const double v = draw(rng);
      ++s.n;
      const double delta = v - s.mean;
      s.mean += delta / static_cast<double>(s.n);
      s.m2 += delta * (v - s.mean);
    }
    stats[static_cast<std::size_t>(b)] = s;
  };
  const long workers =
      std::min<long>(batches, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (long b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (long b = w; b < batches; b += workers) run_batch(b);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& e : failures)
      if (e) std::rethrow_exception(e);
  }
  // Chan et al. pairwise merge, always in batch order.
  Stats total;
  for (const auto& s : stats) {
    if (s.n == 0) continue;
    const double n = static_cast<double>(total.n + s.n);
    const double delta = s.mean - total.mean;
    total.mean += delta * static_cast<double>(s.n) / n;
    total.m2 += s.m2 + delta * delta * static_cast<double>(total.n) * static_cast<double>(s.n) / n;
    total.n += s.n;
  }
  McResult out;
  out.mean = total.mean;
  out.samples = total.n;
  out.stderr_ = std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n));
  return out;
}

}  // namespace kptau
