#include "frachs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "frachs/error.hpp"

namespace frachs {

std::string to_string(Method m) {
  return m == Method::MonteCarlo ? "monte-carlo" : "tensor-grid";
}

Method method_from_string(const std::string& s) {
  if (s == "monte-carlo" || s == "mc") return Method::MonteCarlo;
  if (s == "tensor-grid" || s == "grid") return Method::TensorGrid;
  throw ParameterError("unknown quadrature method '" + s + "'");
}

void QuadratureConfig::validate() const {
  if (samples == 0) throw ParameterError("samples must be positive");
  if (batches < 2) throw ParameterError("at least two batches are required");
  if (!(singular_cutoff > 0.0 && singular_cutoff < 1.0))
    throw ParameterError("singular cutoff must lie in (0, 1)");
  if (!(boundary_cutoff > 0.0 && boundary_cutoff < 1.0))
    throw ParameterError("boundary cutoff must lie in (0, 1)");
}

Estimate ratio(const Estimate& a, const Estimate& b) {
  if (b.value == 0.0) throw ParameterError("ratio: zero denominator");
  Estimate r;
  r.value = a.value / b.value;
  r.std_error = std::hypot(a.std_error / b.value, a.value * b.std_error / (b.value * b.value));
  r.samples_used = a.samples_used + b.samples_used;
  r.divergent = a.divergent || b.divergent;
  return r;
}

Estimate power(const Estimate& x, double e) {
  Estimate r = x;
  if (x.value < 0.0) throw ContractError("power of a negative estimate");
  r.value = std::pow(x.value, e);
  r.std_error = x.value > 0.0 ? std::abs(e) * std::pow(x.value, e - 1.0) * x.std_error : 0.0;
  return r;
}

Estimate BatchSeries::estimate() const {
  Estimate e;
  e.samples_used = samples;
  const auto b = static_cast<double>(means.size());
  if (means.empty()) return e;
  double sum = 0.0;
  for (double m : means) sum += m;
  e.value = sum / b;
  if (means.size() > 1) {
    double ss = 0.0;
    for (double m : means) ss += (m - e.value) * (m - e.value);
    e.std_error = std::sqrt(ss / (b - 1.0) / b);
  }
  return e;
}

BatchSeries BatchSeries::operator-(const BatchSeries& o) const {
  BatchSeries r = *this;
  for (std::size_t i = 0; i < means.size(); ++i) r.means[i] -= o.means[i];
  return r;
}

BatchSeries BatchSeries::operator+(const BatchSeries& o) const {
  BatchSeries r = *this;
  for (std::size_t i = 0; i < means.size(); ++i) r.means[i] += o.means[i];
  return r;
}

BatchSeries BatchSeries::scaled(double s) const {
  BatchSeries r = *this;
  for (double& m : r.means) m *= s;
  return r;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACHS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return hw;
}

void run_batches(int batches, const std::function<void(int)>& body) {
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(batches));
  if (workers <= 1) {
    for (int b = 0; b < batches; ++b) body(b);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    for (int b = next++; b < batches; b = next++) {
      try {
        body(b);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ (batch + 1));
}

Point Rng::unit_vector(int n) {
  Point u(n);
  if (n == 2) {
    const double t = 2.0 * M_PI * uniform();
    u[0] = std::cos(t);
    u[1] = std::sin(t);
    return u;
  }
  double s = 0.0;
  do {
    s = 0.0;
    for (int i = 0; i < n; ++i) {
      u[i] = normal();
      s += u[i] * u[i];
    }
  } while (s == 0.0);
  u *= 1.0 / std::sqrt(s);
  return u;
}

Point Rng::in_box(const Box& box) {
  Point x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * uniform();
  return x;
}

namespace {

constexpr std::array<unsigned, 32> kPrimes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,  47,  53,
                                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t i, unsigned base) {
  const double inv = 1.0 / base;
  double f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

UniformSource::UniformSource(const QuadratureConfig& cfg, int dims, std::uint64_t stream, std::uint64_t batch,
                             std::uint64_t first_index)
    : halton_(cfg.low_discrepancy),
      dims_(dims),
      index_(first_index + 1),
      shift_(static_cast<std::size_t>(dims)),
      rng_(derive_seed(cfg.seed, stream, batch)) {
  if (halton_ && dims > static_cast<int>(kPrimes.size()))
    throw ParameterError("UniformSource: too many dimensions for the Halton set");
  if (halton_)
    for (double& s : shift_) s = rng_.uniform();
}

void UniformSource::next(double* u) {
  if (!halton_) {
    for (int d = 0; d < dims_; ++d) u[d] = rng_.uniform();
    return;
  }
  for (int d = 0; d < dims_; ++d) {
    double v = radical_inverse(index_, kPrimes[static_cast<std::size_t>(d)]) + shift_[static_cast<std::size_t>(d)];
    if (v >= 1.0) v -= 1.0;
    u[d] = v;
  }
  ++index_;
}

int direction_dims(int n) { return n == 2 ? 1 : n == 3 ? 2 : n; }

Point direction_from_uniforms(int n, const double* u) {
  Point d(n);
  if (n == 2) {
    const double t = 2.0 * M_PI * u[0];
    d[0] = std::cos(t);
    d[1] = std::sin(t);
    return d;
  }
  if (n == 3) {
    const double z = 2.0 * u[0] - 1.0, t = 2.0 * M_PI * u[1];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    d[0] = s * std::cos(t);
    d[1] = s * std::sin(t);
    d[2] = z;
    return d;
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::min(std::max(u[i], 1e-300), 1.0 - 1e-16);
    d[i] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * v - 1.0);
    s += d[i] * d[i];
  }
  if (s == 0.0) {
    d[0] = 1.0;
    return d;
  }
  d *= 1.0 / std::sqrt(s);
  return d;
}

namespace {

std::uint64_t grid_side(std::uint64_t samples, int n) {
  auto m = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(samples), 1.0 / n) + 1e-9));
  return std::max<std::uint64_t>(m, 1);
}

}  // namespace

std::vector<BatchSeries> integrate_box_multi(const std::function<void(const Point&, double*)>& g,
                                             int count, const Box& box,
                                             const QuadratureConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  const int n = box.dim();
  const double vol = box.volume();
  const int batches = cfg.batches;
  std::vector<BatchSeries> out(static_cast<std::size_t>(count));
  for (auto& s : out) s.means.assign(static_cast<std::size_t>(batches), 0.0);

  if (cfg.method == Method::MonteCarlo) {
    const std::uint64_t per = (cfg.samples + batches - 1) / batches;
    run_batches(batches, [&](int b) {
      UniformSource src(cfg, n, stream, static_cast<std::uint64_t>(b), per * static_cast<std::uint64_t>(b));
      std::vector<double> acc(static_cast<std::size_t>(count), 0.0), v(acc.size());
      std::array<double, kMaxDim> u{};
      Point x(n);
      for (std::uint64_t i = 0; i < per; ++i) {
        src.next(u.data());
        for (int d = 0; d < n; ++d) x[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * u[static_cast<std::size_t>(d)];
        std::fill(v.begin(), v.end(), 0.0);
        g(x, v.data());
        for (int c = 0; c < count; ++c) acc[c] += v[c];
      }
      for (int c = 0; c < count; ++c) out[c].means[b] = vol * acc[c] / static_cast<double>(per);
    });
    for (auto& s : out) s.samples = per * batches;
    return out;
  }

  // Midpoint tensor rule; batches own contiguous node ranges and the result
  // is the exact node sum, so every batch mean is the same value.
  const std::uint64_t m = grid_side(cfg.samples, n);
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= m;
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(batches),
                                           std::vector<double>(static_cast<std::size_t>(count), 0.0));
  run_batches(batches, [&](int b) {
    const std::uint64_t begin = total * b / batches, end = total * (b + 1) / batches;
    std::vector<double> v(static_cast<std::size_t>(count));
    Point x(n);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t r = idx;
      for (int i = 0; i < n; ++i) {
        const auto k = r % m;
        r /= m;
        x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
      }
      std::fill(v.begin(), v.end(), 0.0);
      g(x, v.data());
      for (int c = 0; c < count; ++c) partial[b][c] += v[c];
    }
  });
  for (int c = 0; c < count; ++c) {
    double sum = 0.0;
    for (int b = 0; b < batches; ++b) sum += partial[b][c];
    out[c].means.assign(static_cast<std::size_t>(batches), vol * sum / static_cast<double>(total));
    out[c].samples = total;
  }
  return out;
}

Estimate integrate_box(const PointFunction& g, const Box& box, const QuadratureConfig& cfg,
                       std::uint64_t stream) {
  auto series = integrate_box_multi([&](const Point& x, double* v) { v[0] = g(x); }, 1, box, cfg, stream);
  return series[0].estimate();
}

namespace quad {

double finite(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 18, tol);
}

double endpoint_singular(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator.integrate(f, a, b, tol);
}

double to_infinity(const std::function<double(double)>& f, double a, double tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  // Far nodes can hit 0 * inf in products of powers; the integrands decay
  // there, so non-finite values beyond 1e30 count as zero.
  auto g = [&f](double t) {
    const double v = f(t);
    return (!std::isfinite(v) && t > 1e30) ? 0.0 : v;
  };
  return integrator.integrate(g, a, std::numeric_limits<double>::infinity(), tol);
}

}  // namespace quad

}  // namespace frachs
