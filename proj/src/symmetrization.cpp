#include "frachs/symmetrization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "frachs/error.hpp"
#include "frachs/geometry.hpp"
#include "frachs/seminorms.hpp"

namespace frachs {

SlabGrid::SlabGrid(const Box& box, std::vector<int> cells)
    : box_(box), cells_(std::move(cells)), spacing_(cells_.size()), slab_size_(1), cell_measure_(1.0) {
  const int n = box_.dim();
  if (static_cast<int>(cells_.size()) != n) throw ParameterError("SlabGrid: one cell count per axis");
  if (!(box_.lo.last() > 0.0)) throw ParameterError("SlabGrid: box must lie in the open halfspace");
  for (int i = 0; i < n; ++i) {
    if (cells_[i] < 1) throw ParameterError("SlabGrid: cell counts must be positive");
    if (i < n - 1 && std::abs(box_.lo[i] + box_.hi[i]) > 1e-12 * (box_.hi[i] - box_.lo[i]))
      throw ParameterError("SlabGrid: tangential box must be symmetric about 0");
    spacing_[i] = (box_.hi[i] - box_.lo[i]) / cells_[i];
    cell_measure_ *= spacing_[i];
    if (i < n - 1) slab_size_ *= static_cast<std::size_t>(cells_[i]);
  }
  values_ = std::make_shared<std::vector<double>>(slab_size_ * static_cast<std::size_t>(cells_.back()), 0.0);
}

SlabGrid SlabGrid::sample(const ScalarField& f, const Box& box, std::vector<int> cells) {
  SlabGrid g(box, std::move(cells));
  auto& v = *g.values_;
  const std::size_t total = v.size();
  const int batches = static_cast<int>(std::min<std::size_t>(64, std::max<std::size_t>(1, total / 1024)));
  run_batches(batches, [&](int b) {
    const std::size_t begin = total * b / batches, end = total * (b + 1) / batches;
    for (std::size_t i = begin; i < end; ++i) v[i] = f(g.center(i));
  });
  return g;
}

std::vector<double> SlabGrid::heights() const {
  std::vector<double> h(static_cast<std::size_t>(cells_.back()));
  for (std::size_t k = 0; k < h.size(); ++k)
    h[k] = box_.lo.last() + (static_cast<double>(k) + 0.5) * spacing_.back();
  return h;
}

Point SlabGrid::center(std::size_t index) const {
  const int n = dim();
  Point x(n);
  for (int i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(cells_[i]);
    x[i] = box_.lo[i] + (static_cast<double>(index % c) + 0.5) * spacing_[i];
    index /= c;
  }
  return x;
}

double SlabGrid::tangential_radius(std::size_t index) const {
  return std::sqrt(center(index).tangential_norm2());
}

std::vector<double>& SlabGrid::mutable_values() {
  if (values_.use_count() > 1) values_ = std::make_shared<std::vector<double>>(*values_);
  return *values_;
}

namespace {

// Keys cubic convolution weights (a = -1/2) for offsets -1, 0, 1, 2.
std::array<double, 4> cubic_weights(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return {-0.5 * t3 + t2 - 0.5 * t, 1.5 * t3 - 2.5 * t2 + 1.0, -1.5 * t3 + 2.0 * t2 + 0.5 * t, 0.5 * t3 - 0.5 * t2};
}

}  // namespace

ScalarField SlabGrid::field(std::string label) const {
  const int n = dim();
  auto data = values_;
  auto cells = cells_;
  auto spacing = spacing_;
  const Box box = box_;
  const bool clip = std::all_of(data->begin(), data->end(), [](double v) { return v >= 0.0; });
  auto eval = [n, data, cells, spacing, box, clip](const Point& x) {
    std::array<std::ptrdiff_t, kMaxDim> base{};
    std::array<std::array<double, 4>, kMaxDim> w{};
    for (int i = 0; i < n; ++i) {
      const double u = (x[i] - box.lo[i]) / spacing[i] - 0.5;
      if (u < -1.0 || u > cells[i]) return 0.0;
      const double fl = std::floor(u);
      base[i] = static_cast<std::ptrdiff_t>(fl) - 1;
      w[i] = cubic_weights(u - fl);
    }
    double acc = 0.0;
    const unsigned taps = 1u << (2 * n);
    for (unsigned corner = 0; corner < taps; ++corner) {
      double wt = 1.0;
      std::size_t idx = 0, stride = 1;
      bool inside = true;
      for (int i = 0; i < n; ++i) {
        const unsigned o = (corner >> (2 * i)) & 3u;
        const std::ptrdiff_t j = base[i] + o;
        if (j < 0 || j >= cells[i]) {
          inside = false;
          break;
        }
        wt *= w[i][o];
        idx += static_cast<std::size_t>(j) * stride;
        stride *= static_cast<std::size_t>(cells[i]);
      }
      if (inside) acc += wt * (*data)[idx];
    }
    return clip ? std::max(acc, 0.0) : acc;
  };
  return ScalarField(n, eval, Domain::half_space(), box_, std::move(label));
}

double SlabGrid::norm(double r) const {
  double s = 0.0;
  for (double v : *values_) s += std::pow(std::abs(v), r);
  return std::pow(s * cell_measure_, 1.0 / r);
}

double SlabGrid::distance(const SlabGrid& other, double r) const {
  if (other.size() != size()) throw ParameterError("SlabGrid::distance: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += std::pow(std::abs((*values_)[i] - other.values()[i]), r);
  return std::pow(s * cell_measure_, 1.0 / r);
}

void SlabGrid::write_csv(std::ostream& os) const {
  os << "height,radius,value,measure\n";
  os.precision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    const Point x = center(i);
    os << x.last() << ',' << std::sqrt(x.tangential_norm2()) << ',' << (*values_)[i] << ',' << cell_measure_
       << '\n';
  }
}

SlabGrid rearrange_slabwise(const SlabGrid& grid, double tie_power) {
  if (!(tie_power >= 1.0)) throw ParameterError("rearrange_slabwise: tie_power must be >= 1");
  const auto& in = grid.values();
  for (double v : in)
    if (v < 0.0 || !std::isfinite(v)) throw ContractError("rearrange_slabwise: values must be finite and nonnegative");
  const std::size_t m = grid.slab_size();
  // Tangential cells ordered by distance from the axis, ties by index. The
  // distance is built from integer offsets so mirror cells tie exactly.
  const int n = grid.dim();
  std::vector<double> radius(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t r = j;
    double s = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      const auto c = static_cast<std::size_t>(grid.cells()[i]);
      const double off = std::abs(2.0 * static_cast<double>(r % c) + 1.0 - static_cast<double>(c));
      const double h = (grid.box().hi[i] - grid.box().lo[i]) / static_cast<double>(c);
      s += off * off * h * h;
      r /= c;
    }
    radius[j] = s;
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });
  // Runs of equal radius in sorted order.
  std::vector<std::size_t> groups{0};
  for (std::size_t j = 1; j < m; ++j)
    if (radius[order[j]] != radius[order[j - 1]]) groups.push_back(j);
  groups.push_back(m);

  SlabGrid out = grid;
  auto& v = out.mutable_values();
  const int slabs = grid.slab_count();
  run_batches(std::min(slabs, 64), [&](int b) {
    std::vector<double> buf(m);
    const int begin = slabs * b / std::min(slabs, 64), end = slabs * (b + 1) / std::min(slabs, 64);
    for (int s = begin; s < end; ++s) {
      const std::size_t off = static_cast<std::size_t>(s) * m;
      std::copy(in.begin() + static_cast<std::ptrdiff_t>(off), in.begin() + static_cast<std::ptrdiff_t>(off + m),
                buf.begin());
      std::sort(buf.begin(), buf.end(), std::greater<>());
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        const std::size_t a = groups[g], e = groups[g + 1];
        double mean = buf[a];
        if (e - a > 1 && buf[a] != buf[e - 1]) {
          double acc = 0.0;
          for (std::size_t j = a; j < e; ++j) acc += std::pow(buf[j], tie_power);
          mean = std::pow(acc / static_cast<double>(e - a), 1.0 / tie_power);
        }
        for (std::size_t j = a; j < e; ++j) v[off + order[j]] = mean;
      }
    }
  });
  return out;
}

ScalarField rotate_conformal(const ScalarField& f, const Params& params) {
  if (!f.support().inside_half_space()) throw ParameterError("rotate_conformal: field must live in the halfspace");
  const double kappa = params.conformal_exponent();
  auto eval = [f, kappa](const Point& x) {
    const Point w = rotate_R(map_T(x));
    const double v = f(map_T(w));
    if (v == 0.0) return 0.0;
    return std::pow(eta(x) * eta(w), kappa) * v;
  };
  // A ball field supported in B(0, rho) stays there under rotation, so the
  // image lives in the same cap.
  std::optional<Box> box;
  Domain dom = Domain::half_space();
  if (f.box()) {
    const double rho = enclosing_cap_parameter(*f.box());
    if (rho < 1.0) {
      dom = Domain::cap(rho);
      box = cap_region(rho).bounding_box(f.dim());
    }
  }
  return ScalarField(f.dim(), eval, dom, box, f.label() + "^U");
}

namespace {

std::vector<Point> sphere_directions(int n) {
  std::vector<Point> dirs;
  if (n == 2) {
    constexpr int k = 64;
    for (int i = 0; i < k; ++i) {
      Point u(2);
      u[0] = std::cos(2.0 * M_PI * i / k);
      u[1] = std::sin(2.0 * M_PI * i / k);
      dirs.push_back(u);
    }
  } else {
    Rng rng(0x5eed5eedULL);
    for (int i = 0; i < 256; ++i) dirs.push_back(rng.unit_vector(n));
  }
  return dirs;
}

}  // namespace

std::vector<double> test_sphere_radii(const ScalarField& f, const Params& params, double rho, double min_relative_mean,
                                      int count) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("test_sphere_radii: rho must lie in (0, 1)");
  const int n = f.dim();
  const double kappa = params.conformal_exponent();
  const auto dirs = sphere_directions(n);
  constexpr int kRadii = 32;
  std::vector<double> r(kRadii), mean(kRadii, 0.0);
  for (int i = 0; i < kRadii; ++i) {
    r[i] = rho * (i + 0.5) / kRadii;
    for (const auto& u : dirs) {
      Point w = u;
      w *= r[i];
      mean[i] += std::pow(eta(w), kappa) * f(map_T(w));
    }
    mean[i] /= static_cast<double>(dirs.size());
  }
  const double peak = *std::max_element(mean.begin(), mean.end());
  std::vector<double> keep;
  for (int i = 0; i < kRadii; ++i)
    if (peak > 0.0 && mean[i] >= min_relative_mean * peak) keep.push_back(r[i]);
  if (static_cast<int>(keep.size()) <= count) return keep;
  std::vector<double> out;
  for (int j = 0; j < count; ++j)
    out.push_back(keep[static_cast<std::size_t>((j + 1) * keep.size() / (count + 1))]);
  return out;
}

double angular_variation(const ScalarField& f, const Params& params, const std::vector<double>& radii) {
  const int n = f.dim();
  const double kappa = params.conformal_exponent();
  const auto dirs = sphere_directions(n);
  double worst = 0.0;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("angular_variation: radii must lie in (0, 1)");
    double s = 0.0, s2 = 0.0;
    for (const auto& u : dirs) {
      Point w = u;
      w *= r;
      const double v = std::pow(eta(w), kappa) * f(map_T(w));
      s += v;
      s2 += v * v;
    }
    const double k = static_cast<double>(dirs.size());
    const double mean = s / k;
    const double var = std::max(s2 / k - mean * mean, 0.0);
    if (mean > 0.0) worst = std::max(worst, std::sqrt(var) / mean);
  }
  return worst;
}

SymmetrizationResult competing_symmetries_run(const ScalarField& f0, const Params& params, int k_max, double tol,
                                              const QuadratureConfig& cfg, const SymmetrizationOptions& options) {
  params.require_quadratic();
  if (k_max < 0) throw ParameterError("competing_symmetries_run: k_max must be >= 0");
  if (!(tol >= 0.0)) throw ParameterError("competing_symmetries_run: tol must be >= 0");
  if (!f0.support().inside_half_space() || !f0.box())
    throw ParameterError("competing_symmetries_run: f0 must have bounded support in the halfspace");
  const int n = params.n();
  const double rho = enclosing_cap_parameter(*f0.box());
  if (!(rho < 1.0)) throw ParameterError("competing_symmetries_run: support must lie in a cap");
  const Box box = cap_region(rho).bounding_box(n);
  int m = options.cells_per_axis;
  if (m <= 0) m = n == 2 ? 384 : n == 3 ? 64 : 16;
  const std::vector<int> cells(static_cast<std::size_t>(n), m);

  const double ts = params.two_star();
  SymmetrizationResult res{{}, SlabGrid::sample(f0.modulus(), box, cells), rho, false};

  auto record = [&](int k, const SlabGrid& g, const SlabGrid* prev) {
    SymmetrizationStep s;
    s.k = k;
    const ScalarField F = g.field("F" + std::to_string(k));
    const Estimate J = weighted_gagliardo(F, params, cfg);
    if (J.divergent) throw DivergenceError("divergent seminorm during symmetrization", f0.label(), k);
    s.norm = g.norm(ts);
    if (!(s.norm > 0.0)) throw ParameterError("competing_symmetries_run: zero field");
    s.phi = J;
    s.phi.value = J.value / (s.norm * s.norm);
    s.phi.std_error = J.std_error / (s.norm * s.norm);
    s.increment = prev ? g.distance(*prev, ts) / s.norm : 0.0;
    s.angular_cv = angular_variation(
        F, params, test_sphere_radii(F, params, rho, options.min_relative_mean, options.sphere_count));
    return s;
  };

  res.trace.push_back(record(0, res.final_grid, nullptr));
  for (int k = 1; k <= k_max; ++k) {
    const ScalarField U = rotate_conformal(res.final_grid.field(), params);
    SlabGrid next = rearrange_slabwise(SlabGrid::sample(U, box, cells), params.two_star());
    res.trace.push_back(record(k, next, &res.final_grid));
    res.final_grid = std::move(next);
    if (res.trace.back().increment < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

void write_trace_csv(std::ostream& os, const std::vector<SymmetrizationStep>& trace) {
  os << "k,phi,phi_std_error,norm,increment,angular_cv\n";
  os.precision(17);
  for (const auto& s : trace)
    os << s.k << ',' << s.phi.value << ',' << s.phi.std_error << ',' << s.norm << ',' << s.increment << ','
       << s.angular_cv << '\n';
}

double RadialProfile::operator()(double r) const {
  if (knots.empty() || r < knots.front() || r > knots.back()) return 0.0;
  auto it = std::upper_bound(knots.begin(), knots.end(), r);
  if (it == knots.end()) return values.back();
  const std::size_t j = static_cast<std::size_t>(it - knots.begin());
  if (j == 0) return values.front();
  const double t = (r - knots[j - 1]) / (knots[j] - knots[j - 1]);
  return values[j - 1] + t * (values[j] - values[j - 1]);
}

double RadialProfile::support_radius() const {
  std::size_t j = values.size();
  while (j > 0 && values[j - 1] == 0.0) --j;
  if (j == values.size()) return knots.empty() ? 0.0 : knots.back();
  return knots[j];
}

void RadialProfile::validate() const {
  if (knots.size() != values.size() || knots.size() < 2) throw ContractError("RadialProfile: need >= 2 knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] >= 0.0 && knots[i] <= 1.0)) throw ContractError("RadialProfile: knots outside [0, 1]");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw ContractError("RadialProfile: knots must increase");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw ContractError("RadialProfile: negative value");
    if (i > 0 && values[i] > values[i - 1]) throw ContractError("RadialProfile: values must be nonincreasing");
  }
  if (knots.back() == 1.0 && values.back() != 0.0) throw ContractError("RadialProfile: h(1) must vanish");
}

RadialProfile RadialProfile::sample(const std::function<double(double)>& h, int knots) {
  if (knots < 2) throw ParameterError("RadialProfile::sample: need >= 2 knots");
  RadialProfile p;
  for (int i = 0; i < knots; ++i) {
    const double r = static_cast<double>(i) / (knots - 1);
    p.knots.push_back(r);
    p.values.push_back(i == knots - 1 ? 0.0 : h(r));
  }
  return p;
}

void RadialProfile::write_csv(std::ostream& os) const {
  os << "r,h\n";
  os.precision(17);
  for (std::size_t i = 0; i < knots.size(); ++i) os << knots[i] << ',' << values[i] << '\n';
}

RadialProfile RadialProfile::read_csv(std::istream& is) {
  RadialProfile p;
  std::string line;
  if (!std::getline(is, line)) throw ParameterError("profile CSV: empty input");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double r = 0.0, h = 0.0;
    char comma = 0;
    if (!(ls >> r >> comma >> h) || comma != ',') throw ParameterError("profile CSV: malformed line '" + line + "'");
    p.knots.push_back(r);
    p.values.push_back(h);
  }
  p.validate();
  return p;
}

std::vector<double> isotonic_nonincreasing(const std::vector<double>& v) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (double x : v) {
    blocks.push_back({x, 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum / a.count >= b.sum / b.count) break;
      Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.sum / b.count);
  return out;
}

RadialProfile extract_profile(const ScalarField& F, const Params& params, int knots, double radial_tolerance) {
  if (knots < 2) throw ParameterError("extract_profile: need >= 2 knots");
  const int n = params.n();
  RadialProfile p;
  std::vector<double> raw;
  for (int i = 0; i < knots; ++i) {
    const double r = static_cast<double>(i) / (knots - 1);
    p.knots.push_back(r);
    if (i == knots - 1) {
      raw.push_back(0.0);
      continue;
    }
    Point x(n);
    x[0] = 2.0 * r / std::sqrt(1.0 - r * r);
    x.last() = 1.0;
    raw.push_back(std::max(F(x), 0.0));
  }
  // Radiality is tested where the profile carries mass.
  const double peak = *std::max_element(raw.begin(), raw.end());
  std::vector<double> radii;
  if (peak > 0.0) {
    for (int i = 1; i < knots - 1 && radii.size() < 3; i += std::max(1, knots / 16))
      if (raw[static_cast<std::size_t>(i)] > 0.25 * peak) radii.push_back(p.knots[static_cast<std::size_t>(i)]);
    const double cv = radii.empty() ? 0.0 : angular_variation(F, params, radii);
    if (cv > radial_tolerance)
      throw ContractError("extract_profile: conjugated field is not radial (angular variation " +
                          std::to_string(cv) + ")");
  }
  p.values = isotonic_nonincreasing(raw);
  p.values.back() = 0.0;
  for (double& v : p.values) v = std::max(v, 0.0);
  return p;
}

ScalarField reconstruct_from_profile(const RadialProfile& h, const Params& params) {
  h.validate();
  const int n = params.n();
  const double kappa = params.conformal_exponent();
  const double rho = h.support_radius();
  auto eval = [h, kappa](const Point& x) {
    const double v = h(std::sqrt(map_T(x).norm2()));
    if (v == 0.0) return 0.0;
    return std::pow(x.last(), -kappa) * v;
  };
  if (rho < 1.0) {
    if (!(rho > 0.0)) return ScalarField::zero(n, Domain::half_space(), Box::cube(n, 0.5, 1.5));
    return ScalarField(n, eval, Domain::cap(rho), cap_region(rho).bounding_box(n), "profile");
  }
  return ScalarField(n, eval, Domain::half_space(), std::nullopt, "profile");
}

}  // namespace frachs
