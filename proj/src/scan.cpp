#include <chshlab/constrained.hpp>
#include <chshlab/scan.hpp>
#include <chshlab/t_observable.hpp>

#include <limits>
#include <stdexcept>

namespace chshlab {

Objective objective_by_name(std::string_view name) {
  if (name == "constrained_e4")
    return {"constrained_e4",
            [](const Angles& c) { return constrained_expectation_closed(correlation_quad(c)); },
            Objective::BoundKind::kAbsolute, 2.0};
  if (name == "eight_variable_sum")
    return {"eight_variable_sum",
            [](const Angles& c) { return quantum_eight_variable_sum(correlation_quad(c)); },
            Objective::BoundKind::kAbsolute, 2.0 * std::numbers::sqrt2};
  if (name == "t_validity_margin")
    return {"t_validity_margin",
            [](const Angles& c) { return t0_closed(c) - std::abs(t_mean(c)); },
            Objective::BoundKind::kLower, 0.0};
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

std::vector<std::string> objective_names() {
  return {"constrained_e4", "eight_variable_sum", "t_validity_margin"};
}

namespace {

struct Ranked {
  double value;
  Angles config;
};

// Keeps the `capacity` largest values; earlier insertions win ties.
class TopK {
 public:
  explicit TopK(int capacity) : capacity_(capacity) {}

  void offer(double value, const Angles& config) {
    if (static_cast<int>(items_.size()) == capacity_ && value <= items_.back().value) return;
    auto it = std::find_if(items_.begin(), items_.end(),
                           [&](const Ranked& r) { return value > r.value; });
    items_.insert(it, {value, config});
    if (static_cast<int>(items_.size()) > capacity_) items_.pop_back();
  }

  const std::vector<Ranked>& items() const { return items_; }

 private:
  int capacity_;
  std::vector<Ranked> items_;
};

struct LatticeScan {
  ScanReport report;
  TopK highest{kRefineFromBest};
  TopK lowest{kRefineFromBest};
};

LatticeScan scan_lattice(const Objective& objective, int resolution) {
  if (resolution < 2) throw std::invalid_argument("grid_scan: resolution must be at least 2");
  LatticeScan s;
  ScanReport& r = s.report;
  r.objective_name = objective.name;
  r.grid_resolution = resolution;
  r.bound = objective.bound;
  r.max_value = -std::numeric_limits<double>::infinity();
  r.min_value = std::numeric_limits<double>::infinity();

  const double step = std::numbers::pi / resolution;
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j)
      for (int k = 0; k < resolution; ++k)
        for (int l = 0; l < resolution; ++l) {
          const Angles c{i * step, j * step, k * step, l * step};
          double v;
          try {
            v = objective.eval(c);
          } catch (const NumericalError&) {
            ++r.n_skipped;
            continue;
          }
          ++r.n_evaluated;
          if (v > r.max_value) {
            r.max_value = v;
            r.argmax = c;
          }
          if (v < r.min_value) {
            r.min_value = v;
            r.argmin = c;
          }
          if (objective.violates(v)) r.violations.push_back({c, v});
          s.highest.offer(v, c);
          s.lowest.offer(-v, c);
        }
  return s;
}

}  // namespace

ScanReport grid_scan(const Objective& objective, int resolution) {
  return scan_lattice(objective, resolution).report;
}

RefineResult refine(const std::function<double(const Angles&)>& f, const Angles& start,
                    double step0, double tol) {
  if (!(step0 > tol && tol > 0.0))
    throw std::invalid_argument("refine: need step0 > tol > 0");
  // Points where the objective is undefined never count as improvements.
  auto eval = [&](const Angles& c) {
    try {
      return f(c);
    } catch (const NumericalError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  constexpr int kMaxMovesPerStep = 10000;

  RefineResult r{start, eval(start), 1};
  double* const coords[4] = {&r.config.alpha1, &r.config.alpha2, &r.config.beta1,
                             &r.config.beta2};
  for (double step = step0; step >= tol; step /= 2.0) {
    for (int moves = 0; moves < kMaxMovesPerStep;) {
      bool improved = false;
      for (double* x : coords) {
        for (double dir : {1.0, -1.0}) {
          const double saved = *x;
          *x = saved + dir * step;
          const double v = eval(r.config);
          ++r.evaluations;
          if (v > r.value) {
            r.value = v;
            improved = true;
            ++moves;
            break;
          }
          *x = saved;
        }
      }
      if (!improved) break;
    }
  }
  return r;
}

ScanReport verify_bound(const Objective& objective, double bound, int resolution, int restarts,
                        std::uint64_t seed) {
  Objective checked = objective;
  checked.bound = bound;
  LatticeScan s = scan_lattice(checked, resolution);
  ScanReport& r = s.report;

  const auto negated = [&](const Angles& c) { return -checked.eval(c); };
  auto record = [&](const Angles& c, double v) {
    ++r.n_refinements;
    if (v > r.max_value) {
      r.max_value = v;
      r.argmax = c;
    }
    if (v < r.min_value) {
      r.min_value = v;
      r.argmin = c;
    }
    if (checked.violates(v)) r.violations.push_back({c, v});
  };
  auto refine_both = [&](const Angles& start) {
    const RefineResult up = refine(checked.eval, start);
    record(up.config, up.value);
    const RefineResult down = refine(negated, start);
    record(down.config, -down.value);
  };

  for (const Ranked& top : s.highest.items()) refine_both(top.config);
  for (const Ranked& low : s.lowest.items()) refine_both(low.config);

  RandomStream rng(seed, StreamId::kScanRestarts);
  for (int i = 0; i < restarts; ++i) {
    Angles c;
    c.alpha1 = rng.uniform(0.0, std::numbers::pi);
    c.alpha2 = rng.uniform(0.0, std::numbers::pi);
    c.beta1 = rng.uniform(0.0, std::numbers::pi);
    c.beta2 = rng.uniform(0.0, std::numbers::pi);
    refine_both(c);
  }
  return r;
}

}  // namespace chshlab
