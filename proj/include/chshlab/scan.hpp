#pragma once

// Lattice scans and coordinate-descent refinement over the four analyzer
// angles, used to check the bounds of the CHSH-type objectives numerically.

#include <chshlab/lhv_model.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace chshlab {

inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kRefineStep0 = std::numbers::pi / 24.0;
inline constexpr double kRefineTol = 1e-10;
inline constexpr int kRefineFromBest = 4;

struct Objective {
  /// kAbsolute: |value| <= bound. kLower: value >= bound.
  enum class BoundKind { kAbsolute, kLower };

  std::string name;
  std::function<double(const Angles&)> eval;
  BoundKind kind = BoundKind::kAbsolute;
  double bound = 0.0;

  bool violates(double value) const {
    return kind == BoundKind::kAbsolute ? std::abs(value) > bound + kBoundSlack
                                        : value < bound - kBoundSlack;
  }
};

/// constrained_e4 (|E4| <= 2), eight_variable_sum (|S| <= 2 sqrt 2),
/// t_validity_margin (t0 - |E| >= 0).
Objective objective_by_name(std::string_view name);
std::vector<std::string> objective_names();

struct ScanViolation {
  Angles config;
  double value;
};

struct ScanReport {
  std::string objective_name;
  int grid_resolution = 0;
  int n_refinements = 0;
  double bound = 0.0;
  double max_value = 0.0;
  Angles argmax;
  double min_value = 0.0;
  Angles argmin;
  std::vector<ScanViolation> violations;
  std::int64_t n_evaluated = 0;
  /// Configurations where the objective is undefined (degenerate conditioning).
  std::int64_t n_skipped = 0;

  double best_abs() const { return std::max(std::abs(max_value), std::abs(min_value)); }
};

/// Evaluates the objective on {i pi / resolution}^4, i = 0..resolution-1.
/// Ties go to the lexicographically smallest lattice point.
ScanReport grid_scan(const Objective& objective, int resolution);

struct RefineResult {
  Angles config;
  double value = 0.0;
  std::int64_t evaluations = 0;
};

/// Coordinate ascent with step halving: cycle over the four angles trying
/// +-step, halve the step after a cycle with no improvement, stop once the
/// step drops below tol.
RefineResult refine(const std::function<double(const Angles&)>& f, const Angles& start,
                    double step0 = kRefineStep0, double tol = kRefineTol);

/// Lattice scan, then refinement (both directions) from the best lattice
/// points and from `restarts` uniform random starts on [0, pi)^4.
ScanReport verify_bound(const Objective& objective, double bound, int resolution, int restarts,
                        std::uint64_t seed);

}  // namespace chshlab
