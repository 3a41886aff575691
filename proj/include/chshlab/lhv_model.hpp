#pragma once

// Local hidden-variable models and the Monte Carlo CHSH protocols.
//
// Two experiment protocols are provided. In the same-lambda protocol one
// latent draw fixes all four outcomes a1, a2, b1, b2 of a trial. In the
// independent-pairs protocol each of the four angle combinations is measured
// on its own pair with its own latent draw, giving eight outcome variables.

#include <chshlab/quantum_model.hpp>
#include <chshlab/random.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chshlab {

using Angles = AngleConfig<double>;

/// Sample mean of integer-valued trials. std_error is the sample standard
/// deviation (n - 1 denominator) over sqrt(n).
struct CorrelationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  /// Histogram of the per-trial values.
  std::map<int, std::int64_t> value_counts;

  bool within(double lo, double hi) const { return mean >= lo && mean <= hi; }
};

class SampleTally {
 public:
  void add(int value);
  CorrelationEstimate finish() const;

 private:
  std::int64_t n_ = 0;
  std::int64_t sum_ = 0;
  std::int64_t sum_sq_ = 0;
  std::map<int, std::int64_t> counts_;
};

class HiddenVariableModel {
 public:
  using Sampler = std::function<double(RandomStream&)>;
  using Response = std::function<int(double angle, double lambda)>;
  using PairSampler = std::function<OutcomeRecord(double alpha, double beta, RandomStream&)>;

  struct Support {
    double lo;
    double hi;
  };

  /// A genuine local model: lambda ~ rho, outcomes A(alpha, lambda), B(beta, lambda).
  static HiddenVariableModel local(std::string name, Sampler sampler, Response respond_a,
                                   Response respond_b, std::optional<Support> support);

  /// A model that produces joint outcomes per pair without a shared latent
  /// variable. It cannot be used with the same-lambda protocol or quadrature.
  static HiddenVariableModel nonlocal(std::string name, PairSampler pair_sampler);

  const std::string& name() const { return name_; }
  bool is_local() const { return local_; }
  const std::optional<Support>& support() const { return support_; }

  double sample_lambda(RandomStream& rng) const;
  int respond_a(double alpha, double lambda) const;
  int respond_b(double beta, double lambda) const;

  /// One pair measured at (alpha, beta). Local models draw a fresh lambda.
  OutcomeRecord sample_outcomes(double alpha, double beta, RandomStream& rng) const;

 private:
  HiddenVariableModel() = default;

  std::string name_;
  bool local_ = true;
  Sampler sampler_;
  Response respond_a_;
  Response respond_b_;
  std::optional<Support> support_;
  PairSampler pair_sampler_;
};

/// sign(x) with sign(0) = +1.
inline int sign_of(double x) { return x >= 0.0 ? 1 : -1; }

/// lambda uniform on [0, pi); A = sign cos 2(alpha - lambda); B = -sign cos 2(beta - lambda).
HiddenVariableModel reference_sign_model();

/// Samples each pair from the singlet joint distribution. Not a local model.
HiddenVariableModel quantum_mimic_model();

/// "sign" or "quantum-mimic"; throws std::invalid_argument for anything else.
HiddenVariableModel model_by_name(std::string_view name);
std::vector<std::string> model_names();

CorrelationEstimate correlation_mc(const HiddenVariableModel& model, double alpha, double beta,
                                   std::int64_t n, RandomStream& rng);

/// Midpoint rule for E[A B] over the model's lambda support.
double correlation_quadrature(const HiddenVariableModel& model, double alpha, double beta,
                              int grid_points);

/// (a1 + a2) b1 + (a1 - a2) b2; always +-2 for +-1 inputs.
int parity_identity(int a1, int a2, int b1, int b2);

CorrelationEstimate chsh_same_lambda(const HiddenVariableModel& model, const Angles& config,
                                     std::int64_t n, RandomStream& rng);

/// A1B1 + A2B2 + A3B3 - A4B4 with lambda_1..lambda_4 drawn in order per trial.
CorrelationEstimate chsh_independent(const HiddenVariableModel& model, const Angles& config,
                                     std::int64_t n, RandomStream& rng);

/// x1y1 + x2y2 + x3y3 - x4y4 with each pair drawn from the singlet distribution
/// at (a1,b1), (a1,b2), (a2,b1), (a2,b2).
CorrelationEstimate quantum_chsh_independent(const Angles& config, std::int64_t n,
                                             RandomStream& rng);

}  // namespace chshlab
