#include <chshlab/constrained.hpp>
#include <chshlab/lhv_model.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace chshlab {

void SampleTally::add(int value) {
  ++n_;
  sum_ += value;
  sum_sq_ += static_cast<std::int64_t>(value) * value;
  ++counts_[value];
}

CorrelationEstimate SampleTally::finish() const {
  CorrelationEstimate e;
  e.n_samples = n_;
  e.value_counts = counts_;
  if (n_ == 0) return e;
  e.mean = static_cast<double>(sum_) / static_cast<double>(n_);
  if (n_ > 1) {
    // n * sum(x^2) - (sum x)^2 exactly, then one rounding.
    const __int128 spread = static_cast<__int128>(n_) * sum_sq_ -
                            static_cast<__int128>(sum_) * sum_;
    const double variance = static_cast<double>(spread) /
                            (static_cast<double>(n_) * static_cast<double>(n_ - 1));
    e.std_error = std::sqrt(variance / static_cast<double>(n_));
  }
  return e;
}

HiddenVariableModel HiddenVariableModel::local(std::string name, Sampler sampler,
                                               Response respond_a, Response respond_b,
                                               std::optional<Support> support) {
  HiddenVariableModel m;
  m.name_ = std::move(name);
  m.local_ = true;
  m.sampler_ = std::move(sampler);
  m.respond_a_ = std::move(respond_a);
  m.respond_b_ = std::move(respond_b);
  m.support_ = support;
  return m;
}

HiddenVariableModel HiddenVariableModel::nonlocal(std::string name, PairSampler pair_sampler) {
  HiddenVariableModel m;
  m.name_ = std::move(name);
  m.local_ = false;
  m.pair_sampler_ = std::move(pair_sampler);
  return m;
}

namespace {

int checked_outcome(int v, const std::string& model) {
  if (v != 1 && v != -1)
    throw std::logic_error("model '" + model + "' produced a non-dichotomic outcome");
  return v;
}

void require_local(const HiddenVariableModel& m, const char* what) {
  if (!m.is_local())
    throw std::invalid_argument(std::string(what) + ": model '" + m.name() +
                                "' has no shared hidden variable");
}

void require_trials(std::int64_t n, const char* what) {
  if (n < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 trials");
}

}  // namespace

double HiddenVariableModel::sample_lambda(RandomStream& rng) const {
  require_local(*this, "sample_lambda");
  return sampler_(rng);
}

int HiddenVariableModel::respond_a(double alpha, double lambda) const {
  require_local(*this, "respond_a");
  return checked_outcome(respond_a_(alpha, lambda), name_);
}

int HiddenVariableModel::respond_b(double beta, double lambda) const {
  require_local(*this, "respond_b");
  return checked_outcome(respond_b_(beta, lambda), name_);
}

OutcomeRecord HiddenVariableModel::sample_outcomes(double alpha, double beta,
                                                   RandomStream& rng) const {
  if (!local_) {
    const OutcomeRecord r = pair_sampler_(alpha, beta, rng);
    return {checked_outcome(r.x, name_), checked_outcome(r.y, name_)};
  }
  const double lambda = sampler_(rng);
  return {respond_a(alpha, lambda), respond_b(beta, lambda)};
}

HiddenVariableModel reference_sign_model() {
  return HiddenVariableModel::local(
      "sign", [](RandomStream& rng) { return rng.uniform(0.0, std::numbers::pi); },
      [](double alpha, double lambda) { return sign_of(std::cos(2.0 * (alpha - lambda))); },
      [](double beta, double lambda) { return -sign_of(std::cos(2.0 * (beta - lambda))); },
      HiddenVariableModel::Support{0.0, std::numbers::pi});
}

HiddenVariableModel quantum_mimic_model() {
  return HiddenVariableModel::nonlocal(
      "quantum-mimic", [](double alpha, double beta, RandomStream& rng) {
        return sample_pair(joint_distribution(alpha, beta), rng);
      });
}

std::vector<std::string> model_names() { return {"sign", "quantum-mimic"}; }

HiddenVariableModel model_by_name(std::string_view name) {
  if (name == "sign") return reference_sign_model();
  if (name == "quantum-mimic") return quantum_mimic_model();
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

CorrelationEstimate correlation_mc(const HiddenVariableModel& model, double alpha, double beta,
                                   std::int64_t n, RandomStream& rng) {
  require_trials(n, "correlation_mc");
  SampleTally tally;
  for (std::int64_t i = 0; i < n; ++i) {
    const OutcomeRecord r = model.sample_outcomes(alpha, beta, rng);
    tally.add(r.x * r.y);
  }
  return tally.finish();
}

double correlation_quadrature(const HiddenVariableModel& model, double alpha, double beta,
                              int grid_points) {
  if (!model.is_local() || !model.support())
    throw std::invalid_argument("correlation_quadrature: model '" + model.name() +
                                "' has no one-dimensional hidden-variable support");
  if (grid_points < 1000)
    throw std::invalid_argument("correlation_quadrature: need at least 1000 grid points");
  const auto [lo, hi] = *model.support();
  const double h = (hi - lo) / grid_points;
  long sum = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double lambda = lo + (i + 0.5) * h;
    sum += model.respond_a(alpha, lambda) * model.respond_b(beta, lambda);
  }
  return static_cast<double>(sum) / grid_points;
}

int parity_identity(int a1, int a2, int b1, int b2) {
  for (int v : {a1, a2, b1, b2})
    if (v != 1 && v != -1) throw std::invalid_argument("parity_identity: inputs must be +1 or -1");
  return (a1 + a2) * b1 + (a1 - a2) * b2;
}

CorrelationEstimate chsh_same_lambda(const HiddenVariableModel& model, const Angles& config,
                                     std::int64_t n, RandomStream& rng) {
  require_local(model, "chsh_same_lambda");
  require_trials(n, "chsh_same_lambda");
  SampleTally tally;
  for (std::int64_t i = 0; i < n; ++i) {
    const double lambda = model.sample_lambda(rng);
    tally.add(parity_identity(model.respond_a(config.alpha1, lambda),
                              model.respond_a(config.alpha2, lambda),
                              model.respond_b(config.beta1, lambda),
                              model.respond_b(config.beta2, lambda)));
  }
  return tally.finish();
}

CorrelationEstimate chsh_independent(const HiddenVariableModel& model, const Angles& config,
                                     std::int64_t n, RandomStream& rng) {
  require_trials(n, "chsh_independent");
  const auto pairs = pair_index_map(config);
  constexpr int kSigns[4] = {1, 1, 1, -1};
  SampleTally tally;
  for (std::int64_t i = 0; i < n; ++i) {
    int value = 0;
    for (int p = 0; p < 4; ++p) {
      const OutcomeRecord r = model.sample_outcomes(pairs[p].first, pairs[p].second, rng);
      value += kSigns[p] * r.x * r.y;
    }
    tally.add(value);
  }
  return tally.finish();
}

CorrelationEstimate quantum_chsh_independent(const Angles& config, std::int64_t n,
                                             RandomStream& rng) {
  require_trials(n, "quantum_chsh_independent");
  const std::array<PairOutcomeDistribution<double>, 4> dists{
      pair_probabilities(config, 1), pair_probabilities(config, 2), pair_probabilities(config, 3),
      pair_probabilities(config, 4)};
  constexpr int kSigns[4] = {1, 1, 1, -1};
  SampleTally tally;
  for (std::int64_t i = 0; i < n; ++i) {
    int value = 0;
    for (int p = 0; p < 4; ++p) {
      const OutcomeRecord r = sample_pair(dists[p], rng);
      value += kSigns[p] * r.x * r.y;
    }
    tally.add(value);
  }
  return tally.finish();
}

}  // namespace chshlab
