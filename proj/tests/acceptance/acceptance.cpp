// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chshlab/constrained.hpp>
#include <chshlab/lhv_model.hpp>
#include <chshlab/quantum_model.hpp>
#include <chshlab/random.hpp>
#include <chshlab/scan.hpp>
#include <chshlab/t_observable.hpp>

#include "oracles.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

using namespace chshlab;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

/// Collects failure details for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++n_;
    if (!ok && failures_++ < 5) detail_ << "\n    " << what;
  }
  bool ok() const { return failures_ == 0; }
  std::string detail() const { return detail_.str(); }
  int count() const { return n_; }
  int failures() const { return failures_; }

 private:
  int n_ = 0;
  int failures_ = 0;
  std::ostringstream detail_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(const Angles& c) {
  return "(" + fmt(c.alpha1) + ", " + fmt(c.alpha2) + ", " + fmt(c.beta1) + ", " + fmt(c.beta2) +
         ")";
}

int g_failed = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!check.ok()) ++g_failed;
  std::printf("[%s] %2d %s (%d checks, %d failed, %.2fs)%s\n", check.ok() ? "PASS" : "FAIL", id,
              title.c_str(), check.count(), check.failures(), secs, check.detail().c_str());
  std::fflush(stdout);
}

std::string run_cli(const std::string& args, int& code) {
  const std::string cmd = std::string(CHSHLAB_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace

int main() {
  const Angles tsirelson = oracle::tsirelson_angles();

  criterion(1, "closed form at q = (-r, -r, -r, +r), r = sqrt2/2, is -4 sqrt2/3", [](Check& ck) {
    const double r = kSqrt2 / 2.0;
    const CorrelationQuad<double> q(-r, -r, -r, r);
    const double e = constrained_expectation_closed(q);
    const double expected = -4.0 * kSqrt2 / 3.0;
    ck.expect(std::abs(e - expected) <= 1e-12, "got " + fmt(e) + ", want " + fmt(expected));
  });

  criterion(2, "brute force at the Tsirelson angles agrees with the closed form", [&](Check& ck) {
    const double brute = constrained_expectation_bruteforce(build_constrained(tsirelson));
    const double closed = constrained_expectation_closed(correlation_quad(tsirelson));
    const double expected = -4.0 * kSqrt2 / 3.0;
    ck.expect(std::abs(brute - closed) <= 1e-12, "brute " + fmt(brute) + " closed " + fmt(closed));
    ck.expect(std::abs(brute - expected) <= 1e-12, "brute " + fmt(brute));
    // Independent 256-outcome enumeration of the conditioning.
    double mass = 0;
    const auto table = oracle::conditioned_table(oracle::q_from_angles(tsirelson), mass);
    double e = 0;
    for (int i = 0; i < 16; ++i) {
      const int k1 = i & 8 ? -1 : 1, l1 = i & 4 ? -1 : 1, k4 = i & 2 ? -1 : 1, l4 = i & 1 ? -1 : 1;
      e += (k1 * l1 + k1 * l4 + k4 * l1 - k4 * l4) * table[i];
    }
    ck.expect(std::abs(brute - e) <= 1e-12, "oracle " + fmt(e));
  });

  criterion(3, "|eight-variable sum| at the Tsirelson angles is 2 sqrt2", [&](Check& ck) {
    const double s = quantum_eight_variable_sum(correlation_quad(tsirelson));
    ck.expect(std::abs(std::abs(s) - 2.0 * kSqrt2) <= 1e-12, "got " + fmt(s));
  });

  criterion(4, "scan: |E4| <= 2 everywhere; eight-variable sum peaks at 2 sqrt2", [](Check& ck) {
    const auto e4 = verify_bound(objective_by_name("constrained_e4"), 2.0, 24, 20, 1);
    ck.expect(e4.violations.empty(),
              std::to_string(e4.violations.size()) + " violations of 2, best |E4| " +
                  fmt(e4.best_abs()));
    ck.expect(e4.n_evaluated == 24 * 24 * 24 * 24, "evaluated " + std::to_string(e4.n_evaluated));
    const auto s8 = verify_bound(objective_by_name("eight_variable_sum"), 2.0 * kSqrt2, 24, 20, 1);
    ck.expect(s8.violations.empty(), std::to_string(s8.violations.size()) +
                                         " violations of 2 sqrt2, best " + fmt(s8.best_abs()));
    ck.expect(std::abs(s8.best_abs() - 2.0 * kSqrt2) <= 1e-9, "best " + fmt(s8.best_abs()));
  });

  criterion(5, "closed form equals brute force on 1000 random configs", [](Check& ck) {
    RandomStream rng(5005);
    int done = 0;
    while (done < 1000) {
      const Angles c = oracle::random_angles(rng);
      const auto q = correlation_quad(c);
      if (1.0 + q.prod() <= 1e-6) continue;
      ++done;
      const double closed = constrained_expectation_closed(q);
      const double brute = constrained_expectation_bruteforce(build_constrained(c));
      ck.expect(std::abs(closed - brute) <= 1e-12,
                describe(c) + ": closed " + fmt(closed) + " brute " + fmt(brute));
    }
  });

  criterion(6, "CHSH parity: both forms are +-2 on all 16 inputs", [](Check& ck) {
    for (int bits = 0; bits < 16; ++bits) {
      const int a1 = bits & 8 ? -1 : 1, a2 = bits & 4 ? -1 : 1;
      const int b1 = bits & 2 ? -1 : 1, b2 = bits & 1 ? -1 : 1;
      const int v = parity_identity(a1, a2, b1, b2);
      ck.expect(v == 2 || v == -2, "form (a1+a2)b1+(a1-a2)b2 = " + std::to_string(v));
      ck.expect(v == (a1 + a2) * b1 + (a1 - a2) * b2, "parity_identity disagrees with the sum");
      const int dual = a1 * (b1 + b2) + a2 * (b1 - b2);
      ck.expect(dual == 2 || dual == -2, "dual form = " + std::to_string(dual));
      ck.expect(dual == parity_identity(b1, b2, a1, a2), "dual mismatch");
    }
  });

  criterion(7, "sign model: same-lambda samples are +-2, estimates within the bounds", [](Check& ck) {
    const auto model = reference_sign_model();
    RandomStream configs(7007, StreamId::kRandomConfigs);
    for (int i = 0; i < 20; ++i) {
      const Angles c = oracle::random_angles(configs);
      RandomStream rng(7000 + i, StreamId::kHiddenVariable);
      const auto same = chsh_same_lambda(model, c, 1'000'000, rng);
      for (const auto& [value, count] : same.value_counts)
        ck.expect(value == 2 || value == -2,
                  describe(c) + ": same-lambda sample " + std::to_string(value));
      ck.expect(same.within(-2.0, 2.0), describe(c) + ": same-lambda " + fmt(same.mean));
      ck.expect(same.n_samples == 1'000'000, "sample count");
      const auto indep = chsh_independent(model, c, 1'000'000, rng);
      ck.expect(indep.within(-4.0, 4.0), describe(c) + ": independent " + fmt(indep.mean));
      for (const auto& [value, count] : indep.value_counts)
        ck.expect(std::abs(value) <= 4, "independent sample " + std::to_string(value));
    }
  });

  criterion(8, "Monte Carlo agrees with analytic correlations within 4 stderr", [](Check& ck) {
    const auto model = reference_sign_model();
    RandomStream configs(8008, StreamId::kRandomConfigs);
    RandomStream rng(8008, StreamId::kHiddenVariable);
    for (int i = 0; i < 50; ++i) {
      const double a = configs.uniform(0.0, kPi), b = configs.uniform(0.0, kPi);
      const auto est = correlation_mc(model, a, b, 200'000, rng);
      const double quad = correlation_quadrature(model, a, b, 1'000'000);
      ck.expect(std::abs(quad - oracle::sawtooth_correlation(a, b)) <= 1e-5,
                "quadrature " + fmt(quad) + " vs sawtooth");
      ck.expect(std::abs(est.mean - quad) <= 4.0 * est.std_error,
                "sign (" + fmt(a) + ", " + fmt(b) + "): mc " + fmt(est.mean) + " +- " +
                    fmt(est.std_error) + " quad " + fmt(quad));
    }
    RandomStream pairs(8008, StreamId::kPairSampling);
    for (int i = 0; i < 20; ++i) {
      const double a = configs.uniform(0.0, kPi), b = configs.uniform(0.0, kPi);
      const auto dist = joint_distribution(a, b);
      SampleTally tally;
      for (int s = 0; s < 1'000'000; ++s) {
        const OutcomeRecord r = sample_pair(dist, pairs);
        tally.add(r.x * r.y);
      }
      const auto est = tally.finish();
      const double expected = -std::cos(2.0 * (a - b));
      ck.expect(std::abs(est.mean - expected) <= 4.0 * est.std_error,
                "quantum (" + fmt(a) + ", " + fmt(b) + "): " + fmt(est.mean) + " +- " +
                    fmt(est.std_error) + " want " + fmt(expected));
    }
  });

  criterion(9, "spectral suite of T on 1000 random configs", [](Check& ck) {
    RandomStream rng(9009, StreamId::kRandomConfigs);
    const Vector4<double> psi = singlet_state<double>();
    for (int i = 0; i < 1000; ++i) {
      const Angles c = oracle::random_angles(rng);
      const auto op = build_t(c);
      const double herm = (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
      ck.expect(herm <= 1e-13, describe(c) + ": hermiticity defect " + fmt(herm));

      const auto s = t_spectrum(op);
      for (int k = 0; k < 4; ++k) {
        const auto v = s.eigen.eigenvector(k);
        const double res = (op.matrix * v - s.eigen.eigenvalues[k] * v).norm();
        ck.expect(res <= 1e-10, describe(c) + ": residual " + fmt(res));
      }
      const auto& ev = s.eigen.eigenvalues;
      const double t0 = t0_closed(c);
      const bool matched = (std::abs(ev[3] - t0) <= 1e-9 && std::abs(ev[0] + t0) <= 1e-9) ||
                           (std::abs(ev[2] - t0) <= 1e-9 && std::abs(ev[1] + t0) <= 1e-9);
      ck.expect(matched, describe(c) + ": no eigenvalue pair matches t0 " + fmt(t0));

      if (!s.degenerate) {
        for (int col : s.t1_columns) {
          const double overlap = std::abs(s.eigen.eigenvector(col).dot(psi));
          ck.expect(overlap <= 1e-10, describe(c) + ": t1 overlap " + fmt(overlap));
        }
      } else {
        // t0 and t1 coincide: the singlet must lie in the +-t0 eigenspaces,
        // which then fill the whole space.
        double weight = 0;
        for (int k = 0; k < 4; ++k)
          if (std::abs(std::abs(ev[k]) - t0) <= 1e-8)
            weight += std::norm(s.eigen.eigenvector(k).dot(psi));
        ck.expect(std::abs(weight - 1.0) <= 1e-10, describe(c) + ": projector weight");
      }

      const double e = t_mean(c);
      const double e_matrix = t_mean_matrix(op);
      const double e_dist = t_distribution(c).mean();
      ck.expect(std::abs(e - e_matrix) <= 1e-12,
                describe(c) + ": E " + fmt(e) + " matrix " + fmt(e_matrix));
      ck.expect(std::abs(e - e_dist) <= 1e-12,
                describe(c) + ": E " + fmt(e) + " distribution " + fmt(e_dist));
    }
  });

  criterion(10, "t0 - |E| >= 0 on the 24^4 lattice and 1e5 random configs", [](Check& ck) {
    double worst = INFINITY;
    Angles worst_at{};
    auto visit = [&](const Angles& c) {
      const double margin = t0_closed(c) - std::abs(t_mean(c));
      if (margin < worst) {
        worst = margin;
        worst_at = c;
      }
      ck.expect(margin >= -1e-9, describe(c) + ": margin " + fmt(margin));
    };
    const int n = 24;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) visit({i * kPi / n, j * kPi / n, k * kPi / n, l * kPi / n});
    RandomStream rng(1010, StreamId::kRandomConfigs);
    for (int i = 0; i < 100'000; ++i) visit(oracle::random_angles(rng));
    std::printf("     smallest margin %s at %s\n", fmt(worst).c_str(), describe(worst_at).c_str());
  });

  criterion(11, "CLI output is byte-identical across repeated runs", [](Check& ck) {
    const char* invocations[] = {
        "correlate --alpha 0.3 --beta 1.2",
        "chsh --mode same-lambda --trials 20000 --seed 11",
        "chsh --mode independent --trials 20000 --seed 11 --format json",
        "chsh --mode quantum --trials 20000 --seed 11",
        "constrained eval --degrees --alpha1 10 --alpha2 50 --beta1 80 --beta2 120",
        "constrained scan --resolution 8 --restarts 3 --seed 11",
        "spectrum --alpha1 0.1 --alpha2 0.9 --beta1 1.7 --beta2 2.5 --format json",
        "simulate --trials 20000 --seed 11",
        "scan --objective eight_variable_sum --resolution 8 --restarts 3 --seed 11",
    };
    for (const char* args : invocations) {
      int code_a = 0, code_b = 0;
      const std::string a = run_cli(args, code_a);
      const std::string b = run_cli(args, code_b);
      ck.expect(code_a == 0 && code_b == 0, std::string(args) + ": exit " +
                                                std::to_string(code_a) + "/" +
                                                std::to_string(code_b));
      ck.expect(!a.empty() && a == b, std::string(args) + ": outputs differ");
    }
  });

  std::printf("%s: %d criteria failed\n", g_failed == 0 ? "ACCEPTED" : "REJECTED", g_failed);
  return g_failed == 0 ? 0 : 1;
}
