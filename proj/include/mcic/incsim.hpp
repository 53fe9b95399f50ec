#pragma once

// Switched-linear-system simulator with quadratic-stability checks and
// exponential-envelope verification.
//
// A family {A_1, ..., A_k} together with a Hermitian H whose negation is
// positive definite is quadratically stable when every member satisfies
// H A_i + A_i^* H > 0; the weighted norm then decays uniformly under any
// switching signal, giving the envelope
//     ||x(t)|| <= beta ||x(t0)|| exp(-alpha (t - t0)),  t0 <= t,
// with beta = sqrt(cond(-H)) and 2 alpha the smallest eigenvalue of the
// (-H)-weighted certificate over the family. For H = -I this specializes to
// beta = 1 and alpha = min_i lambda_min(-(A_i + A_i^*)) / 2.
//
// Simulation is piecewise-constant switching with exact per-interval
// propagation through the matrix exponential; sample times land on the dt
// grid while switches may occur at arbitrary continuous times.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mcic/cones.hpp"
#include "mcic/matcore.hpp"

namespace mcic {

struct SwitchedSystem {
  std::vector<Matrix> matrices;  // shared n x n
  std::optional<Matrix> H;       // candidate common Lyapunov factor, -H > 0

  int dimension() const {
    return matrices.empty() ? 0 : int(matrices.front().rows());
  }

  void validate() const {
    require(!matrices.empty(), "SwitchedSystem: empty matrix family");
    Eigen::Index n = matrices.front().rows();
    for (const Matrix& a : matrices) {
      require(a.rows() == n && a.cols() == n,
              "SwitchedSystem: members must share a square size");
      require_finite(a, "SwitchedSystem");
    }
    if (H) {
      require(H->rows() == n && H->cols() == n,
              "SwitchedSystem: H must match the member size");
      require_finite(*H, "SwitchedSystem H");
    }
  }
};

struct QuadraticStabilityReport {
  std::vector<ConeMembership> per_matrix;
  bool contained = false;  // every member strictly inside L_H
};

// Membership of each family member in L_H for the supplied H (which must
// have -H positive definite). The overall verdict is the conjunction of the
// strict memberships.
inline QuadraticStabilityReport check_quadratic_stability(
    const SwitchedSystem& sys, double tol = kDefaultTol) {
  sys.validate();
  require(sys.H.has_value(), "check_quadratic_stability: H missing");
  Matrix neg_h = -(*sys.H);
  require(is_hermitian(neg_h, std::sqrt(tol)),
          "check_quadratic_stability: H must be Hermitian");
  require(is_pd(definiteness(neg_h, tol)),
          "check_quadratic_stability: -H must be positive definite");
  QuadraticStabilityReport report;
  report.contained = true;
  for (const Matrix& a : sys.matrices) {
    report.per_matrix.push_back(membership_L_H(a, *sys.H, tol));
    report.contained = report.contained && report.per_matrix.back().in_open;
  }
  return report;
}

enum class SwitchPolicyKind {
  FixedSequence,  // cycle through `sequence` with constant dwell
  RandomDwell,    // uniform random member, exponential dwell (mean 10 dt)
  Greedy,         // at each dt step pick argmax_i x^*(A_i + A_i^*)x
};

inline const char* to_string(SwitchPolicyKind k) {
  switch (k) {
    case SwitchPolicyKind::FixedSequence: return "fixed";
    case SwitchPolicyKind::RandomDwell: return "random";
    case SwitchPolicyKind::Greedy: return "greedy";
  }
  return "unknown";
}

struct SwitchPolicy {
  SwitchPolicyKind kind = SwitchPolicyKind::FixedSequence;
  std::vector<int> sequence;  // fixed policy; empty means 0, 1, ..., k-1
  double dwell = 0.0;         // fixed policy dwell; 0 means 10 dt
  std::uint64_t seed = 0;     // random policy
};

struct TrajectorySegment {
  double duration = 0.0;
  int matrix_index = 0;
};

struct Trajectory {
  std::vector<double> times;                     // strictly increasing
  std::vector<Vector> states;                    // one per sample
  std::vector<double> norms;                     // Euclidean norms
  std::vector<TrajectorySegment> switch_schedule;  // merged constant runs
};

namespace detail {

class SwitchDriver {
 public:
  SwitchDriver(const SwitchedSystem& sys, const SwitchPolicy& policy,
               double dt)
      : sys_(sys), policy_(policy), dt_(dt), rng_(policy.seed) {
    if (policy_.kind == SwitchPolicyKind::FixedSequence &&
        policy_.sequence.empty()) {
      for (size_t i = 0; i < sys.matrices.size(); ++i) {
        sequence_.push_back(int(i));
      }
    } else {
      sequence_ = policy_.sequence;
    }
    for (int idx : sequence_) {
      require(idx >= 0 && idx < int(sys.matrices.size()),
              "simulate: fixed sequence index out of range");
    }
  }

  int greedy_pick(const Vector& x) const {
    int best = 0;
    double best_rate = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sys_.matrices.size(); ++i) {
      const Matrix& a = sys_.matrices[i];
      double rate = (x.adjoint() * (a + a.adjoint()) * x).value().real();
      if (rate > best_rate) {
        best_rate = rate;
        best = int(i);
      }
    }
    return best;
  }

  // Initial member and first dwell duration.
  std::pair<int, double> start(const Vector& x) {
    switch (policy_.kind) {
      case SwitchPolicyKind::FixedSequence:
        cursor_ = 0;
        return {sequence_.empty() ? 0 : sequence_[0], fixed_dwell()};
      case SwitchPolicyKind::RandomDwell:
        return {draw_index(), rng_.exponential(10.0 * dt_)};
      case SwitchPolicyKind::Greedy:
        return {greedy_pick(x), dt_};
    }
    return {0, dt_};
  }

  std::pair<int, double> next(const Vector& x) {
    switch (policy_.kind) {
      case SwitchPolicyKind::FixedSequence:
        cursor_ = (cursor_ + 1) % std::max<size_t>(sequence_.size(), 1);
        return {sequence_.empty() ? 0 : sequence_[cursor_], fixed_dwell()};
      case SwitchPolicyKind::RandomDwell:
        return {draw_index(), rng_.exponential(10.0 * dt_)};
      case SwitchPolicyKind::Greedy:
        return {greedy_pick(x), dt_};
    }
    return {0, dt_};
  }

 private:
  double fixed_dwell() const {
    return policy_.dwell > 0.0 ? policy_.dwell : 10.0 * dt_;
  }

  int draw_index() {
    return int(rng_.uniform() * double(sys_.matrices.size())) %
           int(sys_.matrices.size());
  }

  const SwitchedSystem& sys_;
  const SwitchPolicy& policy_;
  double dt_;
  Rng rng_;
  std::vector<int> sequence_;
  size_t cursor_ = 0;
};

}  // namespace detail

// Integrate dx/dt = A_{phi(t,x)} x with piecewise-constant switching. The
// state is advanced exactly with matrix exponentials: full dt steps reuse a
// cached exp(A_i dt), partial steps (sample or switch boundaries) get a
// fresh exponential. Samples sit on the dt grid plus the exact horizon.
inline Trajectory simulate(const SwitchedSystem& sys,
                           const SwitchPolicy& policy, const Vector& x0,
                           double horizon, double dt) {
  sys.validate();
  require(dt > 0.0, "simulate: dt must be positive");
  require(horizon >= 0.0, "simulate: horizon must be non-negative");
  require(x0.size() == sys.dimension(), "simulate: x0 must have length n");
  require_finite(Matrix(x0), "simulate x0");

  const double tie = 1e-9 * dt;
  detail::SwitchDriver driver(sys, policy, dt);
  std::vector<Matrix> step_cache(sys.matrices.size());

  Trajectory traj;
  Vector x = x0;
  double t = 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  traj.norms.push_back(x.norm());

  auto [current, dwell] = driver.start(x);
  double next_switch = dwell;
  double segment_start = 0.0;
  long sample_idx = 1;

  auto push_segment = [&](double end_time, int index) {
    double duration = end_time - segment_start;
    if (duration <= tie) return;
    if (!traj.switch_schedule.empty() &&
        traj.switch_schedule.back().matrix_index == index) {
      traj.switch_schedule.back().duration += duration;
    } else {
      traj.switch_schedule.push_back({duration, index});
    }
    segment_start = end_time;
  };

  while (t < horizon - tie) {
    double t_sample = double(sample_idx) * dt;
    if (t_sample > horizon) t_sample = horizon;
    double target = std::min(t_sample, std::min(next_switch, horizon));
    double tau = target - t;
    if (tau > tie) {
      if (std::abs(tau - dt) <= tie) {
        Matrix& cached = step_cache[size_t(current)];
        if (cached.size() == 0) {
          cached = matrix_exponential((sys.matrices[size_t(current)] * dt).eval());
        }
        x = cached * x;
      } else {
        x = matrix_exponential(
                (sys.matrices[size_t(current)] * tau).eval()) *
            x;
      }
    }
    t = target;
    if (std::abs(t - t_sample) <= tie) {
      traj.times.push_back(t);
      traj.states.push_back(x);
      traj.norms.push_back(x.norm());
      if (std::abs(t_sample - double(sample_idx) * dt) <= tie) ++sample_idx;
    }
    if (std::abs(t - next_switch) <= tie && t < horizon - tie) {
      push_segment(t, current);
      auto [idx, next_dwell] = driver.next(x);
      current = idx;
      next_switch = t + next_dwell;
    }
  }
  push_segment(horizon, current);
  return traj;
}

struct EnvelopeViolation {
  double t0 = 0.0;
  double t = 0.0;
  double ratio = 0.0;
};

struct EnvelopeReport {
  double alpha = 0.0;  // decay rate
  double beta = 1.0;   // overshoot constant, >= 1
  std::vector<EnvelopeViolation> violations;
  double max_ratio = 0.0;  // worst ||x(t)|| / (beta ||x(t0)|| e^{-alpha(t-t0)})
};

// Envelope parameters for the family: with P = -H (identity when H is
// absent), 2 alpha is the worst-case smallest eigenvalue of the P-weighted
// certificates P^{-1/2}(-(H A + A^* H))... equivalently of
// -(P^{-1/2} (P A + A^* P) P^{-1/2}), and beta = sqrt(cond(P)).
inline std::pair<double, double> envelope_parameters(
    const SwitchedSystem& sys, double tol = kDefaultTol) {
  sys.validate();
  Eigen::Index n = sys.matrices.front().rows();
  Matrix p = sys.H ? (-*sys.H).eval() : Matrix::Identity(n, n);
  require(is_hermitian(p, std::sqrt(tol)),
          "envelope_parameters: H must be Hermitian");
  require(is_pd(definiteness(p, tol)),
          "envelope_parameters: -H must be positive definite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part_exact(p));
  RealVector ev = es.eigenvalues();
  double beta = std::sqrt(ev(ev.size() - 1) / ev(0));
  RealVector inv_sqrt(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    inv_sqrt(i) = 1.0 / std::sqrt(ev(i));
  }
  Matrix p_inv_sqrt =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
  double alpha = std::numeric_limits<double>::infinity();
  for (const Matrix& a : sys.matrices) {
    Matrix cert = -(p * a + a.adjoint() * p);
    Matrix weighted = p_inv_sqrt * cert * p_inv_sqrt;
    Eigen::SelfAdjointEigenSolver<Matrix> we(hermitian_part_exact(weighted),
                                             Eigen::EigenvaluesOnly);
    alpha = std::min(alpha, we.eigenvalues()(0) / 2.0);
  }
  return {alpha, beta};
}

// Check ||x(t)|| <= beta ||x(t0)|| e^{-alpha (t - t0)} over every sampled
// pair t0 <= t. A prefix-minimum scan in the log domain covers all pairs in
// linear time: the binding t0 for each t is the minimizer of
// alpha t0 + log ||x(t0)||.
inline EnvelopeReport verify_envelope(const Trajectory& traj,
                                      const SwitchedSystem& sys,
                                      double ratio_tol = 1e-7) {
  require(traj.times.size() == traj.states.size() &&
              traj.times.size() == traj.norms.size(),
          "verify_envelope: inconsistent trajectory");
  EnvelopeReport report;
  auto [alpha, beta] = envelope_parameters(sys);
  report.alpha = alpha;
  report.beta = beta;
  if (traj.times.empty()) return report;

  const double log_beta = std::log(beta);
  double best_key = std::numeric_limits<double>::infinity();
  double best_t0 = traj.times.front();
  for (size_t i = 0; i < traj.times.size(); ++i) {
    double t = traj.times[i];
    double log_norm = std::log(std::max(traj.norms[i], 1e-300));
    if (i > 0) {
      // log ratio = log||x(t)|| + alpha t - log beta - min_{t0<=t} key(t0)
      double log_ratio = log_norm + alpha * t - log_beta - best_key;
      double ratio = std::exp(log_ratio);
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (ratio > 1.0 + ratio_tol) {
        report.violations.push_back({best_t0, t, ratio});
      }
    }
    double key = alpha * t + log_norm;
    if (key < best_key) {
      best_key = key;
      best_t0 = t;
    }
  }
  return report;
}

}  // namespace mcic
