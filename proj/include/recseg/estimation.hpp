#pragma once

#include <cstdint>
#include <utility>

#include "recseg/core.hpp"

namespace recseg {

struct FitConfig {
  std::int32_t R = 2;
  std::int32_t K = 2;
  std::int32_t H = 2;
  double theta = 1e-3;  // smoothing numerator
  double eta = 1e-3;    // smoothing denominator
  std::int32_t max_iters = 100;
  double tol = 1e-7;  // relative log-likelihood improvement
  std::uint64_t seed = 0;
  std::int32_t restarts = 5;
  double lambda_init_lo = 0.5;  // multipliers of the global event rate
  double lambda_init_hi = 1.5;
  bool naive_dp = false;
  // applied to lambda entries before use when smoothing is off, so zero
  // rates never yield -inf mid-fit
  double lambda_floor = 1e-12;

  void validate() const;
};

enum class StepKind { Groups, Lambda, Segments };

struct FitStep {
  StepKind kind;
  double loglik;
};

struct FitTrace {
  std::vector<FitStep> steps;
  std::int32_t iterations = 0;
  double seconds = 0.0;
};

/// Smoothed per-block rate MLE: (cnt + theta) / (pairs * duration + eta).
LambdaTensor update_lambda(const TemporalGraph& g, const Partition& p,
                           const Segmentation& seg, const LevelMapping& levels,
                           double theta, double eta);

/// One run of the alternating optimization from a random start.
std::pair<Model, FitTrace> fit(const TemporalGraph& g, const FitConfig& cfg);

/// Independent fits with seeds seed+i; best log-likelihood wins,
/// lowest restart index on ties.
std::pair<Model, std::vector<FitTrace>> fit_restarts(const TemporalGraph& g,
                                                     const FitConfig& cfg);

}  // namespace recseg
