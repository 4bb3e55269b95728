// Copyright 2026 The Conjunction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONJUNCTION_INFERENCE_HPP_
#define CONJUNCTION_INFERENCE_HPP_

#include <optional>

#include <Eigen/Dense>

#include "conjunction/geometry.hpp"

namespace conjunction {

// Maximum likelihood estimate of the true position restricted to the circle
// of radius psi, and its squared Mahalanobis distance from the observation.
struct ConstrainedFit {
  Eigen::Vector2d xi_hat = Eigen::Vector2d::Zero();
  double lambda_hat = 0.0;  // radians in [0, 2*pi)
  double delta = 0.0;
};

// Outcome of testing H0: psi = psi0 (the boundary of psi >= psi0) against
// psi < psi0. The Wald statistic is absent when the observed position is
// the origin.
struct TestResult {
  double psi0 = 0.0;
  double r = 0.0;
  std::optional<double> w;
  double p_obs = 0.5;
  double psi_hat = 0.0;

  bool wald_undefined() const { return !w.has_value(); }
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  bool lower_truncated = false;  // r(0) < z, so the lower end is clamped to 0
};

// Squared Mahalanobis distance between t and the observed position.
double mahalanobis_sq(const EncounterFrame& frame, const Eigen::Vector2d& t);

// Minimizes the Mahalanobis distance to the observation over ||xi|| = psi.
// A 720-point angular scan brackets every stationary point, each is polished
// by safeguarded Newton to 1e-12 rad and the smallest distance wins.
ConstrainedFit constrained_mle(const EncounterFrame& frame, double psi);

// Profile log-likelihood -delta/2. The constant -log(2 pi d1 d2) is dropped;
// only differences are meaningful.
double profile_loglik(const EncounterFrame& frame, double psi);

// Unconstrained MLE of the miss distance, ||x||.
double mle(const EncounterFrame& frame);

// sign(||x|| - psi0) * sqrt(delta(psi0)).
double likelihood_root(const EncounterFrame& frame, double psi0);

// Delta-method variance of ||x||: (x1^2 d1^2 + x2^2 d2^2) / ||x||^2.
// Throws UndefinedVariance at x = 0.
double wald_variance(const EncounterFrame& frame);
double wald_statistic(const EncounterFrame& frame, double psi0);

// p_obs = Phi(-r(psi0)).
double significance_probability(const EncounterFrame& frame, double psi0);

TestResult test_hypothesis(const EncounterFrame& frame, double psi0);

// Profile-likelihood interval {psi : |r(psi)| <= z}, z = Phi^{-1}((1+level)/2).
ConfidenceInterval confidence_interval(const EncounterFrame& frame,
                                       double level);

}  // namespace conjunction

#endif  // CONJUNCTION_INFERENCE_HPP_
