// Copyright 2026 The csbench authors
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

#ifndef CSBENCH_FIT_HPP_
#define CSBENCH_FIT_HPP_

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace csbench {

// Scalar model y = f(x; p) evaluated at a single abscissa.
using ModelFn =
    std::function<double(double x, const Eigen::VectorXd &params)>;

struct FitOptions {
  int max_iterations = 400;
  double cost_tolerance = 1e-14;   // relative decrease that counts as done
  double step_tolerance = 1e-14;   // parameter step below which we stop
  double initial_lambda = 1e-3;
};

struct FitResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // parameter covariance at the optimum
  double chi2 = 0.0;           // weighted sum of squared residuals
  int iterations = 0;
  bool converged = false;

  double stderr_of(int i) const;
};

// Damped least squares (Levenberg-Marquardt) with a central-difference
// Jacobian.  `sigma` holds per-point standard deviations; pass an empty
// vector for an unweighted fit, in which case the covariance is rescaled
// by chi2/dof (the usual convention when no error model is supplied).
FitResult levenberg_marquardt(const ModelFn &model,
                              const std::vector<double> &x,
                              const std::vector<double> &y,
                              const std::vector<double> &sigma,
                              const Eigen::VectorXd &initial,
                              const FitOptions &options = {});

// Exponential decay A * alpha^m + b against integer-like sequence lengths.
struct DecayFit {
  double amplitude = 0.0;
  double alpha = 0.0;
  double offset = 0.0;
  double alpha_stderr = 0.0;
  FitResult raw;
};

// Fits survival data to A*alpha^m + b.  Throws std::runtime_error when the
// data carry no information about a decay (fewer than three points or zero
// variance), so callers can handle the degenerate case explicitly.
DecayFit fit_decay(const std::vector<double> &lengths,
                   const std::vector<double> &values,
                   const std::vector<double> &sigma = {});

// Frequency (cycles per unit of dt) of the strongest non-DC component in a
// uniformly sampled real signal, located on an 8x zero-padded periodogram.
double dominant_frequency(const std::vector<double> &values, double dt);

struct SimplexOptions {
  int max_iterations = 2000;
  double tolerance = 1e-12;   // spread of simplex values that counts as done
  double initial_step = 0.1;  // per-coordinate displacement of the simplex
};

// Derivative-free minimization (Nelder-Mead downhill simplex).
Eigen::VectorXd nelder_mead(
    const std::function<double(const Eigen::VectorXd &)> &objective,
    const Eigen::VectorXd &start, const SimplexOptions &options = {});

}  // namespace csbench

#endif  // CSBENCH_FIT_HPP_
