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

#include "csbench/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace csbench {

namespace {

Eigen::VectorXd residuals(const ModelFn &model, const std::vector<double> &x,
                          const std::vector<double> &y,
                          const std::vector<double> &w,
                          const Eigen::VectorXd &p) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < x.size(); ++i)
    r(static_cast<Eigen::Index>(i)) = w[i] * (y[i] - model(x[i], p));
  return r;
}

Eigen::MatrixXd jacobian(const ModelFn &model, const std::vector<double> &x,
                         const std::vector<double> &w,
                         const Eigen::VectorXd &p) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index k = p.size();
  Eigen::MatrixXd j(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    // cbrt(machine epsilon) balances truncation and roundoff for a
    // central difference.
    const double h = 6e-6 * std::max(1.0, std::abs(p(c)));
    Eigen::VectorXd hi = p, lo = p;
    hi(c) += h;
    lo(c) -= h;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double fw = model(x[static_cast<size_t>(i)], hi);
      const double bw = model(x[static_cast<size_t>(i)], lo);
      // d(residual)/dp = -w * df/dp
      j(i, c) = -w[static_cast<size_t>(i)] * (fw - bw) / (2.0 * h);
    }
  }
  return j;
}

}  // namespace

double FitResult::stderr_of(int i) const {
  const double v = covariance(i, i);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

FitResult levenberg_marquardt(const ModelFn &model,
                              const std::vector<double> &x,
                              const std::vector<double> &y,
                              const std::vector<double> &sigma,
                              const Eigen::VectorXd &initial,
                              const FitOptions &options) {
  if (x.size() != y.size())
    throw std::invalid_argument("levenberg_marquardt: x/y size mismatch");
  if (!sigma.empty() && sigma.size() != x.size())
    throw std::invalid_argument("levenberg_marquardt: sigma size mismatch");
  if (x.empty()) throw std::invalid_argument("levenberg_marquardt: no data");

  std::vector<double> w(x.size(), 1.0);
  const bool absolute_sigma = !sigma.empty();
  if (absolute_sigma) {
    for (size_t i = 0; i < sigma.size(); ++i) {
      if (!(sigma[i] > 0.0))
        throw std::invalid_argument(
            "levenberg_marquardt: sigma entries must be positive");
      w[i] = 1.0 / sigma[i];
    }
  }

  FitResult out;
  out.params = initial;
  Eigen::VectorXd r = residuals(model, x, y, w, out.params);
  double cost = r.squaredNorm();
  double lambda = options.initial_lambda;

  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    Eigen::MatrixXd j = jacobian(model, x, w, out.params);
    Eigen::MatrixXd jtj = j.transpose() * j;
    Eigen::VectorXd g = j.transpose() * r;

    if (g.lpNorm<Eigen::Infinity>() < 1e-15) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 32; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index d = 0; d < damped.rows(); ++d)
        damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
      Eigen::VectorXd step = damped.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 4.0;
        continue;
      }
      Eigen::VectorXd trial = out.params + step;
      Eigen::VectorXd rt = residuals(model, x, y, w, trial);
      double trial_cost = rt.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        const double rel_drop = (cost - trial_cost) /
                                std::max(cost, options.cost_tolerance);
        out.params = trial;
        r = rt;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (rel_drop < options.cost_tolerance ||
            step.lpNorm<Eigen::Infinity>() < options.step_tolerance)
          out.converged = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) {
      // No downhill step at any damping: treat the point as a minimum.
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }

  out.chi2 = cost;
  Eigen::MatrixXd j = jacobian(model, x, w, out.params);
  Eigen::MatrixXd jtj = j.transpose() * j;
  out.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse();
  const int dof = static_cast<int>(x.size()) - static_cast<int>(initial.size());
  if (!absolute_sigma && dof > 0) out.covariance *= cost / dof;
  return out;
}

DecayFit fit_decay(const std::vector<double> &lengths,
                   const std::vector<double> &values,
                   const std::vector<double> &sigma) {
  if (lengths.size() != values.size())
    throw std::invalid_argument("fit_decay: lengths/values size mismatch");
  if (lengths.size() < 3)
    throw std::runtime_error(
        "fit_decay: need at least three sequence lengths");

  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  if (var < 1e-20)
    throw std::runtime_error(
        "fit_decay: data carry no variation; decay is unidentifiable");

  // Initial guesses: offset from the tail, decay rate from the half-way
  // point, amplitude from the first point.
  const size_t n = values.size();
  double b0 = 0.5 * (values[n - 1] + values[n - 2]);
  double a0 = values[0] - b0;
  if (std::abs(a0) < 1e-9) a0 = (values[0] >= b0) ? 1e-3 : -1e-3;
  double alpha0 = 0.9;
  const size_t mid = n / 2;
  const double num = values[mid] - b0, den = values[0] - b0;
  if (std::abs(den) > 1e-12 && num / den > 1e-12) {
    alpha0 = std::pow(num / den, 1.0 / (lengths[mid] - lengths[0]));
    alpha0 = std::clamp(alpha0, 0.01, 0.9999);
  }
  // Scale the amplitude back to m = 0.
  a0 /= std::pow(alpha0, lengths[0]);

  ModelFn model = [](double m, const Eigen::VectorXd &p) {
    return p(0) * std::pow(p(1), m) + p(2);
  };
  Eigen::VectorXd p0(3);
  p0 << a0, alpha0, b0;
  FitResult res = levenberg_marquardt(model, lengths, values, sigma, p0);

  DecayFit out;
  out.amplitude = res.params(0);
  out.alpha = res.params(1);
  out.offset = res.params(2);
  out.alpha_stderr = res.stderr_of(1);
  out.raw = std::move(res);
  return out;
}

double dominant_frequency(const std::vector<double> &values, double dt) {
  if (values.size() < 4)
    throw std::invalid_argument("dominant_frequency: need at least 4 samples");
  if (!(dt > 0.0))
    throw std::invalid_argument("dominant_frequency: dt must be positive");

  const size_t n = values.size();
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / n;
  const size_t padded = 8 * n;

  double best_power = -1.0;
  size_t best_k = 1;
  for (size_t k = 1; k <= padded / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double phase = -2.0 * M_PI * double(k) * double(i) / double(padded);
      acc += (values[i] - mean) * std::polar(1.0, phase);
    }
    const double power = std::norm(acc);
    if (power > best_power) {
      best_power = power;
      best_k = k;
    }
  }
  return double(best_k) / (double(padded) * dt);
}

Eigen::VectorXd nelder_mead(
    const std::function<double(const Eigen::VectorXd &)> &objective,
    const Eigen::VectorXd &start, const SimplexOptions &options) {
  const Eigen::Index dim = start.size();
  if (dim < 1) throw std::invalid_argument("nelder_mead: empty start point");

  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<size_t>(dim) + 1);
  pts.push_back(start);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd p = start;
    p(i) += options.initial_step * std::max(1.0, std::abs(start(i)));
    pts.push_back(p);
  }
  std::vector<double> vals(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) vals[i] = objective(pts[i]);

  auto order = [&] {
    std::vector<size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    std::vector<Eigen::VectorXd> np;
    std::vector<double> nv;
    for (size_t i : idx) {
      np.push_back(pts[i]);
      nv.push_back(vals[i]);
    }
    pts = std::move(np);
    vals = std::move(nv);
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    order();
    if (std::abs(vals.back() - vals.front()) <
        options.tolerance * (std::abs(vals.front()) + options.tolerance))
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (size_t i = 0; i + 1 < pts.size(); ++i) centroid += pts[i];
    centroid /= double(dim);

    const Eigen::VectorXd &worst = pts.back();
    Eigen::VectorXd reflected = centroid + (centroid - worst);
    double fr = objective(reflected);
    if (fr < vals.front()) {
      Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
      double fe = objective(expanded);
      if (fe < fr) {
        pts.back() = expanded;
        vals.back() = fe;
      } else {
        pts.back() = reflected;
        vals.back() = fr;
      }
    } else if (fr < vals[vals.size() - 2]) {
      pts.back() = reflected;
      vals.back() = fr;
    } else {
      Eigen::VectorXd contracted = centroid + 0.5 * (worst - centroid);
      double fc = objective(contracted);
      if (fc < vals.back()) {
        pts.back() = contracted;
        vals.back() = fc;
      } else {
        for (size_t i = 1; i < pts.size(); ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = objective(pts[i]);
        }
      }
    }
  }
  order();
  return pts.front();
}

}  // namespace csbench
