// Copyright 2026 The tpulse Authors
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

#pragma once

// Levenberg-Marquardt on a residual callback with forward-difference
// Jacobians.

#include <functional>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace tpulse::detail {

using Residual = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double rms = 0.0;
  int status = 0;
};

inline LeastSquaresResult least_squares(const Residual& fn, Eigen::VectorXd x0, int residuals,
                                        double tol = 1e-12, int max_evals = 4000) {
  struct Functor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    const Residual* fn;
    int n_in, n_out;
    int inputs() const { return n_in; }
    int values() const { return n_out; }
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
      (*fn)(x, r);
      return 0;
    }
  };
  Functor f{&fn, static_cast<int>(x0.size()), residuals};
  Eigen::NumericalDiff<Functor> nd(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor>> lm(nd);
  lm.parameters.ftol = tol;
  lm.parameters.xtol = tol;
  lm.parameters.maxfev = max_evals;
  LeastSquaresResult out;
  out.status = static_cast<int>(lm.minimize(x0));
  out.x = x0;
  Eigen::VectorXd r(residuals);
  fn(x0, r);
  out.rms = std::sqrt(r.squaredNorm() / residuals);
  return out;
}

}  // namespace tpulse::detail
