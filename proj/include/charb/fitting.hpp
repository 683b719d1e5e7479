#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "charb/common.hpp"

namespace charb::fitting {

/// One sequence-length bin of character-weighted survival estimates.
struct DecayPoint {
  int N = 0;
  cd mean{0.0, 0.0};
  double se_re = 0.0;
  double se_im = 0.0;
  long long count = 0;
};

struct DecayDataset {
  std::string plan_id;
  cd post_rotation{1.0, 0.0};  // already folded into the samples
  std::vector<DecayPoint> points;
};

enum class FitForm { SingleExp, ExpPlusConst, DoubleExpReal, DoubleExpConj };

struct FitModel {
  FitForm form = FitForm::SingleExp;
  bool complex_params = false;  // SingleExp with complex C and lambda
  bool with_constant = false;   // optional constant for DoubleExpConj
};

std::string form_name(const FitModel& m);
int num_params(const FitModel& m);

/// Parameter layouts:
///   SingleExp real     [C, lambda]
///   SingleExp complex  [Re C, Im C, Re lambda, Im lambda]
///   ExpPlusConst       [C, lambda, B]
///   DoubleExpReal      [C1, lambda1, C2, lambda2]
///   DoubleExpConj      [rho, r, theta, phi (, B)] -> 2 rho r^N cos(N theta + phi)
struct FitResult {
  FitModel model;
  std::vector<double> params;
  std::vector<double> stderrs;
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;
  double reduced_chi2 = 0.0;
  int dof = 0;
  bool converged = false;
  bool degenerate = false;      // one decay coefficient collapsed below 1e-3 of the intercept
  bool rank_deficient = false;  // covariance from a pseudo-inverse
  double multistart_spread = 0.0;

  cd value(int N) const;
  /// Decay rates sorted by descending modulus (conjugate variant reports
  /// the upper-half-plane member first).
  std::vector<cd> lambdas() const;
  std::vector<cd> coefficients() const;
  double constant() const;

  double var_re_leading_lambda() const;
  /// Variance of sum_j Re(lambda_j) including parameter covariance.
  double var_sum_re_lambda() const;
  /// 2x2 covariance of (lambda, B); ExpPlusConst only.
  Eigen::Matrix2d lambda_constant_covariance() const;
};

cd model_value(const FitModel& m, const std::vector<double>& p, int N);

/// Weighted least squares with Levenberg-Marquardt and >= 8 deterministic
/// multi-starts; real and imaginary residuals weighted separately.
FitResult fit_decay(const DecayDataset& data, const FitModel& model);

/// Fits every candidate and returns the smallest reduced chi^2; ties within
/// 5% resolve toward fewer free parameters.
FitResult select_model(const DecayDataset& data, const std::vector<FitModel>& candidates);

}  // namespace charb::fitting
