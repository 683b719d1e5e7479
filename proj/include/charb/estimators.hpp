#pragma once

#include <random>
#include <string>
#include <vector>

#include "charb/liouville.hpp"

namespace charb::estimators {

struct ValueWithError {
  double value = 0.0;
  double stderr = 0.0;
};

/// Fitted decay rates of one irrep (or of a conjugate pair of irreps
/// reported together). var_sum_re covers sum_j Re(lambda_j) including the
/// fit covariance between the rates.
struct IrrepSummaryEntry {
  std::string id;
  int dim = 0;
  std::vector<cd> lambdas;
  double var_sum_re = 0.0;
};

struct IrrepSummary {
  int hilbert_dim = 0;
  std::vector<IrrepSummaryEntry> entries;
  bool physical = true;  // false when a fitted rate left its physical range
};

/// F = (sum_i dim_i sum_j lambda_ij + d) / (d^2 + d). Requires complete
/// irrep coverage (sum over dim_i * #lambda = d^2) and imaginary parts
/// cancelling to 1e-10.
ValueWithError fidelity_from_lambdas(const IrrepSummary& summary);

/// F = (Tr Lambda + d) / (d^2 + d) for a trace-preserving channel.
double exact_average_fidelity(const liouville::Superoperator& channel);

/// Monte Carlo check of the average fidelity: mean survival over Haar
/// random pure states. Returns (mean, stderr).
ValueWithError haar_state_fidelity(const liouville::Superoperator& channel, int samples,
                                   std::mt19937_64& rng);

/// Subspace-RB proxy fidelity (16 lambda_Tperp + 2 lambda_0 + 7) / 25.
double extended_sub_fidelity(double lambda0, double lambda_tperp);
ValueWithError extended_sub_fidelity(ValueWithError lambda0, ValueWithError lambda_tperp);

struct LeakageSeepage {
  ValueWithError leakage;
  ValueWithError seepage;
  bool physical = true;  // inputs were inside [0,1] before clamping
};

/// L = (1-B)(1-lambda), S = B(1-lambda); covariance of (lambda, B) is
/// propagated to first order. Out-of-range inputs are flagged and clamped.
LeakageSeepage leakage_seepage_from_fit(double b, double lambda,
                                        const Eigen::Matrix2d& cov_lambda_b);

/// Exact traces: L = <<1_2| L |1_1>> / d1, S = <<1_1| L |1_2>> / d2.
std::pair<double, double> exact_leakage_seepage(const liouville::Superoperator& channel,
                                                int d1);

/// F_{1} = ((d1^2 - 1) lambda_1perp + (d1 + 1)(1 - L)) / (d1^2 + d1).
double restricted_fidelity(double lambda_1perp, double leakage, int d1);
/// Exact route: F_{1} = (Tr(L P_11) + d1 (1 - L)) / (d1^2 + d1).
double exact_restricted_fidelity(const liouville::Superoperator& channel, int d1);
/// Monte Carlo over Haar states inside H1.
ValueWithError haar_restricted_fidelity(const liouville::Superoperator& channel, int d1,
                                        int samples, std::mt19937_64& rng);

/// Mean of the per-element average fidelities of a gate-dependent model.
double gate_dependent_avg_fidelity(const std::vector<liouville::Superoperator>& per_element);

}  // namespace charb::estimators
