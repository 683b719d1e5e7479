#include "charb/estimators.hpp"

#include <cmath>

namespace charb::estimators {

using liouville::Superoperator;

ValueWithError fidelity_from_lambdas(const IrrepSummary& summary) {
  const double d = summary.hilbert_dim;
  long long covered = 0;
  cd acc = 0.0;
  double var = 0.0;
  for (const auto& e : summary.entries) {
    covered += static_cast<long long>(e.dim) * e.lambdas.size();
    for (const cd& l : e.lambdas) acc += static_cast<double>(e.dim) * l;
    var += static_cast<double>(e.dim) * e.dim * e.var_sum_re;
  }
  if (covered != summary.hilbert_dim * summary.hilbert_dim)
    throw NumericalError("fidelity_from_lambdas: incomplete irrep table");
  if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
    throw NumericalError("fidelity_from_lambdas: imaginary parts did not cancel");
  const double denom = d * d + d;
  return {(acc.real() + d) / denom, std::sqrt(var) / denom};
}

double exact_average_fidelity(const Superoperator& channel) {
  const double d = channel.dim;
  return (channel.m.trace().real() + d) / (d * d + d);
}

ValueWithError haar_state_fidelity(const Superoperator& channel, int samples,
                                   std::mt19937_64& rng) {
  const int d = channel.dim;
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0, sumsq = 0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXcd psi(d);
    for (int i = 0; i < d; ++i) psi(i) = cd(gauss(rng), gauss(rng));
    psi /= psi.norm();
    const auto v = liouville::vectorize(psi * psi.adjoint());
    const double f = (v.v.adjoint() * channel.m * v.v)(0).real();
    sum += f;
    sumsq += f * f;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1));
  return {mean, std::sqrt(var / samples)};
}

double extended_sub_fidelity(double lambda0, double lambda_tperp) {
  return (16.0 * lambda_tperp + 2.0 * lambda0 + 7.0) / 25.0;
}

ValueWithError extended_sub_fidelity(ValueWithError lambda0, ValueWithError lambda_tperp) {
  return {extended_sub_fidelity(lambda0.value, lambda_tperp.value),
          std::sqrt(std::pow(16.0 * lambda_tperp.stderr, 2) + std::pow(2.0 * lambda0.stderr, 2)) /
              25.0};
}

LeakageSeepage leakage_seepage_from_fit(double b, double lambda,
                                        const Eigen::Matrix2d& cov_lambda_b) {
  LeakageSeepage out;
  if (b < 0.0 || b > 1.0 || lambda < 0.0 || lambda > 1.0) out.physical = false;
  const double bc = std::min(1.0, std::max(0.0, b));
  const double lc = std::min(1.0, std::max(0.0, lambda));
  out.leakage.value = (1.0 - bc) * (1.0 - lc);
  out.seepage.value = bc * (1.0 - lc);
  // first order in (lambda, B)
  const Eigen::Vector2d grad_l(-(1.0 - bc), -(1.0 - lc));
  const Eigen::Vector2d grad_s(-bc, (1.0 - lc));
  out.leakage.stderr = std::sqrt(std::max(0.0, double(grad_l.transpose() * cov_lambda_b * grad_l)));
  out.seepage.stderr = std::sqrt(std::max(0.0, double(grad_s.transpose() * cov_lambda_b * grad_s)));
  return out;
}

std::pair<double, double> exact_leakage_seepage(const Superoperator& channel, int d1) {
  const int d = channel.dim;
  const int d2 = d - d1;
  Eigen::MatrixXcd p1 = Eigen::MatrixXcd::Zero(d, d), p2 = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d1; ++i) p1(i, i) = 1.0;
  for (int i = d1; i < d; ++i) p2(i, i) = 1.0;
  const auto v1 = liouville::vectorize(p1), v2 = liouville::vectorize(p2);
  const double leak = (v2.v.adjoint() * channel.m * v1.v)(0).real() / d1;
  const double seep = (v1.v.adjoint() * channel.m * v2.v)(0).real() / d2;
  return {leak, seep};
}

double restricted_fidelity(double lambda_1perp, double leakage, int d1) {
  return ((d1 * d1 - 1.0) * lambda_1perp + (d1 + 1.0) * (1.0 - leakage)) / (d1 * d1 + d1);
}

double exact_restricted_fidelity(const Superoperator& channel, int d1) {
  const int d = channel.dim;
  Eigen::MatrixXcd p11 = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) p11(i * d + j, i * d + j) = 1.0;
  const double tr = (channel.m * p11).trace().real();
  const double leak = exact_leakage_seepage(channel, d1).first;
  return (tr + d1 * (1.0 - leak)) / (d1 * d1 + d1);
}

ValueWithError haar_restricted_fidelity(const Superoperator& channel, int d1, int samples,
                                        std::mt19937_64& rng) {
  const int d = channel.dim;
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0, sumsq = 0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    for (int i = 0; i < d1; ++i) psi(i) = cd(gauss(rng), gauss(rng));
    psi /= psi.norm();
    const auto v = liouville::vectorize(psi * psi.adjoint());
    const double f = (v.v.adjoint() * channel.m * v.v)(0).real();
    sum += f;
    sumsq += f * f;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1));
  return {mean, std::sqrt(var / samples)};
}

double gate_dependent_avg_fidelity(const std::vector<Superoperator>& per_element) {
  if (per_element.empty()) throw NumericalError("gate_dependent_avg_fidelity: empty table");
  double acc = 0.0;
  for (const auto& s : per_element) acc += exact_average_fidelity(s);
  return acc / static_cast<double>(per_element.size());
}

}  // namespace charb::estimators
