#include "charb/channels.hpp"

#include <cmath>

#include "charb/rng.hpp"

namespace charb::channels {

using liouville::Superoperator;

NoiseModel identity_noise(int dim) {
  return {liouville::identity_super(dim), liouville::identity_super(dim),
          liouville::identity_super(dim), {}};
}

NoiseModel uniform_noise(Superoperator gate) {
  const int d = gate.dim;
  return {std::move(gate), liouville::identity_super(d), liouville::identity_super(d), {}};
}

void require_cptp(const Superoperator& s) {
  if (liouville::trace_preservation_defect(s) > 1e-8)
    throw NumericalError("require_cptp: trace preservation violated");
  if (liouville::choi_min_eigenvalue(s) < -1e-10)
    throw NumericalError("require_cptp: Choi matrix not positive semidefinite");
}

Superoperator random_cptp(int dim, int env_dim, std::mt19937_64& rng) {
  if (dim < 1 || env_dim < 1) throw ConfigError("random_cptp: dimensions must be >= 1");
  const Eigen::MatrixXcd u = liouville::haar_unitary(dim * env_dim, rng);
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(env_dim);
  for (int k = 0; k < env_dim; ++k) {
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = u(i * env_dim + k, j * env_dim + 0);
    kraus.push_back(std::move(a));
  }
  return liouville::kraus_to_super(dim, kraus);
}

Superoperator mix_with_identity(const Superoperator& channel, double w) {
  if (w < 0.0 || w > 1.0) throw ConfigError("mix_with_identity: weight outside [0,1]");
  Superoperator out = liouville::identity_super(channel.dim);
  out.m = (1.0 - w) * out.m + w * channel.m;
  return out;
}

Superoperator depolarizing(int dim, double p) {
  if (p < 0.0 || p > 1.0) throw ConfigError("depolarizing: p outside [0,1]");
  const auto one = liouville::vectorize(Eigen::MatrixXcd::Identity(dim, dim));
  Superoperator out = liouville::identity_super(dim);
  out.m = p * out.m + (1.0 - p) / dim * (one.v * one.v.adjoint());
  return out;
}

Superoperator intensity_error(double epsilon) {
  Eigen::VectorXcd d(4);
  const cd em = std::polar(1.0, -epsilon), ep = std::polar(1.0, epsilon);
  d << em, ep, ep, em;  // phases of exp(-i eps Z(x)Z) on |00>,|01>,|10>,|11>
  return liouville::unitary_to_super(d.asDiagonal());
}

namespace {

Superoperator per_qubit_kraus_2q(const std::vector<Eigen::MatrixXcd>& single) {
  std::vector<Eigen::MatrixXcd> kraus;
  for (const auto& a : single)
    for (const auto& b : single) kraus.push_back(liouville::kron(a, b));
  return liouville::kraus_to_super(4, kraus);
}

}  // namespace

Superoperator amplitude_damping_2q(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw ConfigError("amplitude_damping_2q: gamma outside [0,1]");
  Eigen::MatrixXcd a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  a1 << 0, std::sqrt(gamma), 0, 0;
  return per_qubit_kraus_2q({a0, a1});
}

Superoperator phase_damping_2q(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw ConfigError("phase_damping_2q: gamma outside [0,1]");
  Eigen::MatrixXcd a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  a1 << 0, 0, 0, std::sqrt(gamma);
  return per_qubit_kraus_2q({a0, a1});
}

Superoperator swap_error(double p) {
  if (p < 0.0 || p > 1.0) throw ConfigError("swap_error: p outside [0,1]");
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 4);
  w(0, 0) = w(3, 3) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  std::vector<Eigen::MatrixXcd> kraus{std::sqrt(1.0 - p) * Eigen::MatrixXcd::Identity(4, 4),
                                      std::sqrt(p) * w};
  return liouville::kraus_to_super(4, kraus);
}

namespace {
double avg_fidelity(const Superoperator& s) {
  const double d = s.dim;
  return (s.m.trace().real() + d) / (d * d + d);
}
}  // namespace

Superoperator channel_with_target_fidelity(int dim, int env_dim, double target,
                                           std::mt19937_64& rng, double tol) {
  const Superoperator base = random_cptp(dim, env_dim, rng);
  const double f0 = avg_fidelity(base);
  if (target > 1.0 || target < f0)
    throw ConfigError("channel_with_target_fidelity: target outside reachable range");
  double lo = 0.0, hi = 1.0;  // F(mix(w)) = 1 - w (1 - f0), decreasing in w
  for (int it = 0; it < 200; ++it) {
    const double w = 0.5 * (lo + hi);
    const double f = avg_fidelity(mix_with_identity(base, w));
    if (std::abs(f - target) < tol) break;
    if (f > target)
      lo = w;
    else
      hi = w;
  }
  return mix_with_identity(base, 0.5 * (lo + hi));
}

NoiseModel gate_dependent_perturbation(const NoiseModel& base, double delta,
                                       const FiniteGroup& group, std::uint64_t seed) {
  if (delta < 0.0 || delta > 0.05)
    throw ConfigError("gate_dependent_perturbation: delta outside [0, 0.05]");
  NoiseModel out = base;
  out.per_element.clear();
  out.per_element.reserve(group.size());
  for (std::uint32_t g = 0; g < group.size(); ++g) {
    auto stream = rng::make_stream(seed, static_cast<std::uint64_t>(g), 0x9e3779b9ull);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double u = uni(stream);
    const Superoperator pert = mix_with_identity(random_cptp(group.dim(), group.dim(), stream),
                                                 delta * u);
    out.per_element.push_back(liouville::compose(pert, base.gate));
  }
  return out;
}

double cross_block_norm(const Superoperator& s, int d1) {
  // Sector of a vectorized index (i, j) is (block(i), block(j)); any entry
  // connecting different sector pairs mixes the subspaces.
  const int d = s.dim;
  auto blk = [&](int k) { return k < d1 ? 0 : 1; };
  double worst = 0.0;
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c) {
      const int ri = r / d, rj = r % d, ci = c / d, cj = c % d;
      if (blk(ri) != blk(ci) || blk(rj) != blk(cj))
        worst = std::max(worst, std::abs(s.m(r, c)));
    }
  return worst;
}

void validate_leakage_spam(const NoiseModel& noise, int d1, double tol) {
  if (cross_block_norm(noise.prep, d1) > tol || cross_block_norm(noise.meas, d1) > tol)
    throw NumericalError("validate_leakage_spam: SPAM mixes the computational and leakage subspaces");
}

}  // namespace charb::channels
