#pragma once

#include <random>
#include <vector>

#include "charb/finite_group.hpp"
#include "charb/liouville.hpp"

namespace charb::channels {

/// Gate, preparation and measurement noise. When per_element is nonempty
/// the model is gate-dependent over a finite group (index-aligned).
struct NoiseModel {
  liouville::Superoperator gate;
  liouville::Superoperator prep;
  liouville::Superoperator meas;
  std::vector<liouville::Superoperator> per_element;
  bool gate_dependent() const { return !per_element.empty(); }
};

NoiseModel identity_noise(int dim);
NoiseModel uniform_noise(liouville::Superoperator gate);  // ideal SPAM

/// Strict CPTP verification: trace preservation to 1e-8 and Choi
/// positivity to -1e-10. Throws on failure.
void require_cptp(const liouville::Superoperator& s);

/// Stinespring construction: Haar unitary on dim*env_dim applied to
/// rho (x) |0><0|, environment traced out.
liouville::Superoperator random_cptp(int dim, int env_dim, std::mt19937_64& rng);

/// (1-w) * identity + w * channel.
liouville::Superoperator mix_with_identity(const liouville::Superoperator& channel, double w);

/// p * identity + (1-p) |1>><<1| / d; average fidelity p + (1-p)/d.
liouville::Superoperator depolarizing(int dim, double p);

// Named two-qubit (d = 4) error channels.
liouville::Superoperator intensity_error(double epsilon);       // exp(-i eps Z(x)Z)
liouville::Superoperator amplitude_damping_2q(double gamma);    // per qubit
liouville::Superoperator phase_damping_2q(double gamma);        // per qubit
liouville::Superoperator swap_error(double p);                  // (1-p) rho + p W rho W

/// Bisects the identity-mixture weight until the average fidelity hits the
/// target within tol. Requires target between F(channel) and 1.
liouville::Superoperator channel_with_target_fidelity(int dim, int env_dim, double target,
                                                      std::mt19937_64& rng,
                                                      double tol = 1e-6);

/// Per-element perturbations Lambda_U = mix(random_cptp, delta*u_U) composed
/// onto the base gate noise; u_U in [0,1] is derived from (seed, element),
/// so the model is reproducible regardless of evaluation order.
NoiseModel gate_dependent_perturbation(const NoiseModel& base, double delta,
                                       const FiniteGroup& group, std::uint64_t seed);

/// Largest matrix element coupling the H1/H2 subspaces (d1 + d2 split).
double cross_block_norm(const liouville::Superoperator& s, int d1);

/// Leakage-RB validation: SPAM components must not mix the subspaces.
void validate_leakage_spam(const NoiseModel& noise, int d1, double tol = 1e-10);

}  // namespace charb::channels
