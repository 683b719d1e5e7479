#pragma once

#include "charb/channels.hpp"
#include "charb/fitting.hpp"
#include "charb/groups.hpp"

namespace charb::rb {

struct ExperimentConfig {
  std::vector<int> lengths;       // strictly increasing, all >= 1
  long long total_sequences = 0;  // split equally, remainder to the smallest N
  int shots_per_sequence = 1;
  std::uint64_t seed = 0;
  bool parallel = true;
};

void validate(const ExperimentConfig& cfg);
std::vector<long long> allocate_sequences(const ExperimentConfig& cfg);

/// 15 geometric sequence lengths, N_max where the slowest decay reaches
/// e^-2 (clamped to [count, n_cap]; 128 when nothing decays).
std::vector<int> choose_lengths(const std::vector<cd>& eigenvalues, int count = 15,
                                int n_cap = 20000);

/// Group-independent view of a plan, used by the exact oracle.
struct PlanView {
  std::string id;
  double divisor = 1.0;
  const liouville::Superoperator* projector = nullptr;
  const liouville::DensityVec* rho = nullptr;
  const liouville::DensityVec* meas = nullptr;
  cd post_rotation{1.0, 0.0};
};
PlanView plan_view(const groups::FinitePlan& p);
PlanView plan_view(const groups::MatchgatePlan& p);

/// Shot-level Monte Carlo of the character RB protocol. Per-sequence RNG
/// streams derive from (seed, plan, length, sequence index); the result is
/// identical for any worker count and equals the serial reference bit for
/// bit.
fitting::DecayDataset run_character_rb(const FiniteGroup& group,
                                       const groups::FinitePlan& plan,
                                       const channels::NoiseModel& noise,
                                       const ExperimentConfig& cfg);
fitting::DecayDataset run_character_rb_serial(const FiniteGroup& group,
                                              const groups::FinitePlan& plan,
                                              const channels::NoiseModel& noise,
                                              const ExperimentConfig& cfg);

fitting::DecayDataset run_character_rb(const groups::MatchgateCatalog& cat,
                                       const groups::MatchgatePlan& plan,
                                       const channels::NoiseModel& noise,
                                       const ExperimentConfig& cfg);

/// Leakage RB: trivial character over the whole group, survival measured
/// in H1. Rejects SPAM that mixes the subspaces.
fitting::DecayDataset run_leakage_rb(const groups::LeakageCatalog& cat,
                                     const channels::NoiseModel& noise,
                                     const ExperimentConfig& cfg);

/// Haar twirl of the compact matchgate group, reconstructed from the
/// commutant blocks of the irrep table.
liouville::Superoperator matchgate_twirl(const liouville::Superoperator& channel,
                                         const groups::MatchgateCatalog& cat);

/// S(N) = <<M| L_M L (L_G)^N P L_P |rho>> / divisor, with the plan's
/// post-rotation applied. Gate-independent noise only.
cd exact_survival(const liouville::Superoperator& twirled, const PlanView& plan,
                  const channels::NoiseModel& noise, int n);

/// Exact decay sampled at the given lengths (stderr = 0).
fitting::DecayDataset exact_curve(const liouville::Superoperator& twirled,
                                  const PlanView& plan, const channels::NoiseModel& noise,
                                  const std::vector<int>& lengths);

}  // namespace charb::rb
