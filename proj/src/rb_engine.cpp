#include "charb/rb_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "charb/matchgate.hpp"
#include "charb/rng.hpp"

namespace charb::rb {

using fitting::DecayDataset;
using fitting::DecayPoint;
using liouville::Superoperator;

void validate(const ExperimentConfig& cfg) {
  if (cfg.lengths.empty()) throw ConfigError("config: lengths must be nonempty");
  int prev = 0;
  for (int n : cfg.lengths) {
    if (n < 1 || n <= prev) throw ConfigError("config: lengths must be strictly increasing and >= 1");
    prev = n;
  }
  if (cfg.total_sequences < static_cast<long long>(cfg.lengths.size()))
    throw ConfigError("config: need at least one sequence per length");
  if (cfg.shots_per_sequence < 1) throw ConfigError("config: shots_per_sequence must be >= 1");
}

std::vector<long long> allocate_sequences(const ExperimentConfig& cfg) {
  const auto l = static_cast<long long>(cfg.lengths.size());
  std::vector<long long> alloc(cfg.lengths.size(), cfg.total_sequences / l);
  alloc[0] += cfg.total_sequences % l;
  return alloc;
}

std::vector<int> choose_lengths(const std::vector<cd>& eigenvalues, int count, int n_cap) {
  double lam = 0.0;
  for (const cd& e : eigenvalues) {
    const double a = std::abs(e);
    if (a < 1.0 - 1e-9 && a > lam) lam = a;
  }
  int nmax = 128;
  if (lam > 1e-12) nmax = static_cast<int>(std::ceil(-2.0 / std::log(lam)));
  nmax = std::max(count, std::min(nmax, n_cap));
  std::vector<int> out;
  int prev = 0;
  for (int k = 0; k < count; ++k) {
    int n = static_cast<int>(std::lround(std::pow(nmax, static_cast<double>(k) / (count - 1))));
    n = std::max(n, prev + 1);
    out.push_back(n);
    prev = n;
  }
  return out;
}

PlanView plan_view(const groups::FinitePlan& p) {
  return {p.id, p.divisor, &p.projector, &p.rho, &p.meas, p.post_rotation};
}
PlanView plan_view(const groups::MatchgatePlan& p) {
  return {p.id, p.divisor, &p.projector, &p.rho, &p.meas, cd(1.0, 0.0)};
}

namespace {

struct SequenceOutcome {
  cd weight{0.0, 0.0};  // chi*(U0) * post_rotation
  int successes = 0;
};

/// Deterministic reduction of per-sequence outcomes into one decay point.
DecayPoint reduce_outcomes(int n_length, const std::vector<SequenceOutcome>& buf, int shots) {
  DecayPoint pt;
  pt.N = n_length;
  pt.count = static_cast<long long>(buf.size()) * shots;
  double sum_re = 0, c_re = 0, sum_im = 0, c_im = 0, sq_re = 0, cq_re = 0, sq_im = 0, cq_im = 0;
  auto kahan = [](double& acc, double& comp, double term) {
    const double y = term - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  };
  for (const auto& o : buf) {
    const double k = o.successes;
    kahan(sum_re, c_re, o.weight.real() * k);
    kahan(sum_im, c_im, o.weight.imag() * k);
    // outcomes are 0/1 bits, so the squared sample is the sample itself
    kahan(sq_re, cq_re, o.weight.real() * o.weight.real() * k);
    kahan(sq_im, cq_im, o.weight.imag() * o.weight.imag() * k);
  }
  const double n = static_cast<double>(pt.count);
  pt.mean = cd(sum_re / n, sum_im / n);
  if (pt.count > 1) {
    const double var_re = std::max(0.0, (sq_re - n * pt.mean.real() * pt.mean.real()) / (n - 1));
    const double var_im = std::max(0.0, (sq_im - n * pt.mean.imag() * pt.mean.imag()) / (n - 1));
    pt.se_re = std::sqrt(var_re / n);
    pt.se_im = std::sqrt(var_im / n);
  }
  return pt;
}

int draw_shots(std::mt19937_64& stream, double p, int shots) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int k = 0;
  for (int s = 0; s < shots; ++s)
    if (uni(stream) < p) ++k;
  return k;
}

double checked_probability(cd amp, std::atomic<bool>& bad) {
  const double p = amp.real();
  if (p < -1e-8 || p > 1.0 + 1e-8 || std::abs(amp.imag()) > 1e-8) bad = true;
  return std::min(1.0, std::max(0.0, p));
}

template <typename SequenceFn>
DecayDataset run_loop(const std::string& plan_id, cd post_rotation,
                      const ExperimentConfig& cfg, bool parallel, SequenceFn&& one_sequence) {
  validate(cfg);
  const auto alloc = allocate_sequences(cfg);
  const std::uint64_t plan_hash = rng::hash_string(plan_id);
  DecayDataset ds;
  ds.plan_id = plan_id;
  ds.post_rotation = post_rotation;
  std::atomic<bool> bad{false};
  for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
    const int n = cfg.lengths[li];
    const long long m = alloc[li];
    std::vector<SequenceOutcome> buf(m);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (long long s = 0; s < m; ++s) {
        auto stream = rng::make_stream(cfg.seed, plan_hash, static_cast<std::uint64_t>(n),
                                       static_cast<std::uint64_t>(s));
        buf[s] = one_sequence(n, stream, bad);
      }
    } else {
      for (long long s = 0; s < m; ++s) {
        auto stream = rng::make_stream(cfg.seed, plan_hash, static_cast<std::uint64_t>(n),
                                       static_cast<std::uint64_t>(s));
        buf[s] = one_sequence(n, stream, bad);
      }
    }
    if (bad) throw NumericalError("run_character_rb: measurement probability outside [-1e-8, 1+1e-8]");
    ds.points.push_back(reduce_outcomes(n, buf, cfg.shots_per_sequence));
  }
  return ds;
}

DecayDataset run_finite(const FiniteGroup& group, const groups::FinitePlan& plan,
                        const channels::NoiseModel& noise, const ExperimentConfig& cfg,
                        bool parallel) {
  if (noise.gate.dim != group.dim()) throw ConfigError("run_character_rb: dimension mismatch");
  if (noise.gate_dependent() && noise.per_element.size() != group.size())
    throw ConfigError("run_character_rb: per-element noise table size mismatch");
  const std::size_t gsize = group.size();
  std::vector<Eigen::MatrixXcd> steps(gsize);
#pragma omp parallel for schedule(static)
  for (std::int64_t g = 0; g < static_cast<std::int64_t>(gsize); ++g) {
    const auto& lam = noise.gate_dependent() ? noise.per_element[g].m : noise.gate.m;
    steps[g] = lam * group.super(static_cast<std::uint32_t>(g));
  }
  const Eigen::VectorXcd prep = noise.prep.m * plan.rho.v;
  const Eigen::RowVectorXcd meas = plan.meas.v.adjoint() * noise.meas.m;
  const auto nsub = static_cast<std::uint32_t>(plan.subgroup.size());
  const int shots = cfg.shots_per_sequence;

  auto one_sequence = [&](int n, std::mt19937_64& stream, std::atomic<bool>& bad) {
    std::uniform_int_distribution<std::uint32_t> pick_sub(0, nsub - 1);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(gsize - 1));
    const std::uint32_t s0 = pick_sub(stream);
    const std::uint32_t u0 = plan.subgroup[s0];
    const std::uint32_t g1 = pick(stream);
    Eigen::VectorXcd v = steps[group.product(g1, u0)] * prep;
    Eigen::VectorXcd tmp(v.size());
    std::uint32_t prod = g1;
    for (int k = 2; k <= n; ++k) {
      const std::uint32_t g = pick(stream);
      tmp.noalias() = steps[g] * v;
      v.swap(tmp);
      prod = group.product(g, prod);
    }
    tmp.noalias() = steps[group.inverse(prod)] * v;
    v.swap(tmp);
    const double p = checked_probability((meas * v)(0), bad);
    SequenceOutcome out;
    out.weight = std::conj(plan.chi[s0]) * plan.post_rotation;
    out.successes = draw_shots(stream, p, shots);
    return out;
  };
  return run_loop(plan.id, plan.post_rotation, cfg, parallel, one_sequence);
}

}  // namespace

DecayDataset run_character_rb(const FiniteGroup& group, const groups::FinitePlan& plan,
                              const channels::NoiseModel& noise, const ExperimentConfig& cfg) {
  return run_finite(group, plan, noise, cfg, cfg.parallel);
}

DecayDataset run_character_rb_serial(const FiniteGroup& group, const groups::FinitePlan& plan,
                                     const channels::NoiseModel& noise,
                                     const ExperimentConfig& cfg) {
  return run_finite(group, plan, noise, cfg, false);
}

DecayDataset run_character_rb(const groups::MatchgateCatalog& cat,
                              const groups::MatchgatePlan& plan,
                              const channels::NoiseModel& noise, const ExperimentConfig& cfg) {
  const int n = cat.n;
  const int dim = 1 << n;
  if (noise.gate.dim != dim) throw ConfigError("run_character_rb: dimension mismatch");
  if (noise.gate_dependent())
    throw ConfigError("run_character_rb: gate-dependent mode is finite-group only");
  const Eigen::VectorXcd prep = noise.prep.m * plan.rho.v;
  const Eigen::RowVectorXcd meas = plan.meas.v.adjoint() * noise.meas.m;
  const int shots = cfg.shots_per_sequence;
  const int chi_i = plan.i;

  auto apply_step = [&](Eigen::MatrixXcd& rho, const Eigen::MatrixXd& r) {
    const Eigen::MatrixXcd u = matchgate::unitary_from_rotation(r);
    rho = u * rho * u.adjoint();
    // gate noise in the vectorized picture
    Eigen::VectorXcd v(dim * dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) v(a * dim + b) = rho(a, b);
    v = noise.gate.m * v;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) rho(a, b) = v(a * dim + b);
  };

  auto one_sequence = [&](int len, std::mt19937_64& stream, std::atomic<bool>& bad) {
    // U0 from the diagonal subgroup: signs with product +1
    std::uniform_int_distribution<int> coin(0, 1);
    Eigen::VectorXd sigma(2 * n);
    int prod_sign = 1, chi = 1;
    for (int k = 0; k < 2 * n - 1; ++k) {
      sigma(k) = coin(stream) ? -1.0 : 1.0;
      prod_sign *= sigma(k) > 0 ? 1 : -1;
    }
    sigma(2 * n - 1) = prod_sign;
    for (int j = 0; j < chi_i; ++j) chi *= sigma(j) > 0 ? 1 : -1;

    Eigen::MatrixXcd rho(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) rho(a, b) = prep(a * dim + b);

    const Eigen::MatrixXd r1 = liouville::haar_special_orthogonal(2 * n, stream);
    apply_step(rho, sigma.asDiagonal() * r1);  // merged first gate U1 U0
    Eigen::MatrixXd prod = r1;                 // R(U_N ... U_1) accumulates right
    for (int k = 2; k <= len; ++k) {
      const Eigen::MatrixXd rk = liouville::haar_special_orthogonal(2 * n, stream);
      apply_step(rho, rk);
      prod = prod * rk;
    }
    apply_step(rho, prod.transpose());  // inverse element

    cd amp = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) amp += meas(a * dim + b) * rho(a, b);
    const double p = checked_probability(amp, bad);
    SequenceOutcome out;
    out.weight = cd(chi, 0);
    out.successes = draw_shots(stream, p, shots);
    return out;
  };
  return run_loop(plan.id, cd(1, 0), cfg, cfg.parallel, one_sequence);
}

DecayDataset run_leakage_rb(const groups::LeakageCatalog& cat, const channels::NoiseModel& noise,
                            const ExperimentConfig& cfg) {
  channels::validate_leakage_spam(noise, cat.d1);
  return run_character_rb(cat.group, cat.plan0, noise, cfg);
}

Superoperator matchgate_twirl(const Superoperator& channel, const groups::MatchgateCatalog& cat) {
  const auto blocks = reptheory::commutant_blocks(channel, cat.irreps);
  return reptheory::reassemble_commutant(blocks, cat.irreps, channel.dim);
}

cd exact_survival(const Superoperator& twirled, const PlanView& plan,
                  const channels::NoiseModel& noise, int n) {
  Eigen::VectorXcd x = plan.projector->m * (noise.prep.m * plan.rho->v);
  for (int k = 0; k < n; ++k) x = twirled.m * x;
  const Eigen::RowVectorXcd meas = plan.meas->v.adjoint() * noise.meas.m * noise.gate.m;
  return (meas * x)(0) / plan.divisor * plan.post_rotation;
}

DecayDataset exact_curve(const Superoperator& twirled, const PlanView& plan,
                         const channels::NoiseModel& noise, const std::vector<int>& lengths) {
  DecayDataset ds;
  ds.plan_id = plan.id;
  ds.post_rotation = plan.post_rotation;
  Eigen::VectorXcd x = plan.projector->m * (noise.prep.m * plan.rho->v);
  const Eigen::RowVectorXcd meas = plan.meas->v.adjoint() * noise.meas.m * noise.gate.m;
  int cur = 0;
  for (int n : lengths) {
    for (; cur < n; ++cur) x = twirled.m * x;
    DecayPoint pt;
    pt.N = n;
    pt.mean = (meas * x)(0) / plan.divisor * plan.post_rotation;
    pt.count = 0;
    ds.points.push_back(pt);
  }
  return ds;
}

}  // namespace charb::rb
