#include "charb/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace charb::fitting {

namespace {

double ipow(double x, int n) {
  double out = 1.0, base = x;
  for (int k = n; k > 0; k >>= 1) {
    if (k & 1) out *= base;
    base *= base;
  }
  return out;
}

cd cpow(cd x, int n) {
  cd out = 1.0, base = x;
  for (int k = n; k > 0; k >>= 1) {
    if (k & 1) out *= base;
    base *= base;
  }
  return out;
}

struct Problem {
  const DecayDataset* data;
  FitModel model;
  bool complex_residuals;
  Eigen::VectorXd lo, hi;

  int n_res() const {
    return static_cast<int>(data->points.size()) * (complex_residuals ? 2 : 1);
  }

  Eigen::VectorXd residuals(const Eigen::VectorXd& p) const {
    std::vector<double> pv(p.data(), p.data() + p.size());
    Eigen::VectorXd r(n_res());
    int k = 0;
    for (const auto& pt : data->points) {
      const cd f = model_value(model, pv, pt.N);
      const double wre = pt.se_re > 0 ? 1.0 / pt.se_re : 1.0;
      r(k++) = (pt.mean.real() - f.real()) * wre;
      if (complex_residuals) {
        const double wim = pt.se_im > 0 ? 1.0 / pt.se_im : 1.0;
        r(k++) = (pt.mean.imag() - f.imag()) * wim;
      }
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    const int np = static_cast<int>(p.size());
    Eigen::MatrixXd j(n_res(), np);
    for (int c = 0; c < np; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(p(c)));
      Eigen::VectorXd pp = p, pm = p;
      pp(c) += h;
      pm(c) -= h;
      j.col(c) = (residuals(pp) - residuals(pm)) / (2 * h);
    }
    return j;
  }

  Eigen::VectorXd clamp(Eigen::VectorXd p) const {
    for (int i = 0; i < p.size(); ++i) p(i) = std::min(hi(i), std::max(lo(i), p(i)));
    // keep complex lambda inside the unit disc
    if (model.form == FitForm::SingleExp && model.complex_params) {
      const double mod = std::hypot(p(2), p(3));
      if (mod > 1.0) {
        p(2) /= mod;
        p(3) /= mod;
      }
    }
    return p;
  }
};

struct LmOutcome {
  Eigen::VectorXd p;
  double chi2 = std::numeric_limits<double>::infinity();
  bool converged = false;
};

LmOutcome levenberg_marquardt(const Problem& prob, Eigen::VectorXd p0) {
  LmOutcome out;
  Eigen::VectorXd p = prob.clamp(std::move(p0));
  Eigen::VectorXd r = prob.residuals(p);
  double chi2 = r.squaredNorm();
  double mu = -1.0;
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::MatrixXd j = prob.jacobian(p);
    Eigen::MatrixXd jtj = j.transpose() * j;
    Eigen::VectorXd g = j.transpose() * r;
    if (g.cwiseAbs().maxCoeff() < 1e-12) {
      out.converged = true;
      break;
    }
    if (mu < 0) mu = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-12);
    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
      Eigen::VectorXd delta = a.ldlt().solve(-g);
      Eigen::VectorXd pt = prob.clamp(p + delta);
      Eigen::VectorXd rt = prob.residuals(pt);
      const double chi2t = rt.squaredNorm();
      if (chi2t < chi2) {
        const double gain = chi2 - chi2t;
        p = std::move(pt);
        r = std::move(rt);
        chi2 = chi2t;
        mu = std::max(mu / 3.0, 1e-12);
        stepped = true;
        if (gain < 1e-14 * (1.0 + chi2)) {
          out.converged = true;
          iter = 1000;
        }
        break;
      }
      mu *= 2.0;
      if (mu > 1e14) break;
    }
    if (!stepped) {
      out.converged = true;  // no further descent possible
      break;
    }
  }
  out.p = p;
  out.chi2 = chi2;
  return out;
}

/// Weighted linear solve for the coefficients of fixed-rate decays:
/// y ~ sum_k c_k * basis_k(N). Returns the coefficient vector.
Eigen::VectorXd linear_coefficients(const DecayDataset& data, bool complex_residuals,
                                    const std::vector<std::vector<cd>>& basis_cols) {
  const int nb = static_cast<int>(basis_cols.size());
  const int nr = static_cast<int>(data.points.size()) * (complex_residuals ? 2 : 1);
  Eigen::MatrixXd a(nr, nb);
  Eigen::VectorXd y(nr);
  int k = 0;
  for (std::size_t t = 0; t < data.points.size(); ++t) {
    const auto& pt = data.points[t];
    const double wre = pt.se_re > 0 ? 1.0 / pt.se_re : 1.0;
    for (int c = 0; c < nb; ++c) a(k, c) = basis_cols[c][t].real() * wre;
    y(k++) = pt.mean.real() * wre;
    if (complex_residuals) {
      const double wim = pt.se_im > 0 ? 1.0 / pt.se_im : 1.0;
      for (int c = 0; c < nb; ++c) a(k, c) = basis_cols[c][t].imag() * wim;
      y(k++) = pt.mean.imag() * wim;
    }
  }
  return a.colPivHouseholderQr().solve(y);
}

double estimate_tail_constant(const DecayDataset& data) {
  return data.points.back().mean.real();
}

/// Log-linear seed for the decay rate on |Re y - b0|.
double loglinear_lambda(const DecayDataset& data, double b0) {
  double sn = 0, sl = 0, snn = 0, snl = 0;
  int cnt = 0;
  for (const auto& pt : data.points) {
    const double s = std::abs(pt.mean.real() - b0);
    if (s < 1e-12) continue;
    const double l = std::log(s);
    sn += pt.N;
    sl += l;
    snn += static_cast<double>(pt.N) * pt.N;
    snl += pt.N * l;
    ++cnt;
  }
  if (cnt < 2) return 0.9;
  const double denom = cnt * snn - sn * sn;
  if (std::abs(denom) < 1e-12) return 0.9;
  const double slope = (cnt * snl - sn * sl) / denom;
  return std::min(0.999999, std::max(1e-4, std::exp(slope)));
}

std::vector<Eigen::VectorXd> make_starts(const DecayDataset& data, const FitModel& m) {
  std::vector<Eigen::VectorXd> starts;
  auto col_pow = [&](cd lam) {
    std::vector<cd> col;
    for (const auto& pt : data.points) col.push_back(cpow(lam, pt.N));
    return col;
  };
  auto col_const = [&]() {
    return std::vector<cd>(data.points.size(), cd(1.0, 0.0));
  };

  const double b_tail = estimate_tail_constant(data);
  const double lam_b = loglinear_lambda(data, b_tail);
  const double lam_0 = loglinear_lambda(data, 0.0);

  switch (m.form) {
    case FitForm::SingleExp: {
      if (!m.complex_params) {
        for (double lam : {lam_0, std::sqrt(lam_0), lam_0 * lam_0, 0.3, 0.5, 0.9, 0.99, 0.999}) {
          const auto c = linear_coefficients(data, false, {col_pow(lam)});
          starts.push_back((Eigen::VectorXd(2) << c(0), lam).finished());
        }
      } else {
        for (double r : {lam_0, 0.9, 0.99}) {
          for (int k = 0; k <= 8; ++k) {
            const double th = kPi * k / 8.0;
            const cd lam = std::polar(r, th);
            // complex coefficient, solved as two real unknowns
            std::vector<cd> re_col, im_col;
            for (const auto& pt : data.points) {
              const cd z = cpow(lam, pt.N);
              re_col.push_back(z);
              im_col.push_back(cd(0, 1) * z);
            }
            const auto c = linear_coefficients(data, true, {re_col, im_col});
            starts.push_back((Eigen::VectorXd(4) << c(0), c(1), lam.real(), lam.imag()).finished());
          }
        }
      }
      break;
    }
    case FitForm::ExpPlusConst: {
      for (double lam : {lam_b, std::sqrt(lam_b), lam_b * lam_b, 0.3, 0.5, 0.9, 0.99, 0.999}) {
        const auto c = linear_coefficients(data, false, {col_pow(lam), col_const()});
        starts.push_back((Eigen::VectorXd(3) << c(0), lam, c(1)).finished());
      }
      break;
    }
    case FitForm::DoubleExpReal: {
      const double l1 = lam_0;
      for (auto [a, b] : std::initializer_list<std::pair<double, double>>{
               {l1, 0.5 * l1},
               {l1, 0.8 * l1},
               {l1, 0.95 * l1},
               {std::sqrt(l1), l1 * l1},
               {0.99, 0.9},
               {0.95, 0.5},
               {0.9, 0.3},
               {l1, -0.5 * l1}}) {
        const auto c = linear_coefficients(data, false, {col_pow(a), col_pow(b)});
        starts.push_back((Eigen::VectorXd(4) << c(0), a, c(1), b).finished());
      }
      break;
    }
    case FitForm::DoubleExpConj: {
      for (double r : {lam_0, 0.9, 0.99}) {
        for (int k = 0; k <= 8; ++k) {
          const double th = kPi * k / 8.0;
          // 2 rho r^N cos(N th + phi) = a r^N cos(N th) + b r^N sin(N th)
          std::vector<cd> ca, cb;
          for (const auto& pt : data.points) {
            ca.push_back(ipow(r, pt.N) * std::cos(pt.N * th));
            cb.push_back(ipow(r, pt.N) * std::sin(pt.N * th));
          }
          std::vector<std::vector<cd>> cols{ca, cb};
          if (m.with_constant) cols.push_back(col_const());
          const auto c = linear_coefficients(data, false, cols);
          const double rho = 0.5 * std::hypot(c(0), c(1));
          const double phi = std::atan2(-c(1), c(0));
          Eigen::VectorXd p(m.with_constant ? 5 : 4);
          p << rho, r, th, phi;
          if (m.with_constant) p(4) = c(2);
          starts.push_back(p);
        }
      }
      break;
    }
  }
  return starts;
}

void bounds_for(const FitModel& m, Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
  const int np = num_params(m);
  lo.resize(np);
  hi.resize(np);
  switch (m.form) {
    case FitForm::SingleExp:
      if (!m.complex_params) {
        lo << -10, -1;
        hi << 10, 1;
      } else {
        lo << -10, -10, -1, -1;
        hi << 10, 10, 1, 1;
      }
      break;
    case FitForm::ExpPlusConst:
      lo << -10, -1, -2;
      hi << 10, 1, 2;
      break;
    case FitForm::DoubleExpReal:
      lo << -10, -1, -10, -1;
      hi << 10, 1, 10, 1;
      break;
    case FitForm::DoubleExpConj:
      lo.setConstant(-2 * kPi);
      hi.setConstant(2 * kPi);
      lo(0) = 0;
      hi(0) = 10;
      lo(1) = 0;
      hi(1) = 1;
      if (m.with_constant) {
        lo(4) = -2;
        hi(4) = 2;
      }
      break;
  }
}

}  // namespace

std::string form_name(const FitModel& m) {
  switch (m.form) {
    case FitForm::SingleExp:
      return m.complex_params ? "single_exp_complex" : "single_exp";
    case FitForm::ExpPlusConst:
      return "exp_plus_const";
    case FitForm::DoubleExpReal:
      return "double_exp_real";
    case FitForm::DoubleExpConj:
      return m.with_constant ? "double_exp_conj_const" : "double_exp_conj";
  }
  return "?";
}

int num_params(const FitModel& m) {
  switch (m.form) {
    case FitForm::SingleExp:
      return m.complex_params ? 4 : 2;
    case FitForm::ExpPlusConst:
      return 3;
    case FitForm::DoubleExpReal:
      return 4;
    case FitForm::DoubleExpConj:
      return m.with_constant ? 5 : 4;
  }
  return 0;
}

cd model_value(const FitModel& m, const std::vector<double>& p, int N) {
  switch (m.form) {
    case FitForm::SingleExp:
      if (!m.complex_params) return p[0] * ipow(p[1], N);
      return cd(p[0], p[1]) * cpow(cd(p[2], p[3]), N);
    case FitForm::ExpPlusConst:
      return p[0] * ipow(p[1], N) + p[2];
    case FitForm::DoubleExpReal:
      return p[0] * ipow(p[1], N) + p[2] * ipow(p[3], N);
    case FitForm::DoubleExpConj: {
      double v = 2.0 * p[0] * ipow(p[1], N) * std::cos(N * p[2] + p[3]);
      if (m.with_constant) v += p[4];
      return v;
    }
  }
  return 0.0;
}

cd FitResult::value(int N) const { return model_value(model, params, N); }

std::vector<cd> FitResult::lambdas() const {
  std::vector<cd> l;
  switch (model.form) {
    case FitForm::SingleExp:
      l.push_back(model.complex_params ? cd(params[2], params[3]) : cd(params[1], 0));
      break;
    case FitForm::ExpPlusConst:
      l.push_back(cd(params[1], 0));
      break;
    case FitForm::DoubleExpReal:
      l.push_back(cd(params[1], 0));
      l.push_back(cd(params[3], 0));
      break;
    case FitForm::DoubleExpConj: {
      const double th = std::abs(params[2]);
      l.push_back(std::polar(params[1], th));
      l.push_back(std::polar(params[1], -th));
      break;
    }
  }
  std::stable_sort(l.begin(), l.end(),
                   [](const cd& a, const cd& b) { return std::abs(a) > std::abs(b); });
  return l;
}

std::vector<cd> FitResult::coefficients() const {
  switch (model.form) {
    case FitForm::SingleExp:
      if (model.complex_params) return {cd(params[0], params[1])};
      return {cd(params[0], 0)};
    case FitForm::ExpPlusConst:
      return {cd(params[0], 0)};
    case FitForm::DoubleExpReal:
      return {cd(params[0], 0), cd(params[2], 0)};
    case FitForm::DoubleExpConj:
      return {std::polar(params[0], params[3]), std::polar(params[0], -params[3])};
  }
  return {};
}

double FitResult::constant() const {
  if (model.form == FitForm::ExpPlusConst) return params[2];
  if (model.form == FitForm::DoubleExpConj && model.with_constant) return params[4];
  return 0.0;
}

double FitResult::var_re_leading_lambda() const {
  switch (model.form) {
    case FitForm::SingleExp:
      return model.complex_params ? covariance(2, 2) : covariance(1, 1);
    case FitForm::ExpPlusConst:
      return covariance(1, 1);
    case FitForm::DoubleExpReal:
      return covariance(1, 1);
    case FitForm::DoubleExpConj: {
      // Re lambda = r cos(theta)
      const double c = std::cos(params[2]), s = std::sin(params[2]);
      Eigen::Vector2d grad(c, -params[1] * s);
      return grad.transpose() * covariance.block<2, 2>(1, 1) * grad;
    }
  }
  return 0.0;
}

double FitResult::var_sum_re_lambda() const {
  switch (model.form) {
    case FitForm::SingleExp:
      return var_re_leading_lambda();
    case FitForm::ExpPlusConst:
      return covariance(1, 1);
    case FitForm::DoubleExpReal:
      return covariance(1, 1) + covariance(3, 3) + 2 * covariance(1, 3);
    case FitForm::DoubleExpConj: {
      // sum = 2 r cos(theta)
      const double c = std::cos(params[2]), s = std::sin(params[2]);
      Eigen::Vector2d grad(2 * c, -2 * params[1] * s);
      return grad.transpose() * covariance.block<2, 2>(1, 1) * grad;
    }
  }
  return 0.0;
}

Eigen::Matrix2d FitResult::lambda_constant_covariance() const {
  if (model.form != FitForm::ExpPlusConst)
    throw NumericalError("lambda_constant_covariance: wrong model form");
  Eigen::Matrix2d c;
  c << covariance(1, 1), covariance(1, 2), covariance(2, 1), covariance(2, 2);
  return c;
}

FitResult fit_decay(const DecayDataset& data, const FitModel& model) {
  const int np = num_params(model);
  const bool cres = (model.form == FitForm::SingleExp && model.complex_params);
  const int nres = static_cast<int>(data.points.size()) * (cres ? 2 : 1);
  if (nres < np + 2)
    throw NumericalError("fit_decay: need at least 2 more data points than parameters");

  Problem prob{&data, model, cres, {}, {}};
  bounds_for(model, prob.lo, prob.hi);

  const auto starts = make_starts(data, model);
  std::vector<LmOutcome> outcomes(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(starts.size()); ++s)
    outcomes[s] = levenberg_marquardt(prob, starts[s]);

  std::size_t best = 0;
  for (std::size_t s = 1; s < outcomes.size(); ++s)
    if (outcomes[s].chi2 < outcomes[best].chi2 - 1e-12) best = s;
  const auto& win = outcomes[best];
  if (!std::isfinite(win.chi2))
    throw NumericalError("fit_decay: no start converged");

  double spread = 0.0;
  for (const auto& o : outcomes)
    if (std::isfinite(o.chi2)) spread = std::max(spread, o.chi2 - win.chi2);

  FitResult res;
  res.model = model;
  res.params.assign(win.p.data(), win.p.data() + win.p.size());
  res.chi2 = win.chi2;
  res.dof = nres - np;
  res.reduced_chi2 = win.chi2 / res.dof;
  res.converged = win.converged || win.chi2 < 1e-18;
  res.multistart_spread = spread;

  // covariance from the Jacobian at the optimum
  Eigen::MatrixXd j = prob.jacobian(win.p);
  Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jtj);
  const double emax = es.eigenvalues().maxCoeff();
  Eigen::VectorXd invd(np);
  for (int i = 0; i < np; ++i) {
    if (es.eigenvalues()(i) > 1e-12 * std::max(emax, 1.0)) {
      invd(i) = 1.0 / es.eigenvalues()(i);
    } else {
      invd(i) = 0.0;
      res.rank_deficient = true;
    }
  }
  res.covariance = es.eigenvectors() * invd.asDiagonal() * es.eigenvectors().transpose();
  res.stderrs.resize(np);
  for (int i = 0; i < np; ++i) res.stderrs[i] = std::sqrt(std::max(0.0, res.covariance(i, i)));

  // collapse detection for double decays
  if (model.form == FitForm::DoubleExpReal || model.form == FitForm::DoubleExpConj) {
    double intercept = 0.0;
    for (const auto& pt : data.points) intercept = std::max(intercept, std::abs(pt.mean.real()));
    const double floor = 1e-3 * std::max(intercept, 1e-12);
    if (model.form == FitForm::DoubleExpReal) {
      if (std::min(std::abs(res.params[0]), std::abs(res.params[2])) < floor)
        res.degenerate = true;
      if (std::abs(res.params[1] - res.params[3]) < 1e-6) res.degenerate = true;
    } else {
      if (2.0 * std::abs(res.params[0]) < floor) res.degenerate = true;
      if (std::abs(std::sin(res.params[2])) < 1e-6) res.degenerate = true;  // pair collapsed to real
    }
  }
  return res;
}

FitResult select_model(const DecayDataset& data, const std::vector<FitModel>& candidates) {
  if (candidates.size() < 2) throw NumericalError("select_model: need at least 2 candidates");
  std::vector<FitResult> fits;
  for (const auto& m : candidates) {
    try {
      fits.push_back(fit_decay(data, m));
    } catch (const NumericalError&) {
      // candidate failed outright; skip
    }
  }
  if (fits.empty()) throw NumericalError("select_model: all candidates failed to converge");

  std::size_t best = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    const double ratio = fits[i].reduced_chi2 / std::max(fits[best].reduced_chi2, 1e-300);
    if (ratio < 0.95) {
      best = i;
    } else if (ratio < 1.05 &&
               num_params(fits[i].model) < num_params(fits[best].model)) {
      best = i;  // tie: prefer fewer free parameters
    }
  }
  // a degenerate double fit that is not clearly better falls back to a
  // simpler candidate when one is on offer
  if (fits[best].degenerate) {
    for (std::size_t i = 0; i < fits.size(); ++i) {
      if (num_params(fits[i].model) < num_params(fits[best].model) &&
          fits[i].reduced_chi2 <= 1.05 * fits[best].reduced_chi2) {
        best = i;
        break;
      }
    }
  }
  return fits[best];
}

}  // namespace charb::fitting
