#include "charb/groups.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "charb/matchgate.hpp"

namespace charb::groups {

namespace {

using liouville::DensityVec;
using liouville::Superoperator;
using liouville::vectorize;

cd omega_pow(int k) { return std::polar(1.0, 2.0 * kPi * ((k % 3 + 3) % 3) / 3.0); }

Eigen::MatrixXcd qutrit_x() {
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(3, 3);
  for (int z = 0; z < 3; ++z) x((z + 1) % 3, z) = 1.0;
  return x;
}

Eigen::MatrixXcd qutrit_z() {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 3);
  for (int k = 0; k < 3; ++k) z(k, k) = omega_pow(k);
  return z;
}

Eigen::MatrixXcd matpow(const Eigen::MatrixXcd& m, int k) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

void canonical_phase(Eigen::MatrixXcd& u) {
  double maxmag = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j) maxmag = std::max(maxmag, std::abs(u(i, j)));
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if (std::abs(u(i, j)) >= maxmag - 1e-9) {
        u *= std::conj(u(i, j)) / std::abs(u(i, j));
        return;
      }
}

Eigen::MatrixXcd block_embed(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Eigen::VectorXcd unit(const Eigen::VectorXcd& v) { return v / v.norm(); }

}  // namespace

Superoperator subgroup_projector(const FiniteGroup& parent,
                                 const std::vector<std::uint32_t>& subgroup,
                                 const std::vector<cd>& chi, int irrep_dim, double tol) {
  if (subgroup.size() != chi.size())
    throw NumericalError("subgroup_projector: character table size mismatch");
  const int d2 = parent.dim() * parent.dim();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d2, d2);
  for (std::size_t k = 0; k < subgroup.size(); ++k)
    p += std::conj(chi[k]) * parent.super(subgroup[k]);
  p *= static_cast<double>(irrep_dim) / static_cast<double>(subgroup.size());
  if ((p * p - p).cwiseAbs().maxCoeff() > tol || (p - p.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw NumericalError("subgroup_projector: result is not an orthogonal projector");
  return {parent.dim(), std::move(p)};
}

std::vector<QutritCliffordElement> qutrit_clifford_enumerate() {
  const Eigen::MatrixXcd x = qutrit_x(), z = qutrit_z();
  const Eigen::MatrixXcd id3 = Eigen::MatrixXcd::Identity(3, 3);
  std::vector<QutritCliffordElement> out;
  out.reserve(216);
  for (int ax = 0; ax < 3; ++ax)
    for (int az = 0; az < 3; ++az)
      for (int bx = 0; bx < 3; ++bx)
        for (int bz = 0; bz < 3; ++bz) {
          if (((ax * bz - az * bx) % 3 + 3) % 3 != 1) continue;
          for (int ex = 0; ex < 3; ++ex)
            for (int ez = 0; ez < 3; ++ez) {
              const Eigen::MatrixXcd wx = omega_pow(ex) * matpow(x, ax) * matpow(z, bx);
              const Eigen::MatrixXcd wz = omega_pow(ez) * matpow(x, az) * matpow(z, bz);
              // U X = Wx U and U Z = Wz U, linear in vec(U)
              Eigen::MatrixXcd k(18, 9);
              k.topRows(9) = liouville::kron(id3, x.transpose()) - liouville::kron(wx, id3);
              k.bottomRows(9) = liouville::kron(id3, z.transpose()) - liouville::kron(wz, id3);
              Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k, Eigen::ComputeFullV);
              const auto& sv = svd.singularValues();
              if (sv(8) > 1e-8 || sv(7) < 1e-6)
                throw NumericalError("qutrit_clifford_enumerate: conjugation solve failed");
              Eigen::VectorXcd v = svd.matrixV().col(8);
              Eigen::MatrixXcd u(3, 3);
              for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) u(i, j) = v(i * 3 + j);
              u *= std::sqrt(3.0) / u.norm();
              canonical_phase(u);
              if (liouville::unitarity_defect(u) > 1e-10)
                throw NumericalError("qutrit_clifford_enumerate: solution not unitary");
              if ((u * x * u.adjoint() - wx).cwiseAbs().maxCoeff() > 1e-10 ||
                  (u * z * u.adjoint() - wz).cwiseAbs().maxCoeff() > 1e-10)
                throw NumericalError("qutrit_clifford_enumerate: conjugation check failed");
              out.push_back({ax, az, bx, bz, ex, ez, u});
            }
        }
  if (out.size() != 216)
    throw NumericalError("qutrit_clifford_enumerate: expected 216 elements");
  return out;
}

SubspaceCatalog make_subspace_catalog() {
  SubspaceCatalog cat;
  const auto els = qutrit_clifford_enumerate();

  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
  const double s2 = 1.0 / std::sqrt(2.0);
  v(0, 0) = 1.0;                  // |00>
  v(1, 1) = s2;  v(2, 1) = s2;    // |T>
  v(3, 2) = 1.0;                  // |11>
  v(1, 3) = s2;  v(2, 3) = -s2;   // |S>
  cat.block_basis = v;

  std::vector<Eigen::MatrixXcd> us;
  us.reserve(648);
  for (const auto& el : els) {
    const cd root = std::pow(el.u.determinant(), 1.0 / 3.0);
    for (int eta = 0; eta < 3; ++eta) {
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
      a.topLeftCorner(3, 3) = el.u;
      a(3, 3) = omega_pow(eta) * root;
      us.push_back(v * a * v.adjoint());
      cat.meta.push_back({el.ax, el.az, el.bx, el.bz, el.ex, el.ez, eta});
    }
  }
  cat.group = FiniteGroup::from_unitaries(4, std::move(us));

  std::vector<Eigen::MatrixXcd> qus;
  for (const auto& el : els) qus.push_back(el.u);
  cat.qutrit_group = FiniteGroup::from_unitaries(3, std::move(qus));

  // Subgroups Gbar1 = {X^a Z^b (+) w^eta} (M = 1) and Gbar2 (a = 0 as well).
  std::vector<std::uint32_t> g1, g2;
  for (std::uint32_t i = 0; i < cat.group.size(); ++i) {
    const auto& m = cat.meta[i];
    if (m.ax == 1 && m.az == 0 && m.bx == 0 && m.bz == 1) {
      g1.push_back(i);
      if (m.ez == 0) g2.push_back(i);
    }
  }
  if (g1.size() != 27 || g2.size() != 9)
    throw NumericalError("make_subspace_catalog: unexpected subgroup sizes");

  // With M = 1 the labels read back as a = -ez, b = ex (mod 3).
  auto chi_g1_tperp = [&](std::uint32_t i) { return omega_pow(cat.meta[i].ez); };
  auto chi_g2_ts = [&](std::uint32_t i) { return omega_pow(cat.meta[i].ex - cat.meta[i].eta); };

  const Eigen::MatrixXcd e00 = Eigen::Vector4cd::Unit(0) * Eigen::Vector4cd::Unit(0).adjoint();
  const Eigen::MatrixXcd e01 = Eigen::Vector4cd::Unit(1) * Eigen::Vector4cd::Unit(1).adjoint();
  Eigen::MatrixXcd m_diag = Eigen::MatrixXcd::Zero(4, 4);
  m_diag(0, 0) = 1.0;
  m_diag(3, 3) = 1.0;  // |00><00| + |11><11|

  {
    FinitePlan p;
    p.id = "0";
    p.irrep_dim = 1;
    p.multiplicity = 2;
    p.subgroup = g1;
    p.chi.assign(g1.size(), cd(1, 0));
    p.divisor = 1.0;
    p.projector = subgroup_projector(cat.group, p.subgroup, p.chi, 1);
    p.rho = vectorize(e00);
    p.meas = vectorize(m_diag);
    p.fit.primary = {fitting::FitForm::ExpPlusConst, false, false};
    cat.plans.push_back(std::move(p));
  }
  {
    FinitePlan p;
    p.id = "Tperp";
    p.irrep_dim = 8;
    p.multiplicity = 1;
    p.subgroup = g1;
    for (auto i : g1) p.chi.push_back(chi_g1_tperp(i));
    p.divisor = 1.0;
    p.projector = subgroup_projector(cat.group, p.subgroup, p.chi, 1);
    p.rho = vectorize(e00);
    p.meas = vectorize(m_diag);
    p.fit.primary = {fitting::FitForm::SingleExp, false, false};
    p.post_rotation = std::polar(1.0, kPi / 3.0);
    cat.plans.push_back(std::move(p));
  }
  {
    FinitePlan p;
    p.id = "TS";
    p.irrep_dim = 3;
    p.multiplicity = 1;
    p.subgroup = g2;
    for (auto i : g2) p.chi.push_back(chi_g2_ts(i));
    p.divisor = 1.0;
    p.projector = subgroup_projector(cat.group, p.subgroup, p.chi, 1);
    p.rho = vectorize(e01);
    p.meas = vectorize(e01);
    p.fit.primary = {fitting::FitForm::SingleExp, true, false};
    cat.plans.push_back(std::move(p));
  }
  {
    FinitePlan p;
    p.id = "ST";
    p.irrep_dim = 3;
    p.multiplicity = 1;
    p.subgroup = g2;
    for (auto i : g2) p.chi.push_back(std::conj(chi_g2_ts(i)));
    p.divisor = 1.0;
    p.projector = subgroup_projector(cat.group, p.subgroup, p.chi, 1);
    p.rho = vectorize(e01);
    p.meas = vectorize(e01);
    p.fit.primary = {fitting::FitForm::SingleExp, true, false};
    cat.plans.push_back(std::move(p));
  }

  // Irrep table of the natural representation (Table of subrepresentations).
  const Eigen::MatrixXcd proj_t = v * Eigen::Vector4cd(1, 1, 1, 0).asDiagonal().toDenseMatrix().cast<cd>() * v.adjoint();
  const Eigen::MatrixXcd proj_s = v * Eigen::Vector4cd(0, 0, 0, 1).asDiagonal().toDenseMatrix().cast<cd>() * v.adjoint();
  {
    reptheory::IrrepDescriptor ir;
    ir.id = "triv";
    ir.dim = 1;
    ir.multiplicity = 2;
    Eigen::MatrixXcd b1(16, 1), b2(16, 1);
    b1.col(0) = vectorize(proj_t).v / std::sqrt(3.0);
    b2.col(0) = vectorize(proj_s).v;
    ir.copy_bases = {b1, b2};
    cat.irreps.push_back(std::move(ir));
  }
  {
    reptheory::IrrepDescriptor ir;
    ir.id = "Tperp";
    ir.dim = 8;
    ir.multiplicity = 1;
    Eigen::MatrixXcd b(16, 8);
    const Eigen::MatrixXcd x = qutrit_x(), z = qutrit_z();
    int col = 0;
    for (int a = 0; a < 3; ++a)
      for (int bq = 0; bq < 3; ++bq) {
        if (a == 0 && bq == 0) continue;
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(4, 4);
        op.topLeftCorner(3, 3) = matpow(x, a) * matpow(z, bq);
        b.col(col++) = vectorize(v * op * v.adjoint()).v / std::sqrt(3.0);
      }
    ir.copy_bases = {b};
    cat.irreps.push_back(std::move(ir));
  }
  {
    reptheory::IrrepDescriptor ts, st;
    ts.id = "TS";
    st.id = "ST";
    ts.dim = st.dim = 3;
    ts.multiplicity = st.multiplicity = 1;
    Eigen::MatrixXcd bts(16, 3), bst(16, 3);
    for (int k = 0; k < 3; ++k) {
      const Eigen::MatrixXcd ket_t = v.col(k) * v.col(3).adjoint();
      bts.col(k) = vectorize(ket_t).v;
      bst.col(k) = vectorize(ket_t.adjoint()).v;
    }
    ts.copy_bases = {bts};
    st.copy_bases = {bst};
    cat.irreps.push_back(std::move(ts));
    cat.irreps.push_back(std::move(st));
  }

  // Full-group character tables of the nontrivial subrepresentations.
  for (std::uint32_t i = 0; i < cat.group.size(); ++i) {
    const Eigen::MatrixXcd b = v.adjoint() * cat.group.unitary(i) * v;
    const cd tr_t = b.topLeftCorner(3, 3).trace();
    const cd tr_s = b(3, 3);
    cat.chi_tperp.push_back(std::norm(tr_t) - 1.0);
    cat.chi_ts.push_back(tr_t * std::conj(tr_s));
    cat.chi_st.push_back(std::conj(tr_t) * tr_s);
  }
  return cat;
}

LeakageCatalog make_leakage_catalog() {
  LeakageCatalog cat;
  Eigen::MatrixXcd x(2, 2), y(2, 2), z(2, 2), h(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cd(0, -1), cd(0, 1), 0;
  z << 1, 0, 0, -1;
  h = (x + z) / std::sqrt(2.0);
  const Eigen::MatrixXcd rx = block_embed(x, z);
  const Eigen::MatrixXcd rz = block_embed(z, h);

  cat.group = FiniteGroup::generate(4, {rx, rz}, 64);
  if (cat.group.size() != 16)
    throw NumericalError("make_leakage_catalog: natural-representation closure is not 16 elements");

  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd zero2 = Eigen::MatrixXcd::Zero(2, 2);
  auto emb1 = [&](const Eigen::MatrixXcd& op) { return block_embed(op, zero2); };
  auto emb2 = [&](const Eigen::MatrixXcd& op) { return block_embed(zero2, op); };

  {
    FinitePlan p;
    p.id = "L0";
    p.irrep_dim = 1;
    p.multiplicity = 2;
    p.subgroup.resize(cat.group.size());
    for (std::uint32_t i = 0; i < cat.group.size(); ++i) p.subgroup[i] = i;
    p.chi.assign(cat.group.size(), cd(1, 0));
    p.divisor = 1.0;
    p.projector = subgroup_projector(cat.group, p.subgroup, p.chi, 1);
    p.rho = vectorize(emb1((id2 + z) / 2.0));  // |0><0| in H1
    p.meas = vectorize(emb1(id2));
    p.fit.primary = {fitting::FitForm::ExpPlusConst, false, false};
    cat.plan0 = std::move(p);
  }

  auto one_dim = [&](const std::string& id, std::vector<Eigen::MatrixXcd> ops) {
    reptheory::IrrepDescriptor ir;
    ir.id = id;
    ir.dim = 1;
    ir.multiplicity = static_cast<int>(ops.size());
    for (auto& op : ops) {
      Eigen::MatrixXcd b(16, 1);
      b.col(0) = unit(vectorize(op).v);
      ir.copy_bases.push_back(b);
    }
    return ir;
  };
  cat.irreps.push_back(one_dim("triv", {emb1(id2), emb2(id2)}));
  cat.irreps.push_back(one_dim("sign_x", {emb1(x)}));
  cat.irreps.push_back(one_dim("sign_z", {emb1(z)}));
  cat.irreps.push_back(one_dim("sign_y", {emb1(y), emb2(y)}));
  {
    reptheory::IrrepDescriptor ir;
    ir.id = "leak_adj";
    ir.dim = 2;
    ir.multiplicity = 1;
    Eigen::MatrixXcd b(16, 2);
    b.col(0) = unit(vectorize(emb2(x)).v);
    b.col(1) = unit(vectorize(emb2(z)).v);
    ir.copy_bases = {b};
    cat.irreps.push_back(std::move(ir));
  }

  // Cross-block irreps: one copy inside H1 (x) H2, an isomorphic copy in
  // H2 (x) H1. Copies are aligned through eigenvectors of the order-8
  // rotation c = R_X R_Z and the reflection R_X.
  const std::uint32_t irx = cat.group.find(rx);
  const std::uint32_t irz = cat.group.find(rz);
  const std::uint32_t ic = cat.group.product(irx, irz);
  const Eigen::MatrixXcd& uc = cat.group.super(ic);
  const Eigen::MatrixXcd& ur = cat.group.super(irx);

  auto selector = [&](bool upper) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(16, 4);
    int col = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const int row = upper ? (i * 4 + (j + 2)) : ((i + 2) * 4 + j);
        b(row, col++) = 1.0;
      }
    return b;
  };
  auto cross_copy = [&](const Eigen::MatrixXcd& sel, cd target) {
    const Eigen::MatrixXcd mc = sel.adjoint() * uc * sel;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mc);
    int best = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs(es.eigenvalues()(i) - target) < std::abs(es.eigenvalues()(best) - target))
        best = i;
    if (std::abs(es.eigenvalues()(best) - target) > 1e-6)
      throw NumericalError("make_leakage_catalog: expected cross-block eigenvalue missing");
    Eigen::MatrixXcd b(16, 2);
    b.col(0) = unit(sel * es.eigenvectors().col(best));
    b.col(1) = ur * b.col(0);
    return b;
  };
  const cd mu1 = std::polar(1.0, kPi / 4.0), mu3 = std::polar(1.0, 3.0 * kPi / 4.0);
  {
    reptheory::IrrepDescriptor ir;
    ir.id = "cross_a";
    ir.dim = 2;
    ir.multiplicity = 2;
    ir.copy_bases = {cross_copy(selector(true), mu1), cross_copy(selector(false), mu1)};
    cat.irreps.push_back(std::move(ir));
  }
  {
    reptheory::IrrepDescriptor ir;
    ir.id = "cross_b";
    ir.dim = 2;
    ir.multiplicity = 2;
    ir.copy_bases = {cross_copy(selector(true), mu3), cross_copy(selector(false), mu3)};
    cat.irreps.push_back(std::move(ir));
  }
  return cat;
}

DensityVec monomial_vector(const std::vector<int>& s, int n) {
  const int dim = 1 << n;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(dim, dim);
  for (int k : s) op = op * matchgate::majorana(k, n);
  return vectorize(op / std::pow(2.0, n / 2.0));
}

std::pair<std::vector<int>, int> hodge_complement(const std::vector<int>& s, int n) {
  std::vector<bool> in(2 * n + 1, false);
  for (int k : s) in[k] = true;
  std::vector<int> comp;
  for (int k = 1; k <= 2 * n; ++k)
    if (!in[k]) comp.push_back(k);
  // parity of the permutation (s, comp) -> (1..2n): inversions are pairs
  // (a in s, b in comp) with a > b
  long long inversions = 0;
  for (int a : s)
    for (int b : comp)
      if (a > b) ++inversions;
  return {comp, (inversions % 2 == 0) ? 1 : -1};
}

namespace {

std::vector<std::vector<int>> subsets_of_size(int n2, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n2; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

MatchgateCatalog make_matchgate_catalog(int n) {
  if (n < 2) throw ConfigError("make_matchgate_catalog: need n >= 2");
  MatchgateCatalog cat;
  cat.n = n;
  const int dim = 1 << n;
  const int n2 = 2 * n;

  // Diagonal subgroup: sign patterns with product +1.
  std::vector<Eigen::MatrixXcd> subs;
  for (int bits = 0; bits < (1 << (n2 - 1)); ++bits) {
    std::vector<int> sigma(n2, 1);
    int prod = 1;
    for (int b = 0; b < n2 - 1; ++b) {
      sigma[b] = (bits >> b) & 1 ? -1 : 1;
      prod *= sigma[b];
    }
    sigma[n2 - 1] = prod;
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n2, n2);
    for (int k = 0; k < n2; ++k) r(k, k) = sigma[k];
    subs.push_back(matchgate::unitary_from_rotation(r));
    cat.subgroup_sigmas.push_back(std::move(sigma));
  }
  cat.diagonal_subgroup = FiniteGroup::from_unitaries(dim, std::move(subs));

  std::vector<std::uint32_t> all(cat.diagonal_subgroup.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  auto chi_for = [&](int i) {
    std::vector<cd> chi;
    for (const auto& sig : cat.subgroup_sigmas) {
      int v = 1;
      for (int j = 0; j < i; ++j) v *= sig[j];
      chi.push_back(cd(v, 0));
    }
    return chi;
  };

  // Single-qubit operators as full-register matrices.
  Eigen::MatrixXcd x1(2, 2), z1(2, 2);
  x1 << 0, 1, 1, 0;
  z1 << 1, 0, 0, -1;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  auto on_qubit = [&](const Eigen::MatrixXcd& op, int q) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int j = 1; j <= n; ++j) out = liouville::kron(out, j == q ? op : id2);
    return out;
  };
  const Eigen::MatrixXcd idn = Eigen::MatrixXcd::Identity(dim, dim);

  Eigen::VectorXcd ket0 = Eigen::VectorXcd::Zero(dim);
  ket0(0) = 1.0;

  for (int i = 0; i <= n; ++i) {
    MatchgatePlan p;
    p.id = "mg" + std::to_string(i);
    p.i = i;
    p.irrep_dim = (i < n) ? static_cast<int>(binom(n2, i)) : static_cast<int>(binom(n2, n) / 2);
    p.multiplicity = (i < n) ? 2 : 1;
    p.divisor = 1.0;
    p.projector = subgroup_projector(cat.diagonal_subgroup, all, chi_for(i), 1);

    if (i % 2 == 1) {
      const int k = (i + 1) / 2;
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1);
      psi(0) = 1.0;
      Eigen::VectorXcd plus(2), zero(2);
      plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      zero << 1.0, 0.0;
      for (int j = 1; j <= n; ++j) {
        Eigen::VectorXcd f = (j == k) ? plus : zero;
        Eigen::VectorXcd next(psi.size() * 2);
        for (Eigen::Index a = 0; a < psi.size(); ++a)
          for (int b = 0; b < 2; ++b) next(a * 2 + b) = psi(a) * f(b);
        psi = next;
      }
      p.rho = vectorize(psi * psi.adjoint());
      p.meas = vectorize((on_qubit(x1, k) + idn) / 2.0);
    } else {
      const int k = (i == 0) ? n : i / 2;  // i = 0 pairs with the full parity
      p.rho = vectorize(ket0 * ket0.adjoint());
      Eigen::MatrixXcd zprod = idn;
      for (int q = n - k + 1; q <= n; ++q) zprod = zprod * on_qubit(z1, q);
      p.meas = vectorize((zprod + idn) / 2.0);
    }

    if (i == 0) {
      p.fit.primary = {fitting::FitForm::ExpPlusConst, false, false};
    } else if (i == n) {
      p.fit.primary = {(n % 2 == 1) ? fitting::FitForm::DoubleExpConj
                                    : fitting::FitForm::DoubleExpReal,
                       false, false};
    } else {
      p.fit.primary = {fitting::FitForm::DoubleExpConj, false, false};
      p.fit.model_select = true;
    }
    cat.plans.push_back(std::move(p));
  }

  // Irrep table: degree-i monomial spaces, paired with their Hodge images.
  for (int i = 0; i < n; ++i) {
    reptheory::IrrepDescriptor ir;
    ir.id = "w" + std::to_string(i);
    ir.dim = static_cast<int>(binom(n2, i));
    ir.multiplicity = 2;
    Eigen::MatrixXcd b1(dim * dim, ir.dim), b2(dim * dim, ir.dim);
    const auto sets = subsets_of_size(n2, i);
    for (std::size_t c = 0; c < sets.size(); ++c) {
      b1.col(c) = monomial_vector(sets[c], n).v;
      const auto [comp, sign] = hodge_complement(sets[c], n);
      b2.col(c) = static_cast<double>(sign) * monomial_vector(comp, n).v;
    }
    ir.copy_bases = {b1, b2};
    cat.irreps.push_back(std::move(ir));
  }
  {
    const cd in = std::pow(cd(0, 1), n);
    const auto sets = subsets_of_size(n2, n);
    std::vector<std::vector<int>> firsts;
    for (const auto& s : sets)
      if (s[0] == 1) firsts.push_back(s);
    reptheory::IrrepDescriptor ra, rb;
    ra.id = "w" + std::to_string(n) + "a";
    rb.id = "w" + std::to_string(n) + "b";
    ra.dim = rb.dim = static_cast<int>(binom(n2, n) / 2);
    ra.multiplicity = rb.multiplicity = 1;
    Eigen::MatrixXcd ba(dim * dim, ra.dim), bb(dim * dim, rb.dim);
    for (std::size_t c = 0; c < firsts.size(); ++c) {
      const auto [comp, sign] = hodge_complement(firsts[c], n);
      const Eigen::VectorXcd vs = monomial_vector(firsts[c], n).v;
      const Eigen::VectorXcd vc = monomial_vector(comp, n).v;
      ba.col(c) = (vs + in * static_cast<double>(sign) * vc) / std::sqrt(2.0);
      bb.col(c) = (vs - in * static_cast<double>(sign) * vc) / std::sqrt(2.0);
    }
    ra.copy_bases = {ba};
    rb.copy_bases = {bb};
    cat.irreps.push_back(std::move(ra));
    cat.irreps.push_back(std::move(rb));
  }
  return cat;
}

}  // namespace charb::groups
