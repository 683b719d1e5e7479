#include "charb/matchgate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace charb::matchgate {

namespace {
constexpr double kPruneTheta = 1e-12;

int qubit_of(int majorana_index) { return (majorana_index + 1) / 2; }  // 1-based

std::uint64_t qubit_mask(int q, int n) { return 1ull << (n - q); }
}  // namespace

bool is_nearest_neighbor(int ell, int m) { return qubit_of(m) - qubit_of(ell) <= 1; }

Eigen::MatrixXcd majorana(int k, int n) {
  if (k < 1 || k > 2 * n) throw NumericalError("majorana: index out of range");
  const Eigen::MatrixXcd x = (Eigen::MatrixXcd(2, 2) << 0, 1, 1, 0).finished();
  const Eigen::MatrixXcd y = (Eigen::MatrixXcd(2, 2) << 0, cd(0, -1), cd(0, 1), 0).finished();
  const Eigen::MatrixXcd z = (Eigen::MatrixXcd(2, 2) << 1, 0, 0, -1).finished();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const int q = qubit_of(k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 1; j <= n; ++j) {
    const Eigen::MatrixXcd* factor = &id;
    if (j < q)
      factor = &z;
    else if (j == q)
      factor = (k % 2 == 1) ? &x : &y;
    out = liouville::kron(out, *factor);
  }
  return out;
}

MajoranaPairAction majorana_pair_action(int ell, int m, int n) {
  // Symbolic product of the two Jordan-Wigner strings in X(x)Z(z) form,
  // where P = phase * X(xmask) * Z(zmask).
  if (!(ell >= 1 && ell < m && m <= 2 * n))
    throw NumericalError("majorana_pair_action: bad indices");
  auto single = [n](int k) {
    MajoranaPairAction p;
    const int q = qubit_of(k);
    for (int j = 1; j < q; ++j) p.zmask |= qubit_mask(j, n);
    p.xmask = qubit_mask(q, n);
    if (k % 2 == 0) {  // Y = i X Z
      p.zmask |= qubit_mask(q, n);
      p.phase = cd(0, 1);
    }
    return p;
  };
  MajoranaPairAction a = single(ell), b = single(m);
  MajoranaPairAction out;
  // X(xa)Z(za) X(xb)Z(zb) = (-1)^{|za & xb|} X(xa^xb) Z(za^zb)
  int swaps = __builtin_popcountll(a.zmask & b.xmask) & 1;
  out.xmask = a.xmask ^ b.xmask;
  out.zmask = a.zmask ^ b.zmask;
  out.phase = a.phase * b.phase * (swaps ? -1.0 : 1.0);
  return out;
}

Eigen::MatrixXd givens_matrix(int dim, int ell, int m, double theta) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
  const int a = ell - 1, b = m - 1;
  const double c = std::cos(theta), s = std::sin(theta);
  r(a, a) = c;
  r(a, b) = s;
  r(b, a) = -s;
  r(b, b) = c;
  return r;
}

std::vector<MajoranaRotation> hoffman_decompose(const Eigen::MatrixXd& r) {
  const int dim = static_cast<int>(r.rows());
  if (r.cols() != dim || dim % 2 != 0)
    throw NumericalError("hoffman_decompose: need a square even-dimension matrix");
  if ((r.transpose() * r - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("hoffman_decompose: input not orthogonal within 1e-10");
  if (r.determinant() < 0.0)
    throw NumericalError("hoffman_decompose: det = -1, not a proper rotation");

  Eigen::MatrixXd a = r;
  std::vector<MajoranaRotation> out;
  for (int j = 0; j < dim - 1; ++j) {
    for (int i = j + 1; i < dim; ++i) {
      const double x = a(j, j), y = a(i, j);
      if (std::abs(y) < 1e-14) continue;
      const double theta = std::atan2(y, x);
      const double c = std::cos(theta), s = std::sin(theta);
      // rotate rows (j, i): pivot becomes hypot(x, y) > 0
      Eigen::RowVectorXd rj = c * a.row(j) + s * a.row(i);
      Eigen::RowVectorXd ri = -s * a.row(j) + c * a.row(i);
      a.row(j) = rj;
      a.row(i) = ri;
      if (std::abs(theta) > kPruneTheta) out.push_back({j + 1, i + 1, -theta});
    }
  }
  // Columns untouched by any elimination can leave -1 pivots; det = +1
  // guarantees they pair up. A pi rotation clears each pair.
  std::vector<int> flipped;
  for (int j = 0; j < dim; ++j)
    if (a(j, j) < 0) flipped.push_back(j + 1);
  for (std::size_t k = 0; k + 1 < flipped.size(); k += 2)
    out.push_back({flipped[k], flipped[k + 1], kPi});
  return out;
}

std::vector<MajoranaRotation> route_rotation(int ell, int m, double theta, int n) {
  if (!(ell >= 1 && ell < m && m <= 2 * n))
    throw NumericalError("route_rotation: bad indices");
  const int s = qubit_of(m) - qubit_of(ell) - 1;
  if (s <= 0) return {{ell, m, theta}};
  std::vector<MajoranaRotation> out;
  out.reserve(2 * s + 1);
  for (int k = 1; k <= s; ++k) out.push_back({ell + 2 * (k - 1), ell + 2 * k, kPi / 2});
  out.push_back({ell + 2 * s, m, theta});
  for (int k = s; k >= 1; --k) out.push_back({ell + 2 * (k - 1), ell + 2 * k, -kPi / 2});
  return out;
}

Eigen::MatrixXcd rotation_unitary(const MajoranaRotation& g, int n) {
  if (!is_nearest_neighbor(g.ell, g.m))
    throw NumericalError("rotation_unitary: gate is not nearest-neighbor; route it first");
  const int dim = 1 << n;
  const MajoranaPairAction p = majorana_pair_action(g.ell, g.m, n);
  const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    u(r, r) = c;
    const int rr = static_cast<int>(r ^ p.xmask);
    u(r, rr) -= s * p.coeff(rr);
  }
  return u;
}

MatchgateCircuit compile(const Eigen::MatrixXd& r) {
  const int n = static_cast<int>(r.rows()) / 2;
  MatchgateCircuit circ{n, {}};
  for (const auto& g : hoffman_decompose(r)) {
    auto routed = route_rotation(g.ell, g.m, g.theta, n);
    circ.gates.insert(circ.gates.end(), routed.begin(), routed.end());
  }
  if (circ.gates.size() > static_cast<std::size_t>(4 * n * n * n))
    throw NumericalError("compile: gate count exceeds 4n^3 bound");
  return circ;
}

Eigen::MatrixXcd circuit_unitary(const MatchgateCircuit& c) {
  const int dim = 1 << c.n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd next(dim, dim);
  for (const auto& g : c.gates) {
    const MajoranaPairAction p = majorana_pair_action(g.ell, g.m, c.n);
    const double cc = std::cos(g.theta / 2), ss = std::sin(g.theta / 2);
    for (int r = 0; r < dim; ++r) {
      const int rr = static_cast<int>(r ^ p.xmask);
      next.row(r) = cc * u.row(r) - ss * p.coeff(rr) * u.row(rr);
    }
    u.swap(next);
  }
  return u;
}

Eigen::MatrixXcd unitary_from_rotation(const Eigen::MatrixXd& r) {
  return circuit_unitary(compile(r));
}

Eigen::MatrixXd circuit_rotation(const MatchgateCircuit& c) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2 * c.n, 2 * c.n);
  Eigen::MatrixXd g(2 * c.n, 2 * c.n);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    // left-multiply accumulates the product in gate-list order
    g = givens_matrix(2 * c.n, it->ell, it->m, it->theta);
    r = g * r;
  }
  return r;
}

Eigen::MatrixXd induced_rotation(const Eigen::MatrixXcd& u) {
  const int dim = static_cast<int>(u.rows());
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim) throw NumericalError("induced_rotation: dimension not a power of 2");
  std::vector<Eigen::MatrixXcd> c(2 * n);
  for (int k = 0; k < 2 * n; ++k) c[k] = majorana(k + 1, n);
  Eigen::MatrixXd r(2 * n, 2 * n);
  for (int l = 0; l < 2 * n; ++l) {
    Eigen::MatrixXcd conj = u * c[l] * u.adjoint();
    Eigen::MatrixXcd resid = conj;
    for (int m = 0; m < 2 * n; ++m) {
      cd t = (c[m] * conj).trace() / static_cast<double>(dim);
      r(l, m) = t.real();
      resid -= t * c[m];
    }
    if (resid.norm() > 1e-6 * conj.norm())
      throw NumericalError("induced_rotation: conjugation leaves the Majorana span");
  }
  if ((r.transpose() * r - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() > 1e-8)
    throw NumericalError("induced_rotation: result not orthogonal within 1e-8");
  return r;
}

std::string serialize_circuit(const MatchgateCircuit& c) {
  std::string out = "matchgate-circuit v1 n=" + std::to_string(c.n) + "\n";
  char line[96];
  for (const auto& g : c.gates) {
    std::snprintf(line, sizeof(line), "%d %d %.17g\n", g.ell, g.m, g.theta);
    out += line;
  }
  return out;
}

MatchgateCircuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string word, version;
  in >> word >> version;
  if (word != "matchgate-circuit" || version != "v1")
    throw ConfigError("parse_circuit: bad header");
  std::string nfield;
  in >> nfield;
  if (nfield.rfind("n=", 0) != 0) throw ConfigError("parse_circuit: missing n=");
  MatchgateCircuit c;
  c.n = std::stoi(nfield.substr(2));
  MajoranaRotation g;
  while (in >> g.ell >> g.m >> g.theta) {
    if (!is_nearest_neighbor(g.ell, g.m))
      throw ConfigError("parse_circuit: non-nearest-neighbor gate");
    c.gates.push_back(g);
  }
  return c;
}

}  // namespace charb::matchgate
