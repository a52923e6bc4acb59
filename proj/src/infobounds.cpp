#include "qsec/infobounds.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace qsec {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// I(X;Y) from an explicit matrix of joint probabilities.
double mi_table(const std::vector<std::vector<double>>& pxy) {
  const size_t nx = pxy.size();
  if (nx == 0) return 0.0;
  const size_t ny = pxy[0].size();
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  double total = 0.0;
  for (size_t x = 0; x < nx; ++x)
    for (size_t y = 0; y < ny; ++y) {
      px[x] += pxy[x][y];
      py[y] += pxy[x][y];
      total += pxy[x][y];
    }
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (size_t x = 0; x < nx; ++x)
    for (size_t y = 0; y < ny; ++y) {
      double p = pxy[x][y];
      if (p <= 0.0) continue;
      h += p * std::log2(p * total / (px[x] * py[y]));
    }
  return std::max(h / total, 0.0);
}

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<int> dims, std::vector<double> table)
    : dims_(std::move(dims)), table_(std::move(table)) {
  std::size_t want = 1;
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("DiscreteJoint: axis size must be positive");
    want *= static_cast<std::size_t>(d);
  }
  if (want != table_.size()) throw std::invalid_argument("DiscreteJoint: table size mismatch");
  double sum = 0.0;
  for (double v : table_) {
    if (v < -1e-15) throw std::invalid_argument("DiscreteJoint: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteJoint: entries sum to " + std::to_string(sum));
}

std::size_t DiscreteJoint::flat(const std::vector<int>& idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("DiscreteJoint: bad index arity");
  std::size_t f = 0;
  for (size_t a = 0; a < dims_.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= dims_[a]) throw std::invalid_argument("DiscreteJoint: index range");
    f = f * static_cast<std::size_t>(dims_[a]) + static_cast<std::size_t>(idx[a]);
  }
  return f;
}

double conditional_mi(const DiscreteJoint& joint, const std::vector<int>& xs,
                      const std::vector<int>& ys, const std::vector<int>& zs) {
  const auto& dims = joint.dims();
  auto group_size = [&](const std::vector<int>& axes) {
    std::size_t s = 1;
    for (int a : axes) s *= static_cast<std::size_t>(dims[a]);
    return s;
  };
  const std::size_t nx = group_size(xs), ny = group_size(ys), nz = group_size(zs);
  auto group_index = [&](const std::vector<int>& full, const std::vector<int>& axes) {
    std::size_t g = 0;
    for (int a : axes) g = g * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(full[a]);
    return g;
  };

  // collapsed p(z, x, y), everything else marginalized
  std::vector<std::vector<std::vector<double>>> pzxy(
      nz, std::vector<std::vector<double>>(nx, std::vector<double>(ny, 0.0)));
  std::vector<int> idx(dims.size(), 0);
  const auto& t = joint.table();
  for (std::size_t f = 0; f < t.size(); ++f) {
    pzxy[group_index(idx, zs)][group_index(idx, xs)][group_index(idx, ys)] += t[f];
    for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  double cmi = 0.0;
  for (std::size_t z = 0; z < nz; ++z) {
    double pz = 0.0;
    for (const auto& row : pzxy[z])
      for (double v : row) pz += v;
    if (pz <= 0.0) continue;
    cmi += pz * mi_table(pzxy[z]);
  }
  return cmi;
}

double mutual_information(const DiscreteJoint& joint) {
  if (joint.dims().size() != 2) throw std::invalid_argument("mutual_information: need 2 axes");
  return conditional_mi(joint, {0}, {1}, {});
}

double conditional_mi(const DiscreteJoint& joint3, int condition_axis) {
  if (joint3.dims().size() != 3) throw std::invalid_argument("conditional_mi: need 3 axes");
  std::vector<int> rest;
  for (int a = 0; a < 3; ++a)
    if (a != condition_axis) rest.push_back(a);
  return conditional_mi(joint3, {rest[0]}, {rest[1]}, {condition_axis});
}

QuantumSource::QuantumSource(std::vector<std::pair<double, DensityMatrix>> it) : items(std::move(it)) {
  if (items.empty()) throw std::invalid_argument("QuantumSource: empty");
  double sum = 0.0;
  for (const auto& [p, rho] : items) {
    if (p < 0) throw std::invalid_argument("QuantumSource: negative probability");
    if (rho.dim() != items.front().second.dim())
      throw std::invalid_argument("QuantumSource: mixed dimensions");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStructTol)
    throw std::invalid_argument("QuantumSource: probabilities sum to " + std::to_string(sum));
}

Povm::Povm(std::vector<Mat> elements) : el_(std::move(elements)) {
  if (el_.empty()) throw std::invalid_argument("Povm: empty");
  const auto d = el_.front().rows();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& e : el_) {
    if (e.rows() != d || e.cols() != d) throw std::invalid_argument("Povm: mixed dims");
    if (!is_hermitian(e, 1e-9)) throw std::invalid_argument("Povm: element not Hermitian");
    if (hermitian_eigenvalues(0.5 * (e + e.adjoint())).minCoeff() < -1e-9)
      throw std::invalid_argument("Povm: element not PSD");
    sum += e;
  }
  if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("Povm: elements do not sum to identity");
}

Povm Povm::from_basis(const std::vector<Vec>& basis) {
  std::vector<Mat> el;
  el.reserve(basis.size());
  for (const Vec& v : basis) el.push_back(v * v.adjoint());
  return Povm(std::move(el));
}

double holevo_chi(const QuantumSource& src) {
  Mat avg = Mat::Zero(src.dim(), src.dim());
  double cond = 0.0;
  for (const auto& [p, rho] : src.items) {
    avg += p * rho.entries();
    cond += p * von_neumann_entropy(rho);
  }
  return std::max(von_neumann_entropy(DensityMatrix(0.5 * (avg + avg.adjoint()))) - cond, 0.0);
}

double measured_info(const QuantumSource& src, const Povm& povm) {
  if (povm.elements().front().rows() != src.dim())
    throw std::invalid_argument("measured_info: dimension mismatch");
  std::vector<std::vector<double>> pse(src.items.size(),
                                       std::vector<double>(povm.elements().size(), 0.0));
  for (size_t s = 0; s < src.items.size(); ++s)
    for (size_t e = 0; e < povm.elements().size(); ++e) {
      double pr = (povm.elements()[e] * src.items[s].second.entries()).trace().real();
      pse[s][e] = src.items[s].first * std::max(pr, 0.0);
    }
  return mi_table(pse);
}

namespace {

// MI of a source under a rank-1 basis given directly by probability rows;
// avoids building Povm objects in the hot grid loop.
double basis_info(const QuantumSource& src, const std::vector<Vec>& basis) {
  std::vector<std::vector<double>> pse(src.items.size(), std::vector<double>(basis.size(), 0.0));
  for (size_t s = 0; s < src.items.size(); ++s) {
    const Mat& rho = src.items[s].second.entries();
    for (size_t e = 0; e < basis.size(); ++e) {
      double pr = std::max((basis[e].adjoint() * rho * basis[e])(0, 0).real(), 0.0);
      pse[s][e] = src.items[s].first * pr;
    }
  }
  return mi_table(pse);
}

std::vector<Vec> qubit_basis(double theta, double phi) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  cxd ph(std::cos(phi), std::sin(phi));
  Vec b0(2), b1(2);
  b0 << c, ph * s;
  b1 << s, -ph * c;
  return {b0, b1};
}

// Fast qubit path: probabilities from precomputed Bloch components.
double qubit_grid_max(const QuantumSource& src, int theta_steps, int phi_steps, double& best_theta,
                      double& best_phi) {
  const size_t ns = src.items.size();
  std::vector<double> w(ns), ax(ns), ay(ns), az(ns);
  for (size_t s = 0; s < ns; ++s) {
    const Mat& r = src.items[s].second.entries();
    w[s] = src.items[s].first;
    ax[s] = 2.0 * r(1, 0).real();
    ay[s] = 2.0 * r(1, 0).imag();
    az[s] = (r(0, 0) - r(1, 1)).real();
  }
  double best = -1.0;
  std::vector<std::vector<double>> pse(ns, std::vector<double>(2, 0.0));
  for (int it = 0; it < theta_steps; ++it) {
    double theta = std::numbers::pi * it / (theta_steps - 1);
    double nz = std::cos(theta), st = std::sin(theta);
    for (int ip = 0; ip < phi_steps; ++ip) {
      double phi = 2.0 * std::numbers::pi * ip / phi_steps;
      double nx = st * std::cos(phi), ny = st * std::sin(phi);
      for (size_t s = 0; s < ns; ++s) {
        double proj = 0.5 * (1.0 + nx * ax[s] + ny * ay[s] + nz * az[s]);
        proj = std::min(std::max(proj, 0.0), 1.0);
        pse[s][0] = w[s] * proj;
        pse[s][1] = w[s] * (1.0 - proj);
      }
      double v = mi_table(pse);
      if (v > best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  return best;
}

double qubit_refine(const QuantumSource& src, double theta, double phi, double value) {
  double step = 0.02;
  while (step > 1e-7) {
    bool improved = false;
    for (int dt = -1; dt <= 1; ++dt)
      for (int dp = -1; dp <= 1; ++dp) {
        if (dt == 0 && dp == 0) continue;
        double v = basis_info(src, qubit_basis(theta + dt * step, phi + dp * step));
        if (v > value + 1e-15) {
          value = v;
          theta += dt * step;
          phi += dp * step;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  return value;
}

std::vector<Vec> columns(const Mat& u) {
  std::vector<Vec> b;
  b.reserve(u.cols());
  for (Eigen::Index i = 0; i < u.cols(); ++i) b.push_back(u.col(i));
  return b;
}

// Difference eigenbases make strong deterministic witnesses for small
// ensembles; random bases cover the rest of the manifold.
double general_witness(const QuantumSource& src, const OracleBudget& budget) {
  const int d = src.dim();
  double best = 0.0;
  for (size_t s = 0; s < src.items.size(); ++s)
    for (size_t t = s + 1; t < src.items.size(); ++t) {
      Mat diff = src.items[s].second.entries() - src.items[t].second.entries();
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()));
      best = std::max(best, basis_info(src, columns(es.eigenvectors())));
    }
  Rng rng(0x9e3779b9);  // fixed: the oracle is deterministic and seedless
  for (int r = 0; r < budget.random_bases; ++r) {
    Mat u = random_unitary(d, rng);
    best = std::max(best, basis_info(src, columns(u)));
  }
  return best;
}

}  // namespace

double info_witness(const QuantumSource& src, const OracleBudget& budget) {
  if (src.dim() == 2) {
    double th = 0.0, ph = 0.0;
    int ts = std::max(budget.theta_steps / 4, 91);
    int ps = std::max(budget.phi_steps / 4, 181);
    double v = qubit_grid_max(src, ts, ps, th, ph);
    if (budget.refine) v = qubit_refine(src, th, ph, v);
    return v;
  }
  return general_witness(src, budget);
}

double accessible_info_oracle(const QuantumSource& src, const OracleBudget& budget) {
  const int d = src.dim();
  if (d > 4) throw std::invalid_argument("accessible_info_oracle: dim > 4 unsupported");
  if (d == 2) {
    double th = 0.0, ph = 0.0;
    double v = qubit_grid_max(src, budget.theta_steps, budget.phi_steps, th, ph);
    if (budget.refine) v = qubit_refine(src, th, ph, v);
    return v;
  }
  return general_witness(src, budget);
}

OneBitBounds bound_one_bit(const QuantumSource& src) {
  if (src.items.size() != 2) throw std::invalid_argument("bound_one_bit: need exactly two items");
  double p0 = src.items[0].first, p1 = src.items[1].first;
  if (p0 < p1) std::swap(p0, p1);  // relabel so p(s=0) >= p(s=1)
  double hs = binary_entropy(p0);
  double tn = trace_norm(src.items[0].second.entries() - src.items[1].second.entries());
  return OneBitBounds{hs * p0 * tn, hs * tn};
}

ManyBounds bound_many(const QuantumSource& src) {
  Mat avg = Mat::Zero(src.dim(), src.dim());
  for (const auto& [p, rho] : src.items) avg += p * rho.entries();
  double bound = 0.0;
  bool uniform = true;
  const double u = 1.0 / static_cast<double>(src.items.size());
  for (const auto& [p, rho] : src.items) {
    if (p > 0.5 + 1e-12)
      throw std::invalid_argument("bound_many: hypothesis p_s <= 1/2 violated");
    if (std::abs(p - u) > kStructTol) uniform = false;
    if (p > 0.0) bound += p * std::log2(1.0 / p) * trace_norm(rho.entries() - avg);
  }
  ManyBounds out{bound, std::nullopt};
  if (uniform) {
    double mean_tn = 0.0;
    for (const auto& [p, rho] : src.items) mean_tn += u * trace_norm(rho.entries() - avg);
    out.corollary_bound = std::log2(static_cast<double>(src.items.size())) * mean_tn;
  }
  return out;
}

AttackUnitary::AttackUnitary(int n_, int probe_dim_, Mat u_) : n(n_), probe_dim(probe_dim_), u(std::move(u_)) {
  if (n < 1) throw std::invalid_argument("AttackUnitary: n >= 1 required");
  if (probe_dim < 1) throw std::invalid_argument("AttackUnitary: probe_dim >= 1");
  const Eigen::Index want = static_cast<Eigen::Index>(probe_dim) << n;
  if (u.rows() != want || u.cols() != want)
    throw std::invalid_argument("AttackUnitary: matrix is not probe_dim * 2^n");
  if (!is_unitary(u, kStructTol)) throw std::invalid_argument("AttackUnitary: not unitary");
}

std::vector<std::vector<Vec>> eve_components(const AttackUnitary& a) {
  const int md = a.msg_dim();
  std::vector<std::vector<Vec>> e(md, std::vector<Vec>(md, Vec::Zero(a.probe_dim)));
  for (int i = 0; i < md; ++i) {
    // input column |0>_E |i>
    for (int j = 0; j < md; ++j)
      for (int pe = 0; pe < a.probe_dim; ++pe) e[i][j](pe) = a.u(static_cast<Eigen::Index>(pe) * md + j, i);
  }
  return e;
}

std::vector<std::vector<Vec>> eve_components_fourier(const AttackUnitary& a) {
  const int md = a.msg_dim();
  Mat h1(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h1 << s, s, s, -s;
  Mat hn = Mat::Identity(1, 1);
  for (int q = 0; q < a.n; ++q) hn = tensor(hn, h1);
  Mat conj = tensor(Mat::Identity(a.probe_dim, a.probe_dim), hn);
  AttackUnitary ab(a.n, a.probe_dim, conj * a.u * conj);
  return eve_components(ab);
}

namespace {

int parity(unsigned x) { return __builtin_parity(x); }

}  // namespace

DisturbanceReport info_vs_disturbance(const AttackUnitary& attack) {
  const int n = attack.n, md = attack.msg_dim();
  auto e = eve_components(attack);

  // P(0) by the proof's expansion over (i', i'', k).
  double p0 = 0.0;
  for (int i1 = 0; i1 < md; ++i1)
    for (int i2 = 0; i2 < md; ++i2)
      for (int k = 0; k < md; ++k) p0 += e[i1][i1 ^ k].dot(e[i2][i2 ^ k]).real();
  p0 /= static_cast<double>(md) * md;

  // Independent route through the Fourier-conjugated statevector.
  auto eb = eve_components_fourier(attack);
  double p0_direct = 0.0;
  for (int i = 0; i < md; ++i) p0_direct += eb[i][i].squaredNorm();
  p0_direct /= static_cast<double>(md);

  // Purification |phi_i> = sum_j E_{i,j} (x) |i xor j>, and its Fourier zero mode.
  const Eigen::Index pdim = static_cast<Eigen::Index>(attack.probe_dim) * md;
  Vec phibar0 = Vec::Zero(pdim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(md));
  for (int i = 0; i < md; ++i)
    for (int j = 0; j < md; ++j)
      for (int pe = 0; pe < attack.probe_dim; ++pe)
        phibar0(static_cast<Eigen::Index>(pe) * md + (i ^ j)) += norm * e[i][j](pe);

  DisturbanceReport rep;
  rep.p0 = std::min(std::max(p0, 0.0), 1.0);
  rep.p0_direct = p0_direct;
  rep.p_error_fourier = 1.0 - rep.p0;
  rep.bound = 4.0 * n * std::sqrt(std::max(rep.p_error_fourier, 0.0));
  rep.purification_norm = phibar0.squaredNorm();
  for (int i = 0; i < md; ++i) {
    Mat rho = Mat::Zero(attack.probe_dim, attack.probe_dim);
    for (int j = 0; j < md; ++j) rho += e[i][j] * e[i][j].adjoint();
    rep.ensemble.emplace_back(0.5 * (rho + rho.adjoint()));
  }
  return rep;
}

FunctionBoundReport function_security_bound(const AttackUnitary& attack, const std::vector<int>& f) {
  const int md = attack.msg_dim();
  if (static_cast<int>(f.size()) != md)
    throw std::invalid_argument("function_security_bound: f must be total on n-bit strings");

  std::map<int, double> q;
  for (int k = 0; k < md; ++k) q[f[k]] += 1.0 / md;
  Eigen::VectorXd qv(q.size());
  {
    int idx = 0;
    for (const auto& [val, prob] : q) qv(idx++) = prob;
  }
  const double h_fk = shannon_entropy(qv);

  DisturbanceReport dist = info_vs_disturbance(attack);
  const double bound = h_fk * 4.0 * std::sqrt(std::max(1.0 - dist.p0, 0.0));

  // Exhaustive announcements: for each a, Eve distinguishes the sigma_i^a.
  double witness = 0.0;
  if (h_fk > 0) {
    for (int a = 0; a < md; ++a) {
      std::vector<std::pair<double, DensityMatrix>> items;
      for (const auto& [val, prob] : q) {
        Mat sigma = Mat::Zero(attack.probe_dim, attack.probe_dim);
        for (int k = 0; k < md; ++k)
          if (f[a ^ k] == val) sigma += (1.0 / (md * prob)) * dist.ensemble[k].entries();
        items.emplace_back(prob, DensityMatrix(0.5 * (sigma + sigma.adjoint())));
      }
      witness += (1.0 / md) * info_witness(QuantumSource(std::move(items)));
    }
  }
  return FunctionBoundReport{bound, witness, h_fk};
}

double linear_entropy_bound(double p, double pprime) {
  if (pprime <= 0.0 || pprime > 0.5)
    throw std::invalid_argument("linear_entropy_bound: need 0 < p' <= 1/2");
  double h = binary_entropy(pprime);
  return h - (h / pprime) * std::abs(p - pprime);
}

double linear_entropy_bound_multi(const Eigen::VectorXd& p, const Eigen::VectorXd& pprime) {
  if (p.size() != pprime.size()) throw std::invalid_argument("linear_entropy_bound_multi: size");
  double b = shannon_entropy(pprime);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (pprime(i) <= 0.0 || pprime(i) > 0.5)
      throw std::invalid_argument("linear_entropy_bound_multi: need 0 < p'_i <= 1/2");
    b -= std::log2(1.0 / pprime(i)) * std::abs(p(i) - pprime(i));
  }
  return b;
}

WholeKeyReport whole_key_lemmas_check(const DiscreteJoint& joint) {
  const int axes = static_cast<int>(joint.dims().size());
  if (axes < 2) throw std::invalid_argument("whole_key_lemmas_check: need (A_1..A_m, E)");
  const int m = axes - 1;
  const int e_axis = m;

  WholeKeyReport rep{};
  // marginal independence of the A_i
  {
    std::vector<int> all_a(m);
    for (int i = 0; i < m; ++i) all_a[i] = i;
    rep.independent = true;
    for (int i = 0; i < m && rep.independent; ++i) {
      std::vector<int> rest;
      for (int j = 0; j < m; ++j)
        if (j != i) rest.push_back(j);
      if (!rest.empty() && conditional_mi(joint, {i}, rest, {}) > 1e-9) rep.independent = false;
    }
    if (!rep.independent)
      throw std::invalid_argument("whole_key_lemmas_check: A_i not marginally independent");
  }

  rep.max_lemma_violation = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    std::vector<int> before, others;
    for (int j = 0; j < i; ++j) before.push_back(j);
    for (int j = 0; j < m; ++j)
      if (j != i) others.push_back(j);
    double lhs = conditional_mi(joint, {i}, {e_axis}, before);
    double rhs = conditional_mi(joint, {i}, {e_axis}, others);
    rep.max_lemma_violation = std::max(rep.max_lemma_violation, lhs - rhs);
  }

  {
    std::vector<int> all_a(m);
    for (int i = 0; i < m; ++i) all_a[i] = i;
    rep.total_mi = conditional_mi(joint, all_a, {e_axis}, {});
  }

  // m * max_{i, a_{!=i}} I(A_i; E | A_{!=i} = a): collapse per i and scan assignments.
  double max_cond = 0.0;
  const auto& dims = joint.dims();
  for (int i = 0; i < m; ++i) {
    std::vector<int> others;
    std::size_t nz = 1;
    for (int j = 0; j < m; ++j)
      if (j != i) {
        others.push_back(j);
        nz *= static_cast<std::size_t>(dims[j]);
      }
    // per-assignment MI table
    std::vector<std::vector<std::vector<double>>> pzxy(
        nz, std::vector<std::vector<double>>(dims[i], std::vector<double>(dims[e_axis], 0.0)));
    std::vector<int> idx(dims.size(), 0);
    const auto& t = joint.table();
    for (std::size_t fidx = 0; fidx < t.size(); ++fidx) {
      std::size_t z = 0;
      for (int a : others) z = z * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(idx[a]);
      pzxy[z][idx[i]][idx[e_axis]] += t[fidx];
      for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
        if (++idx[a] < dims[a]) break;
        idx[a] = 0;
      }
    }
    for (std::size_t z = 0; z < nz; ++z) max_cond = std::max(max_cond, mi_table(pzxy[z]));
  }
  rep.theorem_rhs = m * max_cond;
  return rep;
}

}  // namespace qsec
