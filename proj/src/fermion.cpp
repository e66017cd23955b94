#include "nrep/fermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <omp.h>

#include "nrep/lattice.hpp"
#include "nrep/spectral.hpp"

namespace nrep {

FockState::FockState(int n_modes) : n_modes_(n_modes) {
  if (n_modes < 0 || n_modes > kMaxModes) throw std::invalid_argument("FockState: unsupported mode count");
}

void FockState::add(Occupation occ, cplx amp) {
  if (n_modes_ < kMaxModes && (occ >> n_modes_) != 0) throw std::out_of_range("FockState: occupation outside modes");
  amps_[occ] += amp;
}

cplx FockState::amplitude(Occupation occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? cplx{} : it->second;
}

double FockState::norm() const {
  double s = 0.0;
  for (const auto& [occ, a] : amps_) s += std::norm(a);
  return std::sqrt(s);
}

cplx FockState::inner(const FockState& other) const {
  cplx s{};
  auto a = amps_.begin();
  auto b = other.amps_.begin();
  while (a != amps_.end() && b != other.amps_.end()) {
    if (a->first < b->first)
      ++a;
    else if (b->first < a->first)
      ++b;
    else {
      s += std::conj(a->second) * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

std::optional<int> FockState::particle_number() const {
  std::optional<int> n;
  for (const auto& [occ, a] : amps_) {
    if (a == cplx{}) continue;
    const int c = std::popcount(occ);
    if (n && *n != c) return std::nullopt;
    n = c;
  }
  return n;
}

std::string FockState::occupation_string(Occupation occ) const {
  std::string s(static_cast<std::size_t>(n_modes_), '0');
  for (int m = 0; m < n_modes_; ++m)
    if ((occ >> m) & 1) s[static_cast<std::size_t>(m)] = '1';
  return s;
}

std::optional<std::pair<Occupation, int>> apply_ladder(Ladder op, Occupation occ) {
  const Occupation bit = Occupation{1} << op.mode;
  const int sign = (std::popcount(occ & (bit - 1)) & 1) ? -1 : 1;
  if (op.dagger) {
    if (occ & bit) return std::nullopt;
    return std::pair{occ | bit, sign};
  }
  if (!(occ & bit)) return std::nullopt;
  return std::pair{occ & ~bit, sign};
}

namespace {

// Applies ops right to left; returns the resulting determinant and sign.
std::optional<std::pair<Occupation, int>> apply_monomial(const std::vector<Ladder>& ops, Occupation occ) {
  int sign = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto r = apply_ladder(*it, occ);
    if (!r) return std::nullopt;
    occ = r->first;
    sign *= r->second;
  }
  return std::pair{occ, sign};
}

void check_modes(const std::vector<Ladder>& ops, int n_modes) {
  for (const auto& l : ops)
    if (l.mode < 0 || l.mode >= n_modes) throw std::out_of_range("ladder operator outside modes");
}

}  // namespace

FermionOperator& FermionOperator::add(FermionMonomial m) {
  check_modes(m.ops, n_modes_);
  terms_.push_back(std::move(m));
  return *this;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  if (other.n_modes_ != n_modes_) throw std::invalid_argument("FermionOperator: mode count mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FockState apply(const FermionOperator& op, const FockState& state) {
  if (op.n_modes() != state.n_modes()) throw std::invalid_argument("apply: mode count mismatch");
  FockState out(state.n_modes());
  for (const auto& t : op.terms())
    for (const auto& [occ, amp] : state.amplitudes()) {
      auto r = apply_monomial(t.ops, occ);
      if (r) out.add(r->first, t.coeff * static_cast<double>(r->second) * amp);
    }
  return out;
}

namespace {

void check_lattice(int n_sites) {
  if (n_sites < 1 || 2 * n_sites > kMaxModes) throw std::invalid_argument("unsupported number of sites");
}

// V|b> = sign * |occ> for lattice basis index b.
std::pair<Occupation, int> lattice_to_fock(std::uint64_t b, int n_sites) {
  // a+_{0,s0} a+_{1,s1} ... a+_{N-1,s_{N-1}} |vac>
  std::vector<Ladder> ops;
  ops.reserve(static_cast<std::size_t>(n_sites));
  for (int j = 0; j < n_sites; ++j) {
    const int s = static_cast<int>((b >> bit_position(j, n_sites)) & 1);
    ops.push_back({2 * j + s, true});
  }
  auto r = apply_monomial(ops, 0);
  return *r;
}

}  // namespace

FockState map_state(const StateVector& lattice_state, int n_sites) {
  check_lattice(n_sites);
  if (lattice_state.size() != (Eigen::Index{1} << n_sites)) throw std::invalid_argument("map_state: dimension mismatch");
  FockState f(2 * n_sites);
  for (Eigen::Index b = 0; b < lattice_state.size(); ++b) {
    if (lattice_state[b] == cplx{}) continue;
    auto [occ, sign] = lattice_to_fock(static_cast<std::uint64_t>(b), n_sites);
    f.add(occ, static_cast<double>(sign) * lattice_state[b]);
  }
  return f;
}

StateVector unmap_state(const FockState& f, int n_sites) {
  check_lattice(n_sites);
  if (f.n_modes() != 2 * n_sites) throw std::invalid_argument("unmap_state: mode count mismatch");
  StateVector out = StateVector::Zero(Eigen::Index{1} << n_sites);
  for (const auto& [occ, amp] : f.amplitudes()) {
    std::uint64_t b = 0;
    bool single = true;
    for (int j = 0; j < n_sites && single; ++j) {
      const auto pair = (occ >> (2 * j)) & 3;
      if (pair == 1)
        continue;  // up -> bit 0
      else if (pair == 2)
        b |= std::uint64_t{1} << bit_position(j, n_sites);
      else
        single = false;
    }
    if (!single) continue;
    const int sign = lattice_to_fock(b, n_sites).second;
    out[static_cast<Eigen::Index>(b)] += static_cast<double>(sign) * amp;
  }
  return out;
}

FermionOperator map_operator(const OperatorSum& lattice_op) {
  check_lattice(lattice_op.n_sites());
  const cplx i{0.0, 1.0};
  FermionOperator out(2 * lattice_op.n_sites());
  for (const auto& term : lattice_op.terms()) {
    std::vector<FermionMonomial> monos{{term.coeff, {}}};
    for (auto [site, p] : term.letters) {
      // Nonzero entries (s, t, w_st) of the single-site matrix.
      std::vector<std::tuple<int, int, cplx>> entries;
      switch (p) {
        case Pauli::X: entries = {{0, 1, 1.0}, {1, 0, 1.0}}; break;
        case Pauli::Y: entries = {{0, 1, -i}, {1, 0, i}}; break;
        case Pauli::Z: entries = {{0, 0, 1.0}, {1, 1, -1.0}}; break;
        case Pauli::I: entries = {{0, 0, 1.0}, {1, 1, 1.0}}; break;
      }
      std::vector<FermionMonomial> next;
      for (const auto& m : monos)
        for (auto [s, t, w] : entries) {
          FermionMonomial n = m;
          n.coeff *= w;
          n.ops.push_back({2 * site + s, true});
          n.ops.push_back({2 * site + t, false});
          next.push_back(std::move(n));
        }
      monos = std::move(next);
    }
    for (auto& m : monos) out.add(std::move(m));
  }
  return out;
}

FermionOperator number_operator(int site, int n_sites) {
  check_lattice(n_sites);
  if (site < 0 || site >= n_sites) throw std::out_of_range("number_operator: site out of range");
  FermionOperator n(2 * n_sites);
  n.add({1.0, {{2 * site, true}, {2 * site, false}}});
  n.add({1.0, {{2 * site + 1, true}, {2 * site + 1, false}}});
  return n;
}

FermionOperator build_penalty(std::span<const double> u) {
  const int n_sites = static_cast<int>(u.size());
  check_lattice(n_sites);
  FermionOperator pen(2 * n_sites);
  for (int j = 0; j < n_sites; ++j) {
    const double uj = u[static_cast<std::size_t>(j)];
    if (!(uj > 0.0)) throw std::invalid_argument("build_penalty: U_j must be positive");
    const Ladder up_c{2 * j, true}, up_a{2 * j, false}, dn_c{2 * j + 1, true}, dn_a{2 * j + 1, false};
    // (n_j - 1)^2 = 1 - n_up - n_dn + 2 n_up n_dn
    pen.add({uj, {}});
    pen.add({-uj, {up_c, up_a}});
    pen.add({-uj, {dn_c, dn_a}});
    pen.add({2.0 * uj, {up_c, up_a, dn_c, dn_a}});
  }
  return pen;
}

std::vector<Occupation> fock_basis(int n_modes, std::optional<int> particles) {
  if (n_modes < 0 || n_modes > 30) throw DimensionLimitError("fock_basis: too many modes for an explicit basis");
  std::vector<Occupation> basis;
  const Occupation dim = Occupation{1} << n_modes;
  for (Occupation occ = 0; occ < dim; ++occ)
    if (!particles || std::popcount(occ) == *particles) basis.push_back(occ);
  return basis;
}

CMatrix to_dense(const FermionOperator& op, const std::vector<Occupation>& basis) {
  std::unordered_map<Occupation, Eigen::Index> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<Eigen::Index>(i));
  const auto d = static_cast<Eigen::Index>(basis.size());
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col)
    for (const auto& t : op.terms()) {
      auto r = apply_monomial(t.ops, basis[static_cast<std::size_t>(col)]);
      if (!r) continue;
      auto it = index.find(r->first);
      if (it == index.end()) throw std::invalid_argument("to_dense: operator leaves the given basis");
      m(it->second, col) += t.coeff * static_cast<double>(r->second);
    }
  return m;
}

StateVector to_dense(const FockState& f, const std::vector<Occupation>& basis) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<Eigen::Index>(i)] = f.amplitude(basis[i]);
  return v;
}

std::vector<std::pair<int, int>> mode_pairs(int n_modes) { return site_pairs(n_modes); }

std::size_t mode_pair_index(int p, int q, int n_modes) {
  if (p < 0 || q <= p || q >= n_modes) throw std::out_of_range("mode_pair_index: need 0 <= p < q < n_modes");
  return static_cast<std::size_t>(p) * (2 * n_modes - p - 1) / 2 + static_cast<std::size_t>(q - p - 1);
}

namespace {

int fixed_particles(const FockState& f) {
  const auto n = f.particle_number();
  if (!n) throw std::invalid_argument("fermionic_2rdm: state has no fixed particle number");
  if (*n < 2) throw std::invalid_argument("fermionic_2rdm: fewer than two particles");
  return *n;
}

using SparseVec = std::vector<std::pair<Occupation, cplx>>;

cplx sparse_dot(const SparseVec& a, const SparseVec& b) {
  cplx s{};
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first)
      ++i;
    else if (b[j].first < a[i].first)
      ++j;
    else
      s += std::conj(a[i++].second) * b[j++].second;
  }
  return s;
}

void normalize_trace(Fermionic2RDM& rdm) {
  const cplx tr = rdm.matrix.trace();
  if (std::abs(tr) == 0.0) throw std::invalid_argument("fermionic_2rdm: zero state");
  rdm.matrix /= tr.real();
}

}  // namespace

Fermionic2RDM fermionic_2rdm(const FockState& f) {
  const int n = fixed_particles(f);
  Fermionic2RDM rdm{f.n_modes(), n, mode_pairs(f.n_modes()), {}};
  const auto np = rdm.mode_pairs.size();
  // w[PQ] = a_Q a_P |f>, kept sorted by occupation.
  std::vector<SparseVec> w(np);
  for (std::size_t i = 0; i < np; ++i) {
    auto [p, q] = rdm.mode_pairs[i];
    const std::vector<Ladder> ops{{q, false}, {p, false}};
    for (const auto& [occ, amp] : f.amplitudes()) {
      auto r = apply_monomial(ops, occ);
      if (r) w[i].emplace_back(r->first, static_cast<double>(r->second) * amp);
    }
    std::sort(w[i].begin(), w[i].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  rdm.matrix = CMatrix::Zero(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
  const auto rows = static_cast<std::int64_t>(np);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto a = static_cast<std::size_t>(r);
    if (w[a].empty()) continue;
    for (std::size_t b = a; b < np; ++b) {
      if (w[b].empty()) continue;
      // [(PQ),(RS)] = <w_RS|w_PQ>
      const cplx v = sparse_dot(w[b], w[a]);
      rdm.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      rdm.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = std::conj(v);
    }
  }
  normalize_trace(rdm);
  return rdm;
}

namespace serial {

// Evaluates every <f| a+_R a+_S a_Q a_P |f> by direct operator application.
Fermionic2RDM fermionic_2rdm(const FockState& f) {
  const int n = fixed_particles(f);
  Fermionic2RDM rdm{f.n_modes(), n, mode_pairs(f.n_modes()), {}};
  const auto np = static_cast<Eigen::Index>(rdm.mode_pairs.size());
  rdm.matrix = CMatrix::Zero(np, np);
  for (Eigen::Index a = 0; a < np; ++a)
    for (Eigen::Index b = 0; b < np; ++b) {
      auto [p, q] = rdm.mode_pairs[static_cast<std::size_t>(a)];
      auto [r, s] = rdm.mode_pairs[static_cast<std::size_t>(b)];
      FermionOperator op(f.n_modes());
      op.add({1.0, {{r, true}, {s, true}, {q, false}, {p, false}}});
      rdm.matrix(a, b) = f.inner(apply(op, f));
    }
  normalize_trace(rdm);
  return rdm;
}

}  // namespace serial

Fermionic2RDM assemble_2rdm(const MarginalVector& mv) {
  const int n = mv.n_sites;
  if (n < 2 || 2 * n > kMaxModes) throw std::invalid_argument("assemble_2rdm: unsupported site count");
  if (mv.pairs != site_pairs(n) || mv.rdms.size() != mv.pairs.size())
    throw std::invalid_argument("assemble_2rdm: marginal vector does not cover every site pair");
  const int n_modes = 2 * n;
  Fermionic2RDM rdm{n_modes, n, mode_pairs(n_modes), {}};
  const auto np = static_cast<Eigen::Index>(rdm.mode_pairs.size());
  rdm.matrix = CMatrix::Zero(np, np);
  const double scale = 1.0 / static_cast<double>(mv.pairs.size());
  for (std::size_t i = 0; i < mv.pairs.size(); ++i) {
    auto [j, k] = mv.pairs[i];
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        const auto row = mode_pair_index(2 * j + (a >> 1), 2 * k + (a & 1), n_modes);
        const auto col = mode_pair_index(2 * j + (c >> 1), 2 * k + (c & 1), n_modes);
        rdm.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += scale * mv.rdms[i](a, c);
      }
  }
  return rdm;
}

Eigen::Matrix4cd recover_pair_marginal(const Fermionic2RDM& rdm, int j, int k) {
  if (j < 0 || k <= j || 2 * k + 1 >= rdm.n_modes) throw std::out_of_range("recover_pair_marginal: bad site pair");
  Eigen::Matrix4cd block;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c) {
      const auto row = mode_pair_index(2 * j + (a >> 1), 2 * k + (a & 1), rdm.n_modes);
      const auto col = mode_pair_index(2 * j + (c >> 1), 2 * k + (c & 1), rdm.n_modes);
      block(a, c) = rdm.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
  const double tr = block.trace().real();
  if (tr != 0.0) block /= tr;
  return block;
}

DiagramReport verify_diagram(const StateVector& lattice_state, int n_sites) {
  if (n_sites < 2 || n_sites > 12) throw std::invalid_argument("verify_diagram: supports 2..12 sites");
  DiagramReport rep;
  rep.n_sites = n_sites;
  const FockState f = map_state(lattice_state, n_sites);
  rep.isometry_deviation = std::abs(f.norm() * f.norm() - lattice_state.squaredNorm());
  const MarginalVector mv = marginal_vector(lattice_state, n_sites);
  const Fermionic2RDM direct = fermionic_2rdm(f);
  const Fermionic2RDM assembled = assemble_2rdm(mv);
  // Marginals of an unnormalized state carry its norm; compare trace-one forms.
  const double norm2 = lattice_state.squaredNorm();
  rep.max_deviation = (direct.matrix - assembled.matrix / norm2).cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < mv.pairs.size(); ++i) {
    auto [j, k] = mv.pairs[i];
    const Eigen::Matrix4cd rec = recover_pair_marginal(assembled, j, k);
    rep.recovery_deviation = std::max(rep.recovery_deviation, (rec - mv.rdms[i] / norm2).cwiseAbs().maxCoeff());
  }
  return rep;
}

PenaltyReport verify_penalty_ground_space(const OperatorSum& h_latt, double u_scale) {
  const int n = h_latt.n_sites();
  if (2 * n > 12) throw DimensionLimitError("verify_penalty_ground_space: Fock space too large for dense solve");
  PenaltyReport rep;
  rep.u = u_scale * h_latt.coefficient_norm();
  const GroundSpace latt = ground_space(h_latt);
  rep.lattice_degeneracy = latt.degeneracy();

  FermionOperator h = map_operator(h_latt);
  const std::vector<double> u(static_cast<std::size_t>(n), rep.u);
  h += build_penalty(u);
  const auto basis = fock_basis(2 * n);
  const auto spectrum = eig_hermitian(to_dense(h, basis));
  const double range = spectrum.values[spectrum.values.size() - 1] - spectrum.values[0];
  const double thr = GroundSpaceOptions{}.degeneracy_tol * range;
  Eigen::Index count = 1;
  while (count < spectrum.values.size() && spectrum.values[count] - spectrum.values[0] <= thr) ++count;
  rep.fock_degeneracy = static_cast<std::size_t>(count);

  const CMatrix fock_ground = spectrum.vectors.leftCols(count);
  CMatrix mapped(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(latt.degeneracy()));
  for (std::size_t p = 0; p < latt.degeneracy(); ++p)
    mapped.col(static_cast<Eigen::Index>(p)) = to_dense(map_state(latt.basis[p], n), basis);
  rep.subspace_distance = subspace_distance(fock_ground, mapped);
  return rep;
}

json to_json(const FockState& f) {
  json j = json::object();
  for (const auto& [occ, amp] : f.amplitudes()) j[f.occupation_string(occ)] = {amp.real(), amp.imag()};
  return j;
}

json to_json(const Fermionic2RDM& rdm) {
  json pairs = json::array();
  for (auto [p, q] : rdm.mode_pairs) pairs.push_back({p, q});
  json rows = json::array();
  for (Eigen::Index r = 0; r < rdm.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rdm.matrix.cols(); ++c) row.push_back({rdm.matrix(r, c).real(), rdm.matrix(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"n_modes", rdm.n_modes}, {"n_particles", rdm.n_particles}, {"mode_pairs", pairs}, {"matrix", rows}};
}

}  // namespace nrep
