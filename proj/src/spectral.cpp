#include "nrep/spectral.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include <omp.h>

namespace nrep {

EigenDecomposition eig_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: matrix is not square");
  if (m.rows() > kMaxDenseDimension)
    throw DimensionLimitError("eig_hermitian: dimension " + std::to_string(m.rows()) +
                              " exceeds " + std::to_string(kMaxDenseDimension));
  if (m.size() == 0) return {};
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

void fix_phase(StateVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

using Block = std::vector<StateVector>;

// Splits each block into eigenspaces of `g` restricted to the block, highest
// eigenvalue first.
std::vector<Block> refine(const std::vector<Block>& blocks, const PauliTerm& g, int n_sites) {
  std::vector<Block> out;
  for (const auto& block : blocks) {
    if (block.size() < 2) {
      out.push_back(block);
      continue;
    }
    const auto k = static_cast<Eigen::Index>(block.size());
    CMatrix gm(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const StateVector gv = apply(g, block[j], n_sites);
      for (Eigen::Index i = 0; i < k; ++i) gm(i, j) = block[i].dot(gv);
    }
    gm = 0.5 * (gm + gm.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gm);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::Index hi = k - 1;
    while (hi >= 0) {
      Eigen::Index lo = hi;
      while (lo > 0 && std::abs(lam[lo - 1] - lam[hi]) < 1e-6) --lo;
      Block cluster;
      for (Eigen::Index c = hi; c >= lo; --c) {
        StateVector v = StateVector::Zero(block[0].size());
        for (Eigen::Index j = 0; j < k; ++j) v += es.eigenvectors()(j, c) * block[j];
        cluster.push_back(std::move(v));
      }
      out.push_back(std::move(cluster));
      hi = lo - 1;
    }
  }
  return out;
}

}  // namespace

GroundSpace ground_space(const OperatorSum& h, const GroundSpaceOptions& opts) {
  if (h.n_sites() > dense_site_limit())
    throw DimensionLimitError("ground_space: " + std::to_string(h.n_sites()) + " sites exceed dense limit");
  if ((Eigen::Index{1} << h.n_sites()) > kMaxDenseDimension)
    throw DimensionLimitError("ground_space: dimension exceeds dense eigensolver limit");
  return ground_space(h, eig_hermitian(to_matrix(h)), opts);
}

GroundSpace ground_space(const OperatorSum& h, const EigenDecomposition& spectrum,
                         const GroundSpaceOptions& opts) {
  const auto& lam = spectrum.values;
  if (lam.size() == 0) throw std::invalid_argument("ground_space: empty spectrum");
  const double range = lam[lam.size() - 1] - lam[0];
  GroundSpace gs;
  gs.n_sites = h.n_sites();
  gs.e0 = lam[0];
  gs.degeneracy_tol = opts.degeneracy_tol * range;

  Eigen::Index count = 1;
  while (count < lam.size() && lam[count] - lam[0] <= gs.degeneracy_tol) ++count;
  if (count < lam.size()) {
    gs.gap = lam[count] - lam[0];
    if (gs.gap < 10.0 * gs.degeneracy_tol)
      throw AmbiguousGapError("ground_space: gap " + std::to_string(gs.gap) +
                              " is within the degeneracy guard band");
  }

  std::vector<Block> blocks(1);
  for (Eigen::Index c = 0; c < count; ++c) blocks[0].push_back(spectrum.vectors.col(c));
  for (const auto& g : opts.gauge) blocks = refine(blocks, g, h.n_sites());

  for (auto& block : blocks)
    for (auto& v : block) {
      fix_phase(v);
      gs.basis.push_back(std::move(v));
    }
  for (const auto& v : gs.basis)
    gs.max_residual = std::max(gs.max_residual, (apply(h, v) - gs.e0 * v).norm());
  return gs;
}

double subspace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("subspace_distance: ambient dimensions differ");
  const CMatrix diff = a * a.adjoint() - b * b.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

PauliTerm compass_gauge(int n) {
  PauliTerm t;
  for (int s = 0; s < n * n; ++s) t.letters.emplace(s, Pauli::Z);
  return t;
}

namespace {

struct SectorLayout {
  std::vector<std::uint32_t> label_of;  // per basis state
  std::vector<std::vector<std::uint64_t>> members;
  std::vector<std::uint32_t> labels;
};

SectorLayout layout_sectors(const OperatorSum& h, std::span<const PauliTerm> parity_ops) {
  if (parity_ops.size() > 31) throw std::invalid_argument("sector_split: too many parity operators");
  if (h.n_sites() > dense_site_limit()) throw DimensionLimitError("sector_split: dense limit exceeded");
  std::vector<std::uint64_t> zmask;
  for (const auto& p : parity_ops) {
    std::uint64_t z = 0;
    for (auto [site, letter] : p.letters) {
      if (letter != Pauli::Z)
        throw std::invalid_argument("sector_split: parity operator " + p.to_string() + " is not diagonal");
      if (site >= h.n_sites()) throw std::out_of_range("sector_split: parity operator outside lattice");
      z |= std::uint64_t{1} << bit_position(site, h.n_sites());
    }
    for (const auto& t : h.terms())
      if (!commutes(p, t))
        throw std::invalid_argument("sector_split: " + p.to_string() + " does not commute with " + t.to_string());
    zmask.push_back(z);
  }
  const std::uint64_t dim = std::uint64_t{1} << h.n_sites();
  SectorLayout lay;
  lay.label_of.resize(dim);
  std::vector<std::vector<std::uint64_t>> by_label(std::size_t{1} << parity_ops.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::uint32_t label = 0;
    for (std::size_t i = 0; i < zmask.size(); ++i)
      if (std::popcount(b & zmask[i]) & 1) label |= 1u << i;
    lay.label_of[b] = label;
    by_label[label].push_back(b);
  }
  for (std::uint32_t l = 0; l < by_label.size(); ++l)
    if (!by_label[l].empty()) {
      lay.labels.push_back(l);
      lay.members.push_back(std::move(by_label[l]));
    }
  return lay;
}

double sector_minimum(const OperatorSum& h, const std::vector<std::uint64_t>& members,
                      const std::vector<std::int64_t>& position) {
  const auto d = static_cast<Eigen::Index>(members.size());
  CMatrix block = CMatrix::Zero(d, d);
  const int n = h.n_sites();
  for (const auto& t : h.terms()) {
    std::uint64_t x = 0, z = 0;
    int ny = 0;
    for (auto [site, p] : t.letters) {
      const std::uint64_t bit = std::uint64_t{1} << bit_position(site, n);
      if (p == Pauli::X || p == Pauli::Y) x |= bit;
      if (p == Pauli::Z || p == Pauli::Y) z |= bit;
      if (p == Pauli::Y) ++ny;
    }
    const cplx c = Phase{ny}.apply(t.coeff);
    for (Eigen::Index col = 0; col < d; ++col) {
      const std::uint64_t b = members[static_cast<std::size_t>(col)];
      const std::int64_t row = position[b ^ x];
      block(row, col) += (std::popcount(b & z) & 1) ? -c : c;
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(block, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

std::vector<std::int64_t> positions(const SectorLayout& lay, std::uint64_t dim) {
  std::vector<std::int64_t> pos(dim);
  for (const auto& m : lay.members)
    for (std::size_t i = 0; i < m.size(); ++i) pos[m[i]] = static_cast<std::int64_t>(i);
  return pos;
}

}  // namespace

std::vector<Sector> sector_split(const OperatorSum& h, std::span<const PauliTerm> parity_ops) {
  const SectorLayout lay = layout_sectors(h, parity_ops);
  const auto pos = positions(lay, std::uint64_t{1} << h.n_sites());
  std::vector<Sector> out(lay.labels.size());
  const auto n_sectors = static_cast<std::int64_t>(lay.labels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < n_sectors; ++s) {
    const auto i = static_cast<std::size_t>(s);
    out[i] = {lay.labels[i], sector_minimum(h, lay.members[i], pos), lay.members[i].size()};
  }
  return out;
}

namespace serial {

std::vector<Sector> sector_split(const OperatorSum& h, std::span<const PauliTerm> parity_ops) {
  const SectorLayout lay = layout_sectors(h, parity_ops);
  const auto pos = positions(lay, std::uint64_t{1} << h.n_sites());
  std::vector<Sector> out;
  for (std::size_t i = 0; i < lay.labels.size(); ++i)
    out.push_back({lay.labels[i], sector_minimum(h, lay.members[i], pos), lay.members[i].size()});
  return out;
}

}  // namespace serial

namespace {

constexpr std::array<std::array<int, 3>, 4> kEvenColumns{{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};

}  // namespace

std::uint64_t column_configuration_index(int c0, int c1, int c2) {
  const std::array<int, 3> cols{c0, c1, c2};
  std::uint64_t idx = 0;
  for (int k = 0; k < 3; ++k) {
    if (cols[k] < 0 || cols[k] > 3) throw std::out_of_range("column label must be in 0..3");
    for (int j = 0; j < 3; ++j)
      if (kEvenColumns[cols[k]][j]) idx |= std::uint64_t{1} << bit_position(3 * j + k, 9);
  }
  return idx;
}

ParityBasis build_parity_basis(int n) {
  if (n != 3) throw std::invalid_argument("parity basis is defined for n = 3 only");
  const Eigen::Index dim = 512;
  ParityBasis pb{StateVector::Zero(dim), StateVector::Zero(dim), StateVector::Zero(dim)};
  auto at = [](int a, int b, int c) { return static_cast<Eigen::Index>(column_configuration_index(a, b, c)); };
  for (int j = 0; j < 4; ++j) pb.a1[at(j, j, j)] += 0.5;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      if (j == k) continue;
      pb.a2[at(j, k, k)] += 1.0 / 6.0;
      pb.a2[at(k, j, k)] += 1.0 / 6.0;
      pb.a2[at(k, k, j)] += 1.0 / 6.0;
    }
  const double w3 = 1.0 / std::sqrt(24.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        if (i != j && j != k && i != k) pb.a3[at(i, j, k)] += w3;
  return pb;
}

GroundStateDecomposition decompose_ground_state(const StateVector& c0) {
  const ParityBasis pb = build_parity_basis(3);
  if (c0.size() != pb.a1.size()) throw std::invalid_argument("decompose_ground_state: expects a 9-site state");
  std::array<cplx, 3> a{pb.a1.dot(c0), pb.a2.dot(c0), pb.a3.dot(c0)};
  cplx phase{1.0, 0.0};
  for (const cplx& x : a)
    if (std::abs(x) > 1e-12) {
      phase = std::conj(x) / std::abs(x);
      break;
    }
  for (auto& x : a) x *= phase;
  const StateVector rest = phase * c0 - a[0] * pb.a1 - a[1] * pb.a2 - a[2] * pb.a3;
  return {a[0], a[1], a[2], rest.norm()};
}

}  // namespace nrep
