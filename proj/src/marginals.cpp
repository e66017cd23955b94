#include "nrep/marginals.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

#include <omp.h>

#include "nrep/lattice.hpp"

namespace nrep {

int sites_of(const StateVector& state) {
  const auto d = static_cast<std::uint64_t>(state.size());
  if (d == 0 || !std::has_single_bit(d)) throw std::invalid_argument("state dimension is not a power of two");
  return std::countr_zero(d);
}

namespace {

void check_keep(std::span<const int> keep, int n_sites) {
  if (keep.empty()) throw std::invalid_argument("partial trace: empty site set");
  std::vector<bool> seen(static_cast<std::size_t>(std::max(n_sites, 0)), false);
  for (int s : keep) {
    if (s < 0 || s >= n_sites) throw std::out_of_range("partial trace: site index out of range");
    if (seen[static_cast<std::size_t>(s)]) throw std::invalid_argument("partial trace: repeated site");
    seen[static_cast<std::size_t>(s)] = true;
  }
}

// Reshapes a state into a (2^m x 2^{n-m}) matrix: row = kept bits in the
// order given, column = remaining bits in ascending site order.
CMatrix reshape_kept(const StateVector& psi, std::span<const int> keep, int n_sites) {
  const int m = static_cast<int>(keep.size());
  std::vector<int> rest;
  std::vector<bool> kept(static_cast<std::size_t>(n_sites), false);
  for (int s : keep) kept[static_cast<std::size_t>(s)] = true;
  for (int s = 0; s < n_sites; ++s)
    if (!kept[static_cast<std::size_t>(s)]) rest.push_back(s);
  const auto rows = Eigen::Index{1} << m;
  const auto cols = Eigen::Index{1} << (n_sites - m);
  CMatrix out(rows, cols);
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::uint64_t r = 0, c = 0;
    for (int i = 0; i < m; ++i) r = (r << 1) | ((b >> bit_position(keep[i], n_sites)) & 1);
    for (int s : rest) c = (c << 1) | ((b >> bit_position(s, n_sites)) & 1);
    out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi[static_cast<Eigen::Index>(b)];
  }
  return out;
}

}  // namespace

CMatrix cross_marginal(const StateVector& u, const StateVector& v, std::span<const int> keep, int n_sites) {
  if (u.size() != v.size()) throw std::invalid_argument("cross_marginal: state dimensions differ");
  if (u.size() != (Eigen::Index{1} << n_sites)) throw std::invalid_argument("cross_marginal: dimension/site mismatch");
  check_keep(keep, n_sites);
  const CMatrix ur = reshape_kept(u, keep, n_sites);
  const CMatrix vr = reshape_kept(v, keep, n_sites);
  return ur * vr.adjoint();
}

CMatrix partial_trace(const StateVector& state, std::span<const int> keep, int n_sites) {
  return cross_marginal(state, state, keep, n_sites);
}

CMatrix reduce_operator(const CMatrix& rho, int m, std::span<const int> keep_positions) {
  check_keep(keep_positions, m);
  const int k = static_cast<int>(keep_positions.size());
  std::vector<bool> kept(static_cast<std::size_t>(m), false);
  for (int p : keep_positions) kept[static_cast<std::size_t>(p)] = true;
  const auto dim = std::uint64_t{1} << m;
  auto split = [&](std::uint64_t b) {
    std::uint64_t r = 0, c = 0;
    for (int p : keep_positions) r = (r << 1) | ((b >> bit_position(p, m)) & 1);
    for (int p = 0; p < m; ++p)
      if (!kept[static_cast<std::size_t>(p)]) c = (c << 1) | ((b >> bit_position(p, m)) & 1);
    return std::pair{r, c};
  };
  CMatrix out = CMatrix::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  for (std::uint64_t a = 0; a < dim; ++a)
    for (std::uint64_t b = 0; b < dim; ++b) {
      auto [ra, ca] = split(a);
      auto [rb, cb] = split(b);
      if (ca == cb) out(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(rb)) += rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  return out;
}

MarginalVector cross_marginal_vector(const StateVector& u, const StateVector& v, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("marginal vector needs at least two sites");
  if (u.size() != (Eigen::Index{1} << n_sites) || v.size() != u.size())
    throw std::invalid_argument("marginal vector: dimension/site mismatch");
  MarginalVector mv{n_sites, site_pairs(n_sites), {}};
  mv.rdms.resize(mv.pairs.size());
  const auto n_pairs = static_cast<std::int64_t>(mv.pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n_pairs; ++p) {
    const auto i = static_cast<std::size_t>(p);
    const int keep[2] = {mv.pairs[i].first, mv.pairs[i].second};
    mv.rdms[i] = cross_marginal(u, v, keep, n_sites);
  }
  return mv;
}

MarginalVector marginal_vector(const StateVector& state, int n_sites) {
  return cross_marginal_vector(state, state, n_sites);
}

namespace serial {

// Direct contraction rho[a][b] = sum_rest psi[a,rest] psi*[b,rest], one pass
// over the basis per pair.
MarginalVector marginal_vector(const StateVector& state, int n_sites) {
  if (state.size() != (Eigen::Index{1} << n_sites)) throw std::invalid_argument("marginal vector: dimension/site mismatch");
  MarginalVector mv{n_sites, site_pairs(n_sites), {}};
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  for (auto [j, k] : mv.pairs) {
    const std::uint64_t bj = std::uint64_t{1} << bit_position(j, n_sites);
    const std::uint64_t bk = std::uint64_t{1} << bit_position(k, n_sites);
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (std::uint64_t b = 0; b < dim; ++b) {
      if (b & (bj | bk)) continue;  // b enumerates the traced configuration
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) {
          const std::uint64_t ia = b | ((a & 2) ? bj : 0) | ((a & 1) ? bk : 0);
          const std::uint64_t ic = b | ((c & 2) ? bj : 0) | ((c & 1) ? bk : 0);
          rho(a, c) += state[static_cast<Eigen::Index>(ia)] * std::conj(state[static_cast<Eigen::Index>(ic)]);
        }
    }
    mv.rdms.push_back(rho);
  }
  return mv;
}

}  // namespace serial

MarginalVector combine_marginals(const std::vector<std::vector<MarginalVector>>& cross, std::span<const cplx> c) {
  if (cross.size() != c.size() || cross.empty()) throw std::invalid_argument("combine_marginals: size mismatch");
  MarginalVector out{cross[0][0].n_sites, cross[0][0].pairs, {}};
  out.rdms.assign(out.pairs.size(), Eigen::Matrix4cd::Zero());
  for (std::size_t p = 0; p < c.size(); ++p)
    for (std::size_t q = 0; q < c.size(); ++q)
      for (std::size_t i = 0; i < out.pairs.size(); ++i)
        out.rdms[i] += c[p] * std::conj(c[q]) * cross[p][q].rdms[i];
  return out;
}

json to_json(const MarginalVector& mv) {
  json pairs = json::array();
  json rdms = json::array();
  for (std::size_t i = 0; i < mv.pairs.size(); ++i) {
    pairs.push_back({mv.pairs[i].first, mv.pairs[i].second});
    json entries = json::array();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) entries.push_back({mv.rdms[i](r, c).real(), mv.rdms[i](r, c).imag()});
    rdms.push_back(std::move(entries));
  }
  return {{"pairs", pairs}, {"rdms", rdms}};
}

MarginalVector marginal_vector_from_json(const json& j) {
  MarginalVector mv;
  int max_site = -1;
  for (const auto& p : j.at("pairs")) {
    mv.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    max_site = std::max({max_site, mv.pairs.back().first, mv.pairs.back().second});
  }
  for (const auto& r : j.at("rdms")) {
    if (r.size() != 16) throw std::invalid_argument("each rdm needs 16 entries");
    Eigen::Matrix4cd m;
    for (int a = 0; a < 16; ++a) m(a / 4, a % 4) = cplx{r[a].at(0).get<double>(), r[a].at(1).get<double>()};
    mv.rdms.push_back(m);
  }
  if (mv.rdms.size() != mv.pairs.size()) throw std::invalid_argument("pairs and rdms differ in length");
  mv.n_sites = max_site + 1;
  return mv;
}

double max_deviation(const MarginalVector& a, const MarginalVector& b) {
  if (a.pairs != b.pairs) throw std::invalid_argument("marginal vectors cover different pairs");
  double d = 0.0;
  for (std::size_t i = 0; i < a.rdms.size(); ++i) d = std::max(d, (a.rdms[i] - b.rdms[i]).cwiseAbs().maxCoeff());
  return d;
}

}  // namespace nrep
