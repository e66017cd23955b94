#include "nrep/lattice.hpp"

#include <stdexcept>
#include <string>

namespace nrep {

void CompassParams::validate() const {
  if (n < 2) throw std::invalid_argument("compass lattice side must be >= 2");
  if (!(jx > 0.0) || !(jz > 0.0)) throw std::invalid_argument("compass couplings must be positive");
  if (boundary == Boundary::cyclic && n < 3)
    throw std::invalid_argument("cyclic compass model requires n >= 3; use open boundary for n = 2");
}

OperatorSum build_compass(const CompassParams& p) {
  p.validate();
  const int n = p.n;
  const bool cyclic = p.boundary == Boundary::cyclic;
  OperatorSum h(n * n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (!cyclic && j + 1 >= n) continue;
      const int below = ((j + 1) % n) * n + k;
      h.add(PauliTerm::product({{j * n + k, Pauli::X}, {below, Pauli::X}}, -p.jx));
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (!cyclic && k + 1 >= n) continue;
      const int right = j * n + (k + 1) % n;
      h.add(PauliTerm::product({{j * n + k, Pauli::Z}, {right, Pauli::Z}}, -p.jz));
    }
  return h;
}

namespace {

void check_index(int i, int n, const char* what) {
  if (n < 1 || i < 0 || i >= n)
    throw std::out_of_range(std::string(what) + " index " + std::to_string(i) +
                            " out of range for n = " + std::to_string(n));
}

}  // namespace

PauliTerm build_column_parity(int k, int n) {
  check_index(k, n, "column");
  PauliTerm t;
  for (int j = 0; j < n; ++j) t.letters.emplace(j * n + k, Pauli::Z);
  return t;
}

PauliTerm build_row_parity(int j, int n) {
  check_index(j, n, "row");
  PauliTerm t;
  for (int k = 0; k < n; ++k) t.letters.emplace(j * n + k, Pauli::X);
  return t;
}

PauliTerm build_logical_x(int j, int n) { return build_row_parity(j, n); }
PauliTerm build_logical_z(int k, int n) { return build_column_parity(k, n); }

int toric_horizontal_edge(int r, int c, int L) {
  return ((r % L + L) % L) * L + (c % L + L) % L;
}

int toric_vertical_edge(int r, int c, int L) {
  return L * L + ((r % L + L) % L) * L + (c % L + L) % L;
}

std::vector<PauliTerm> toric_stars(int L) {
  if (L < 2) throw std::invalid_argument("toric code requires L >= 2");
  std::vector<PauliTerm> stars;
  for (int r = 0; r < L; ++r)
    for (int c = 0; c < L; ++c) {
      PauliTerm t;
      for (int q : {toric_horizontal_edge(r, c, L), toric_horizontal_edge(r, c - 1, L),
                    toric_vertical_edge(r, c, L), toric_vertical_edge(r - 1, c, L)})
        t.letters.emplace(q, Pauli::X);
      stars.push_back(std::move(t));
    }
  return stars;
}

std::vector<PauliTerm> toric_plaquettes(int L) {
  if (L < 2) throw std::invalid_argument("toric code requires L >= 2");
  std::vector<PauliTerm> plaquettes;
  for (int r = 0; r < L; ++r)
    for (int c = 0; c < L; ++c) {
      PauliTerm t;
      for (int q : {toric_horizontal_edge(r, c, L), toric_horizontal_edge(r + 1, c, L),
                    toric_vertical_edge(r, c, L), toric_vertical_edge(r, c + 1, L)})
        t.letters.emplace(q, Pauli::Z);
      plaquettes.push_back(std::move(t));
    }
  return plaquettes;
}

OperatorSum build_toric(int L) {
  OperatorSum h(2 * L * L, L);
  for (auto t : toric_stars(L)) {
    t.coeff = -1.0;
    h.add(std::move(t));
  }
  for (auto t : toric_plaquettes(L)) {
    t.coeff = -1.0;
    h.add(std::move(t));
  }
  return h;
}

std::vector<std::pair<int, int>> site_pairs(int n_sites) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2);
  for (int j = 0; j < n_sites; ++j)
    for (int k = j + 1; k < n_sites; ++k) pairs.emplace_back(j, k);
  return pairs;
}

namespace {

std::size_t pair_index(int j, int k, int n) {
  return static_cast<std::size_t>(j) * (2 * n - j - 1) / 2 + static_cast<std::size_t>(k - j - 1);
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

Eigen::Matrix2cd sigma(Pauli p) {
  Eigen::Matrix2cd m;
  const cplx i{0.0, 1.0};
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

constexpr Pauli kAllPaulis[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

}  // namespace

ReducedHamiltonianVector build_reduced_hamiltonian(std::span<const Eigen::Matrix2cd> one_body,
                                                   std::span<const Eigen::Matrix4cd> two_body,
                                                   double e0, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("reduced Hamiltonian needs N >= 2");
  const auto pairs = site_pairs(n_sites);
  if (!one_body.empty() && one_body.size() != static_cast<std::size_t>(n_sites))
    throw std::invalid_argument("one-body list must have one entry per site");
  if (two_body.size() != pairs.size())
    throw std::invalid_argument("two-body list must have one entry per site pair");
  for (const auto& t : one_body)
    if (!is_hermitian(t)) throw std::invalid_argument("one-body term is not Hermitian");
  for (const auto& v : two_body)
    if (!is_hermitian(v)) throw std::invalid_argument("two-body term is not Hermitian");

  const double n_pairs = static_cast<double>(pairs.size());
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
  ReducedHamiltonianVector rh{n_sites, e0, pairs, {}};
  rh.entries.reserve(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [j, k] = pairs[p];
    Eigen::Matrix4cd h = two_body[p] - (e0 / n_pairs) * Eigen::Matrix4cd::Identity();
    if (!one_body.empty()) h += (kron(one_body[j], id2) + kron(id2, one_body[k])) / double(n_sites - 1);
    rh.entries.push_back(h);
  }
  return rh;
}

BodyTerms split_body_terms(const OperatorSum& op) {
  const int n = op.n_sites();
  BodyTerms bt;
  bt.n_sites = n;
  bt.one_body.assign(n, Eigen::Matrix2cd::Zero());
  bt.two_body.assign(static_cast<std::size_t>(n) * (n - 1) / 2, Eigen::Matrix4cd::Zero());
  for (const auto& t : op.terms()) {
    switch (t.weight()) {
      case 0:
        bt.constant += t.coeff.real();
        break;
      case 1: {
        auto [site, p] = *t.letters.begin();
        bt.one_body[site] += t.coeff * sigma(p);
        break;
      }
      case 2: {
        auto it = t.letters.begin();
        auto [j, pj] = *it++;
        auto [k, pk] = *it;
        bt.two_body[pair_index(j, k, n)] += t.coeff * kron(sigma(pj), sigma(pk));
        break;
      }
      default:
        throw std::invalid_argument("term " + t.to_string() + " acts on more than two sites");
    }
  }
  return bt;
}

ReducedHamiltonianVector build_reduced_hamiltonian(const OperatorSum& op, double e0) {
  BodyTerms bt = split_body_terms(op);
  const double n_pairs = static_cast<double>(bt.two_body.size());
  for (auto& v : bt.two_body) v += (bt.constant / n_pairs) * Eigen::Matrix4cd::Identity();
  return build_reduced_hamiltonian(bt.one_body, bt.two_body, e0, bt.n_sites);
}

OperatorSum to_operator_sum(const BodyTerms& terms) {
  const int n = terms.n_sites;
  OperatorSum op(n);
  double constant = terms.constant;
  for (int j = 0; j < static_cast<int>(terms.one_body.size()); ++j)
    for (Pauli p : kAllPaulis) {
      const cplx c = (sigma(p) * terms.one_body[j]).trace() / 2.0;
      if (std::abs(c) < 1e-14) continue;
      if (p == Pauli::I)
        constant += c.real();
      else
        op.add(PauliTerm::single(j, p, c));
    }
  const auto pairs = site_pairs(n);
  for (std::size_t idx = 0; idx < terms.two_body.size(); ++idx) {
    auto [j, k] = pairs[idx];
    for (Pauli a : kAllPaulis)
      for (Pauli b : kAllPaulis) {
        const cplx c = (kron(sigma(a), sigma(b)) * terms.two_body[idx]).trace() / 4.0;
        if (std::abs(c) < 1e-14) continue;
        if (a == Pauli::I && b == Pauli::I)
          constant += c.real();
        else
          op.add(PauliTerm::product({{j, a}, {k, b}}, c));
      }
  }
  if (constant != 0.0) op.add(PauliTerm::identity(constant));
  return op.canonical();
}

namespace {

template <int D>
Eigen::Matrix<cplx, D, D> matrix_from_json(const json& j) {
  if (j.size() != static_cast<std::size_t>(D * D))
    throw std::invalid_argument("expected " + std::to_string(D * D) + " matrix entries");
  Eigen::Matrix<cplx, D, D> m;
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) {
      const auto& e = j[static_cast<std::size_t>(r * D + c)];
      m(r, c) = cplx{e.at(0).get<double>(), e.at(1).get<double>()};
    }
  return m;
}

template <typename M>
json matrix_to_json(const M& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

}  // namespace

BodyTerms body_terms_from_json(const json& j) {
  BodyTerms bt;
  bt.n_sites = j.at("n_sites").get<int>();
  if (bt.n_sites < 2) throw std::invalid_argument("custom model needs n_sites >= 2");
  const std::size_t n_pairs = static_cast<std::size_t>(bt.n_sites) * (bt.n_sites - 1) / 2;
  bt.one_body.assign(bt.n_sites, Eigen::Matrix2cd::Zero());
  bt.two_body.assign(n_pairs, Eigen::Matrix4cd::Zero());
  if (j.contains("one_body")) {
    const auto& ob = j.at("one_body");
    if (ob.size() != static_cast<std::size_t>(bt.n_sites))
      throw std::invalid_argument("one_body must list one 2x2 matrix per site");
    for (std::size_t s = 0; s < ob.size(); ++s) bt.one_body[s] = matrix_from_json<2>(ob[s]);
  }
  if (j.contains("two_body")) {
    const auto& tb = j.at("two_body");
    if (tb.size() != n_pairs) throw std::invalid_argument("two_body must list one 4x4 matrix per site pair");
    for (std::size_t p = 0; p < tb.size(); ++p) bt.two_body[p] = matrix_from_json<4>(tb[p]);
  }
  bt.constant = j.value("constant", 0.0);
  return bt;
}

json to_json(const BodyTerms& terms) {
  json out{{"n_sites", terms.n_sites}, {"constant", terms.constant}};
  out["one_body"] = json::array();
  for (const auto& m : terms.one_body) out["one_body"].push_back(matrix_to_json(m));
  out["two_body"] = json::array();
  for (const auto& m : terms.two_body) out["two_body"].push_back(matrix_to_json(m));
  return out;
}

std::pair<StateVector, StateVector> build_repetition_code_states(int n) {
  if (n < 2) throw std::invalid_argument("repetition code needs n >= 2");
  if (n > dense_site_limit()) throw DimensionLimitError("repetition code state exceeds dense limit");
  const Eigen::Index dim = Eigen::Index{1} << n;
  StateVector zeros = StateVector::Zero(dim);
  StateVector ones = StateVector::Zero(dim);
  zeros[0] = 1.0;
  ones[dim - 1] = 1.0;
  return {zeros, ones};
}

}  // namespace nrep
