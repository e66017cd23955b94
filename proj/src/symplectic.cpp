#include "nrep/symplectic.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "nrep/lattice.hpp"

namespace nrep {

namespace {

std::size_t words_for(int n) { return static_cast<std::size_t>((n + 63) / 64); }

}  // namespace

SymplecticPauli::SymplecticPauli(int n_qubits)
    : n_(n_qubits), x_(words_for(n_qubits), 0), z_(words_for(n_qubits), 0) {
  if (n_qubits < 0) throw std::invalid_argument("SymplecticPauli: negative qubit count");
}

SymplecticPauli SymplecticPauli::from_term(const PauliTerm& t, int n_qubits) {
  SymplecticPauli p(n_qubits);
  for (auto [q, letter] : t.letters) p.set(q, letter);
  return p;
}

Pauli SymplecticPauli::get(int q) const {
  const bool xb = (x_[static_cast<std::size_t>(q / 64)] >> (q % 64)) & 1;
  const bool zb = (z_[static_cast<std::size_t>(q / 64)] >> (q % 64)) & 1;
  if (xb && zb) return Pauli::Y;
  if (xb) return Pauli::X;
  if (zb) return Pauli::Z;
  return Pauli::I;
}

void SymplecticPauli::set(int q, Pauli p) {
  if (q < 0 || q >= n_) throw std::out_of_range("SymplecticPauli: qubit out of range");
  const std::uint64_t bit = std::uint64_t{1} << (q % 64);
  auto& xw = x_[static_cast<std::size_t>(q / 64)];
  auto& zw = z_[static_cast<std::size_t>(q / 64)];
  xw &= ~bit;
  zw &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) xw |= bit;
  if (p == Pauli::Z || p == Pauli::Y) zw |= bit;
}

int SymplecticPauli::weight() const {
  int w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

bool SymplecticPauli::is_identity() const { return weight() == 0; }

SymplecticPauli& SymplecticPauli::operator*=(const SymplecticPauli& o) {
  if (o.n_ != n_) throw std::invalid_argument("SymplecticPauli: length mismatch");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    x_[i] ^= o.x_[i];
    z_[i] ^= o.z_[i];
  }
  return *this;
}

std::string SymplecticPauli::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int q = 0; q < n_; ++q) {
    const Pauli p = get(q);
    if (p == Pauli::I) continue;
    if (!first) os << ' ';
    os << to_char(p) << '(' << q << ')';
    first = false;
  }
  return first ? "I" : os.str();
}

int symplectic_product(const SymplecticPauli& a, const SymplecticPauli& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("symplectic_product: length mismatch");
  int parity = 0;
  for (std::size_t i = 0; i < a.x().size(); ++i)
    parity ^= std::popcount((a.x()[i] & b.z()[i]) ^ (a.z()[i] & b.x()[i])) & 1;
  return parity;
}

namespace {

bool bit_at(const SymplecticPauli& p, int idx) {
  const int n = p.n_qubits();
  const auto& words = idx < n ? p.x() : p.z();
  const int q = idx < n ? idx : idx - n;
  return (words[static_cast<std::size_t>(q / 64)] >> (q % 64)) & 1;
}

int lowest_bit(const SymplecticPauli& p) {
  const int n = p.n_qubits();
  for (std::size_t i = 0; i < p.x().size(); ++i)
    if (p.x()[i]) return static_cast<int>(i * 64) + std::countr_zero(p.x()[i]);
  for (std::size_t i = 0; i < p.z().size(); ++i)
    if (p.z()[i]) return n + static_cast<int>(i * 64) + std::countr_zero(p.z()[i]);
  return -1;
}

}  // namespace

StabilizerGroup::StabilizerGroup(int n_qubits, std::vector<SymplecticPauli> generators)
    : n_(n_qubits), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.n_qubits() != n_) throw std::invalid_argument("StabilizerGroup: generator length mismatch");
  for (std::size_t i = 0; i < generators_.size(); ++i)
    for (std::size_t j = i + 1; j < generators_.size(); ++j)
      if (symplectic_product(generators_[i], generators_[j]))
        throw std::invalid_argument("StabilizerGroup: generators " + std::to_string(i) + " and " +
                                    std::to_string(j) + " anticommute");
  for (const auto& g : generators_) {
    SymplecticPauli r = g;
    for (const auto& row : echelon_)
      if (bit_at(r, row.pivot)) r *= row.pauli;
    const int pivot = lowest_bit(r);
    if (pivot >= 0) echelon_.push_back({std::move(r), pivot});
  }
}

bool StabilizerGroup::contains(const SymplecticPauli& p) const {
  if (p.n_qubits() != n_) return false;
  SymplecticPauli r = p;
  for (const auto& row : echelon_)
    if (bit_at(r, row.pivot)) r *= row.pauli;
  return r.is_identity();
}

bool in_group(const SymplecticPauli& p, const StabilizerGroup& g) { return g.contains(p); }

StabilizerGroup toric_generators(int L) {
  const int n = 2 * L * L;
  const auto stars = toric_stars(L);
  const auto plaquettes = toric_plaquettes(L);
  std::vector<SymplecticPauli> gens;
  for (std::size_t i = 0; i + 1 < stars.size(); ++i) gens.push_back(SymplecticPauli::from_term(stars[i], n));
  for (std::size_t i = 0; i + 1 < plaquettes.size(); ++i)
    gens.push_back(SymplecticPauli::from_term(plaquettes[i], n));
  return StabilizerGroup(n, std::move(gens));
}

std::uint64_t count_low_weight_paulis(int n, int m) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, w)
  std::uint64_t pow3 = 1;
  for (int w = 1; w <= m && w <= n; ++w) {
    binom = binom * static_cast<std::uint64_t>(n - w + 1) / static_cast<std::uint64_t>(w);
    pow3 *= 3;
    total += binom * pow3;
  }
  return total;
}

namespace {

constexpr Pauli kLetters[3] = {Pauli::X, Pauli::Y, Pauli::Z};

struct Candidate {
  std::vector<int> support;
  std::vector<Pauli> letters;
};

SymplecticPauli build(const Candidate& c, int n) {
  SymplecticPauli p(n);
  for (std::size_t i = 0; i < c.support.size(); ++i) p.set(c.support[i], c.letters[i]);
  return p;
}

BlindnessCertificate make_certificate(int m, std::uint64_t visited, const std::optional<SymplecticPauli>& logical,
                                      const std::optional<Candidate>& where) {
  BlindnessCertificate cert;
  cert.m = m;
  cert.method = "symplectic";
  cert.tolerance = 0.0;
  cert.candidates_checked = visited;
  cert.passed = !logical;
  if (logical) {
    cert.max_diagonal_deviation = 2.0;
    cert.diagonal_witness = BlindnessWitness{where->support, 0, 1, 2.0, logical->to_string()};
  }
  return cert;
}

// Per-(qubit, letter) syndromes: bit i set iff the single-qubit Pauli
// anticommutes with generator i.
class SyndromeTable {
 public:
  explicit SyndromeTable(const StabilizerGroup& g)
      : n_(g.n_qubits()), words_(std::max<std::size_t>(1, (g.generators().size() + 63) / 64)) {
    table_.assign(static_cast<std::size_t>(n_) * 3 * words_, 0);
    for (std::size_t gi = 0; gi < g.generators().size(); ++gi)
      for (int q = 0; q < n_; ++q)
        for (int l = 0; l < 3; ++l) {
          SymplecticPauli single(n_);
          single.set(q, kLetters[l]);
          if (symplectic_product(single, g.generators()[gi])) at(q, l)[gi / 64] |= std::uint64_t{1} << (gi % 64);
        }
  }

  std::size_t words() const { return words_; }
  const std::uint64_t* at(int q, int l) const {
    return &table_[(static_cast<std::size_t>(q) * 3 + static_cast<std::size_t>(l)) * words_];
  }

 private:
  std::uint64_t* at(int q, int l) {
    return &table_[(static_cast<std::size_t>(q) * 3 + static_cast<std::size_t>(l)) * words_];
  }
  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> table_;
};

// Depth-first scan of all weight-w Paulis whose first support qubit is
// `lead`, in canonical order. Records the first logical found.
class ShardScanner {
 public:
  ShardScanner(const StabilizerGroup& g, const SyndromeTable& table, int w)
      : g_(g), table_(table), w_(w), syndromes_(static_cast<std::size_t>(w + 1) * table.words(), 0),
        support_(static_cast<std::size_t>(w)), letters_(static_cast<std::size_t>(w)) {}

  void scan(int lead) {
    support_[0] = lead;
    choose(1, lead + 1);
  }

  std::uint64_t visited() const { return visited_; }
  const std::optional<Candidate>& first_logical() const { return first_; }

 private:
  void choose(int depth, int next) {
    if (depth == w_) {
      assign(0);
      return;
    }
    const int n = g_.n_qubits();
    for (int q = next; q <= n - (w_ - depth); ++q) {
      support_[static_cast<std::size_t>(depth)] = q;
      choose(depth + 1, q + 1);
    }
  }

  // Letters for the fixed support, last position fastest; the syndrome is
  // accumulated one position at a time.
  void assign(int depth) {
    const std::size_t nw = table_.words();
    const std::uint64_t* parent = &syndromes_[static_cast<std::size_t>(depth) * nw];
    std::uint64_t* mine = &syndromes_[static_cast<std::size_t>(depth + 1) * nw];
    const int q = support_[static_cast<std::size_t>(depth)];
    for (int l = 0; l < 3; ++l) {
      const std::uint64_t* s = table_.at(q, l);
      for (std::size_t i = 0; i < nw; ++i) mine[i] = parent[i] ^ s[i];
      letters_[static_cast<std::size_t>(depth)] = kLetters[l];
      if (depth + 1 < w_) {
        assign(depth + 1);
        continue;
      }
      ++visited_;
      if (first_) continue;
      bool zero = true;
      for (std::size_t i = 0; i < nw && zero; ++i) zero = mine[i] == 0;
      if (!zero) continue;
      Candidate c{support_, letters_};
      if (!g_.contains(build(c, g_.n_qubits()))) first_ = std::move(c);
    }
  }

  const StabilizerGroup& g_;
  const SyndromeTable& table_;
  int w_;
  std::vector<std::uint64_t> syndromes_;
  std::vector<int> support_;
  std::vector<Pauli> letters_;
  std::uint64_t visited_ = 0;
  std::optional<Candidate> first_;
};

}  // namespace

BlindnessCertificate certify_stabilizer_blindness(const StabilizerGroup& g, int m, int threads) {
  if (m < 1) throw std::invalid_argument("certify_stabilizer_blindness: m must be >= 1");
  const int n = g.n_qubits();
  const SyndromeTable table(g);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  std::uint64_t visited = 0;
  for (int w = 1; w <= m && w <= n; ++w) {
    const int leads = n - w + 1;
    std::vector<std::optional<Candidate>> found(static_cast<std::size_t>(leads));
    std::uint64_t visited_w = 0;
#pragma omp parallel for schedule(dynamic) num_threads(n_threads) reduction(+ : visited_w)
    for (int lead = 0; lead < leads; ++lead) {
      ShardScanner scanner(g, table, w);
      scanner.scan(lead);
      visited_w += scanner.visited();
      found[static_cast<std::size_t>(lead)] = scanner.first_logical();
    }
    visited += visited_w;
    for (const auto& f : found)
      if (f) return make_certificate(m, visited, build(*f, n), f);
  }
  return make_certificate(m, visited, std::nullopt, std::nullopt);
}

namespace serial {

BlindnessCertificate certify_stabilizer_blindness(const StabilizerGroup& g, int m) {
  if (m < 1) throw std::invalid_argument("certify_stabilizer_blindness: m must be >= 1");
  const int n = g.n_qubits();
  std::uint64_t visited = 0;
  for (int w = 1; w <= m && w <= n; ++w) {
    std::optional<Candidate> first;
    for (const auto& support : site_subsets(n, w)) {
      std::vector<int> digits(static_cast<std::size_t>(w), 0);
      while (true) {
        Candidate c{support, {}};
        for (int d : digits) c.letters.push_back(kLetters[d]);
        ++visited;
        if (!first) {
          const SymplecticPauli p = build(c, n);
          bool commutes_all = true;
          for (const auto& gen : g.generators())
            if (symplectic_product(p, gen)) {
              commutes_all = false;
              break;
            }
          if (commutes_all && !in_group(p, g)) first = c;
        }
        int i = w - 1;
        while (i >= 0 && digits[static_cast<std::size_t>(i)] == 2) digits[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++digits[static_cast<std::size_t>(i)];
      }
    }
    if (first) return make_certificate(m, visited, build(*first, n), first);
  }
  return make_certificate(m, visited, std::nullopt, std::nullopt);
}

}  // namespace serial

}  // namespace nrep
