#include "nrep/pauli.hpp"

#include <bit>
#include <cstdlib>
#include <sstream>

namespace nrep {

int dense_site_limit() {
  if (const char* env = std::getenv("NREP_DENSE_MAX_SITES")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < 31) return static_cast<int>(v);
  }
  return 14;
}

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
  }
}

cplx Phase::apply(cplx z) const {
  switch (turns_) {
    case 1: return {-z.imag(), z.real()};
    case 2: return {-z.real(), -z.imag()};
    case 3: return {z.imag(), -z.real()};
    default: return z;
  }
}

PauliTerm PauliTerm::single(int site, Pauli p, cplx coeff) {
  PauliTerm t{{}, coeff};
  if (p != Pauli::I) t.letters.emplace(site, p);
  return t;
}

PauliTerm PauliTerm::product(std::initializer_list<std::pair<int, Pauli>> factors,
                             cplx coeff) {
  PauliTerm t = identity(coeff);
  for (auto [site, p] : factors) t = multiply(t, single(site, p));
  return t;
}

Pauli PauliTerm::at(int site) const {
  auto it = letters.find(site);
  return it == letters.end() ? Pauli::I : it->second;
}

std::string PauliTerm::to_string() const {
  if (letters.empty()) return "I";
  std::ostringstream os;
  bool first = true;
  for (auto [site, p] : letters) {
    if (!first) os << ' ';
    os << to_char(p) << '(' << site << ')';
    first = false;
  }
  return os.str();
}

namespace {

// Single-site product a*b = i^turns * result.
std::pair<Pauli, Phase> multiply_letters(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, Phase{}};
  if (b == Pauli::I) return {a, Phase{}};
  if (a == b) return {Pauli::I, Phase{}};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  const auto result = static_cast<Pauli>(6 - ia - ib);
  // X->Y->Z->X is the positive cycle.
  const bool positive = ib == ia % 3 + 1;
  return {result, Phase{positive ? 1 : 3}};
}

}  // namespace

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  PauliTerm out{a.letters, a.coeff * b.coeff};
  Phase phase;
  for (auto [site, pb] : b.letters) {
    auto it = out.letters.find(site);
    if (it == out.letters.end()) {
      out.letters.emplace(site, pb);
      continue;
    }
    auto [r, ph] = multiply_letters(it->second, pb);
    phase = phase * ph;
    if (r == Pauli::I)
      out.letters.erase(it);
    else
      it->second = r;
  }
  out.coeff = phase.apply(out.coeff);
  return out;
}

bool commutes(const PauliTerm& a, const PauliTerm& b) {
  int conflicts = 0;
  const auto& small = a.letters.size() <= b.letters.size() ? a.letters : b.letters;
  const auto& large = a.letters.size() <= b.letters.size() ? b.letters : a.letters;
  for (auto [site, p] : small) {
    auto it = large.find(site);
    if (it != large.end() && it->second != p) ++conflicts;
  }
  return conflicts % 2 == 0;
}

OperatorSum::OperatorSum(int n_sites, int width)
    : n_sites_(n_sites), width_(width > 0 ? width : n_sites) {
  if (n_sites < 0) throw std::invalid_argument("negative site count");
}

OperatorSum& OperatorSum::add(PauliTerm term) {
  if (term.max_site() >= n_sites_ || (!term.letters.empty() && term.letters.begin()->first < 0))
    throw std::out_of_range("Pauli term acts outside the operator's sites");
  terms_.push_back(std::move(term));
  return *this;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (other.n_sites_ != n_sites_) throw std::invalid_argument("site count mismatch");
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

OperatorSum OperatorSum::canonical() const {
  std::map<std::map<int, Pauli>, cplx> merged;
  for (const auto& t : terms_) merged[t.letters] += t.coeff;
  OperatorSum out(n_sites_, width_);
  for (auto& [letters, c] : merged)
    if (std::abs(c) >= 1e-14) out.terms_.push_back(PauliTerm{letters, c});
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  // Pauli strings are Hermitian, so the sum is Hermitian iff every merged
  // coefficient is real.
  for (const auto& t : canonical().terms_)
    if (std::abs(t.coeff.imag()) > tol) return false;
  return true;
}

double OperatorSum::coefficient_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

namespace {

struct Masks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Phase y_phase;  // i^{#Y}
};

Masks masks_of(const PauliTerm& term, int n_sites) {
  Masks m;
  int ny = 0;
  for (auto [site, p] : term.letters) {
    const std::uint64_t bit = std::uint64_t{1} << bit_position(site, n_sites);
    if (p == Pauli::X || p == Pauli::Y) m.x |= bit;
    if (p == Pauli::Z || p == Pauli::Y) m.z |= bit;
    if (p == Pauli::Y) ++ny;
  }
  m.y_phase = Phase{ny};
  return m;
}

// P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>, using Y = i X Z.
inline cplx amplitude(const Masks& m, cplx coeff, std::uint64_t b) {
  cplx c = m.y_phase.apply(coeff);
  return (std::popcount(b & m.z) & 1) ? -c : c;
}

void check_dense(int n_sites, int max_sites) {
  if (n_sites > max_sites)
    throw DimensionLimitError("dense limit exceeded: " + std::to_string(n_sites) +
                              " sites > " + std::to_string(max_sites));
}

}  // namespace

CMatrix to_matrix(const PauliTerm& term, int n_sites) {
  OperatorSum op(n_sites);
  op.add(term);
  return to_matrix(op);
}

CMatrix to_matrix(const OperatorSum& op) { return to_matrix(op, dense_site_limit()); }

CMatrix to_matrix(const OperatorSum& op, int max_sites) {
  check_dense(op.n_sites(), max_sites);
  const std::uint64_t dim = std::uint64_t{1} << op.n_sites();
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : op.terms()) {
    const Masks mk = masks_of(t, op.n_sites());
    for (std::uint64_t b = 0; b < dim; ++b)
      m(static_cast<Eigen::Index>(b ^ mk.x), static_cast<Eigen::Index>(b)) += amplitude(mk, t.coeff, b);
  }
  return m;
}

StateVector apply(const PauliTerm& term, const StateVector& state, int n_sites) {
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  if (static_cast<std::uint64_t>(state.size()) != dim)
    throw std::invalid_argument("state dimension does not match site count");
  const Masks mk = masks_of(term, n_sites);
  StateVector out = StateVector::Zero(state.size());
  for (std::uint64_t b = 0; b < dim; ++b)
    out[static_cast<Eigen::Index>(b ^ mk.x)] += amplitude(mk, term.coeff, b) * state[static_cast<Eigen::Index>(b)];
  return out;
}

StateVector apply(const OperatorSum& op, const StateVector& state) {
  StateVector out = StateVector::Zero(state.size());
  for (const auto& t : op.terms()) out += apply(t, state, op.n_sites());
  return out;
}

json to_json(const OperatorSum& op) {
  json list = json::array();
  for (const auto& t : op.terms()) {
    json sites = json::array();
    std::string letters;
    for (auto [site, p] : t.letters) {
      const auto s = SiteIndex::from_flat(site, op.width());
      sites.push_back({s.row, s.col});
      letters.push_back(to_char(p));
    }
    list.push_back({{"sites", sites}, {"letters", letters}, {"coeff", {t.coeff.real(), t.coeff.imag()}}});
  }
  return list;
}

OperatorSum operator_sum_from_json(const json& j, int n_sites, int width) {
  OperatorSum op(n_sites, width);
  for (const auto& item : j) {
    const auto& sites = item.at("sites");
    const auto letters = item.at("letters").get<std::string>();
    if (sites.size() != letters.size())
      throw std::invalid_argument("sites and letters differ in length");
    PauliTerm t = PauliTerm::identity({item.at("coeff").at(0).get<double>(),
                                       item.at("coeff").at(1).get<double>()});
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const SiteIndex s{sites[i].at(0).get<int>(), sites[i].at(1).get<int>()};
      t = multiply(t, PauliTerm::single(s.flat(op.width()), pauli_from_char(letters[i])));
    }
    op.add(std::move(t));
  }
  return op;
}

}  // namespace nrep
