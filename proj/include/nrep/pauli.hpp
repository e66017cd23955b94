#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace nrep {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using json = nlohmann::json;

/// Raised when a dense representation would exceed the configured ceiling.
class DimensionLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Maximum number of sites for which dense 2^n matrices are built. Defaults
/// to 14; overridden by the NREP_DENSE_MAX_SITES environment variable.
int dense_site_limit();

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Lattice coordinate of a site. Flat index is row-major.
struct SiteIndex {
  int row = 0;
  int col = 0;

  int flat(int width) const { return row * width + col; }
  static SiteIndex from_flat(int flat, int width) {
    return {flat / width, flat % width};
  }
};

/// Exact element of {1, i, -1, -i}, stored as a count of quarter turns.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int quarter_turns) : turns_(((quarter_turns % 4) + 4) % 4) {}

  constexpr int quarter_turns() const { return turns_; }
  constexpr Phase operator*(Phase o) const { return Phase(turns_ + o.turns_); }
  constexpr bool operator==(const Phase&) const = default;

  /// Multiplies z by the phase without rounding (component swaps and negations).
  cplx apply(cplx z) const;

 private:
  int turns_ = 0;
};

/// A tensor product of single-site Paulis with a complex weight. Sites absent
/// from `letters` carry the identity; identity letters are never stored.
struct PauliTerm {
  std::map<int, Pauli> letters;
  cplx coeff{1.0, 0.0};

  static PauliTerm identity(cplx coeff = 1.0) { return PauliTerm{{}, coeff}; }
  static PauliTerm single(int site, Pauli p, cplx coeff = 1.0);
  static PauliTerm product(std::initializer_list<std::pair<int, Pauli>> factors,
                           cplx coeff = 1.0);

  Pauli at(int site) const;
  int weight() const { return static_cast<int>(letters.size()); }
  int max_site() const { return letters.empty() ? -1 : letters.rbegin()->first; }
  PauliTerm adjoint() const { return PauliTerm{letters, std::conj(coeff)}; }

  /// Human-readable form such as "X(3) Z(17)"; coefficient omitted.
  std::string to_string() const;
};

/// Product a*b with the phase accumulated exactly from single-site relations.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// True iff the number of sites where both act non-trivially with different
/// letters is even.
bool commutes(const PauliTerm& a, const PauliTerm& b);

/// Weighted sum of Pauli terms on a fixed number of sites. `width` is the
/// lattice row length used only for (row, col) serialization.
class OperatorSum {
 public:
  explicit OperatorSum(int n_sites, int width = 0);

  int n_sites() const { return n_sites_; }
  int width() const { return width_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  OperatorSum& add(PauliTerm term);
  OperatorSum& operator+=(const OperatorSum& other);

  /// Merge terms with identical letter maps; drop |coeff| < 1e-14.
  OperatorSum canonical() const;

  /// Adjoint closure check on the canonical form.
  bool is_hermitian(double tol = 1e-12) const;

  /// Sum of |coeff| over terms; an upper bound on the operator norm.
  double coefficient_norm() const;

 private:
  int n_sites_;
  int width_;
  std::vector<PauliTerm> terms_;
};

/// Basis convention: site 0 is the most significant bit of the
/// computational-basis label, site n-1 the least significant.
inline int bit_position(int site, int n_sites) { return n_sites - 1 - site; }

CMatrix to_matrix(const PauliTerm& term, int n_sites);
CMatrix to_matrix(const OperatorSum& op);
CMatrix to_matrix(const OperatorSum& op, int max_sites);

StateVector apply(const PauliTerm& term, const StateVector& state, int n_sites);
StateVector apply(const OperatorSum& op, const StateVector& state);

/// Serialized as a list of {"sites": [[row, col], ...], "letters": "XZ",
/// "coeff": [re, im]}.
json to_json(const OperatorSum& op);
OperatorSum operator_sum_from_json(const json& j, int n_sites, int width);

}  // namespace nrep
