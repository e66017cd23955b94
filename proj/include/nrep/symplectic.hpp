#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrep/blindness.hpp"
#include "nrep/pauli.hpp"

namespace nrep {

/// Pauli operator modulo phase as packed GF(2) bit-vectors; Y sets both bits.
class SymplecticPauli {
 public:
  SymplecticPauli() = default;
  explicit SymplecticPauli(int n_qubits);

  static SymplecticPauli from_term(const PauliTerm& t, int n_qubits);

  int n_qubits() const { return n_; }
  const std::vector<std::uint64_t>& x() const { return x_; }
  const std::vector<std::uint64_t>& z() const { return z_; }

  Pauli get(int q) const;
  void set(int q, Pauli p);

  int weight() const;
  bool is_identity() const;

  SymplecticPauli& operator*=(const SymplecticPauli& o);  // phase dropped
  bool operator==(const SymplecticPauli&) const = default;

  std::string to_string() const;  // "X(3) Z(17)"

 private:
  int n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

/// Parity of a.x . b.z + a.z . b.x; 0 iff the operators commute. Throws
/// std::invalid_argument on length mismatch.
int symplectic_product(const SymplecticPauli& a, const SymplecticPauli& b);

/// Abelian Pauli group given by generators, with an echelon basis for
/// membership tests.
class StabilizerGroup {
 public:
  /// Throws std::invalid_argument if two generators anticommute.
  StabilizerGroup(int n_qubits, std::vector<SymplecticPauli> generators);

  int n_qubits() const { return n_; }
  const std::vector<SymplecticPauli>& generators() const { return generators_; }
  /// Number of independent generators.
  int rank() const { return static_cast<int>(echelon_.size()); }

  bool contains(const SymplecticPauli& p) const;

 private:
  struct Row {
    SymplecticPauli pauli;
    int pivot;  // bit index: x bits 0..n-1, z bits n..2n-1
  };
  int n_;
  std::vector<SymplecticPauli> generators_;
  std::vector<Row> echelon_;
};

/// p (up to phase) is a product of generators.
bool in_group(const SymplecticPauli& p, const StabilizerGroup& g);

/// L^2-1 stars then L^2-1 plaquettes (the last of each dropped), matching
/// the terms of build_toric.
StabilizerGroup toric_generators(int L);

/// Number of Paulis of weight 1..m on n qubits: sum_w C(n,w) 3^w.
std::uint64_t count_low_weight_paulis(int n, int m);

/// Exhaustive scan of all Paulis of weight 1..m. Passes iff each either
/// anticommutes with a generator or lies in the group; on failure stops after
/// the first failing weight and reports the first logical of that weight in
/// enumeration order (supports lexicographic, then letters X<Y<Z from the
/// last support qubit fastest). `threads` <= 0 uses the OpenMP default.
/// Deviation fields are operator-level: 2 on the diagonal part (a logical
/// Pauli has eigenvalues +-1 on the code space), 0 otherwise.
BlindnessCertificate certify_stabilizer_blindness(const StabilizerGroup& g, int m, int threads = 0);

namespace serial {
/// Reference scan building each candidate explicitly and testing it against
/// every generator with symplectic_product.
BlindnessCertificate certify_stabilizer_blindness(const StabilizerGroup& g, int m);
}

}  // namespace nrep
