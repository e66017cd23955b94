#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nrep/pauli.hpp"

namespace nrep {

enum class Boundary { cyclic, open };

struct CompassParams {
  int n = 3;
  double jx = 1.0;
  double jz = 1.0;
  Boundary boundary = Boundary::cyclic;

  /// Throws std::invalid_argument. Cyclic n=2 is rejected: the wrap-around
  /// bond would duplicate the direct one.
  void validate() const;
};

/// H = -sum_{jk} (Jx X_{j,k} X_{j+1,k} + Jz Z_{j,k} Z_{j,k+1}) on an n x n
/// lattice, site (j,k) at flat index j*n + k. XX terms come first.
OperatorSum build_compass(const CompassParams& p);

/// prod_j Z_{j,k}: parity of column k.
PauliTerm build_column_parity(int k, int n);
/// prod_k X_{j,k}: X-parity of row j.
PauliTerm build_row_parity(int j, int n);

/// Parity-conversion operator prod_i X_{j,i} acting on row j.
PauliTerm build_logical_x(int j, int n);
/// Phase-flip operator prod_i Z_{i,k} acting on column k.
PauliTerm build_logical_z(int k, int n);

// Toric code on an L x L torus. Edge qubits are numbered horizontal first,
// row-major: h(r,c) = r*L + c joins vertex (r,c) to (r,c+1); v(r,c) =
// L*L + r*L + c joins (r,c) to (r+1,c).
int toric_horizontal_edge(int r, int c, int L);
int toric_vertical_edge(int r, int c, int L);
std::vector<PauliTerm> toric_stars(int L);       // X-type, one per vertex
std::vector<PauliTerm> toric_plaquettes(int L);  // Z-type, one per face

/// -sum stars - sum plaquettes on 2 L^2 qubits.
OperatorSum build_toric(int L);

/// Ordered site pairs (j<k), lexicographic.
std::vector<std::pair<int, int>> site_pairs(int n_sites);

/// Vector of two-site reduced Hamiltonians, one 4x4 entry per pair (j<k).
/// The first site of a pair is the more significant bit of the 4x4 index.
struct ReducedHamiltonianVector {
  int n_sites = 0;
  double e0 = 0.0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<Eigen::Matrix4cd> entries;
};

/// H_jk = V_jk + (T_j (x) I + I (x) T_k)/(N-1) - E0 / C(N,2).
ReducedHamiltonianVector build_reduced_hamiltonian(std::span<const Eigen::Matrix2cd> one_body,
                                                   std::span<const Eigen::Matrix4cd> two_body,
                                                   double e0, int n_sites);

/// One- and two-body content of an operator with at most 2-site terms.
/// Identity terms collect in `constant`.
struct BodyTerms {
  int n_sites = 0;
  std::vector<Eigen::Matrix2cd> one_body;  // per site
  std::vector<Eigen::Matrix4cd> two_body;  // per pair, site_pairs order
  double constant = 0.0;
};

/// Throws std::invalid_argument on any term of weight > 2.
BodyTerms split_body_terms(const OperatorSum& op);

/// Reduced Hamiltonian of a <=2-body operator; any identity part is spread
/// evenly over the pairs.
ReducedHamiltonianVector build_reduced_hamiltonian(const OperatorSum& op, double e0);

/// Custom model descriptor: {"n_sites": N, "one_body": [[[re,im] x4] per
/// site], "two_body": [[[re,im] x16] per pair]}, matrices row-major.
BodyTerms body_terms_from_json(const json& j);
json to_json(const BodyTerms& terms);

/// Pauli expansion of a one/two-body description.
OperatorSum to_operator_sum(const BodyTerms& terms);

/// The pair |0...0>, |1...1>.
std::pair<StateVector, StateVector> build_repetition_code_states(int n);

}  // namespace nrep
