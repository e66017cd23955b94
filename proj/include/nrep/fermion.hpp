#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nrep/marginals.hpp"
#include "nrep/pauli.hpp"

namespace nrep {

// Mode ordering: (site, spin) lexicographic with spin up first, so mode
// 2*site is up and 2*site+1 is down. Lattice |0> is spin up. An occupation
// bit-vector holds mode m at bit m, and |occ> = a+_{m1} a+_{m2} ... |vac>
// with m1 < m2 < ... .

enum class Spin : std::uint8_t { up = 0, down = 1 };

struct FermionMode {
  int site = 0;
  Spin spin = Spin::up;

  int index() const { return 2 * site + static_cast<int>(spin); }
  static FermionMode from_index(int mode) { return {mode / 2, static_cast<Spin>(mode % 2)}; }
};

using Occupation = std::uint64_t;

inline constexpr int kMaxModes = 64;

/// Sparse Fock-space vector keyed by occupation.
class FockState {
 public:
  explicit FockState(int n_modes);

  int n_modes() const { return n_modes_; }
  const std::map<Occupation, cplx>& amplitudes() const { return amps_; }

  void add(Occupation occ, cplx amp);
  cplx amplitude(Occupation occ) const;

  double norm() const;
  /// <this|other>
  cplx inner(const FockState& other) const;
  /// Particle count shared by every stored determinant, or nullopt if mixed
  /// or empty.
  std::optional<int> particle_number() const;

  /// Mode 0 is the leftmost character.
  std::string occupation_string(Occupation occ) const;

 private:
  int n_modes_;
  std::map<Occupation, cplx> amps_;
};

struct Ladder {
  int mode = 0;
  bool dagger = false;
};

/// Applies a single creation/annihilation operator; nullopt when it
/// annihilates the determinant. The sign counts occupied modes below `mode`.
std::optional<std::pair<Occupation, int>> apply_ladder(Ladder op, Occupation occ);

/// coeff * ops[0] ops[1] ... ops[n-1]; the rightmost operator acts first.
struct FermionMonomial {
  cplx coeff{1.0, 0.0};
  std::vector<Ladder> ops;
};

class FermionOperator {
 public:
  explicit FermionOperator(int n_modes) : n_modes_(n_modes) {}

  int n_modes() const { return n_modes_; }
  const std::vector<FermionMonomial>& terms() const { return terms_; }

  FermionOperator& add(FermionMonomial m);
  FermionOperator& operator+=(const FermionOperator& other);

 private:
  int n_modes_;
  std::vector<FermionMonomial> terms_;
};

FockState apply(const FermionOperator& op, const FockState& state);

/// Lattice state -> Slater determinants with one fermion per site.
FockState map_state(const StateVector& lattice_state, int n_sites);
/// Adjoint of map_state: drops every component outside the singly-occupied
/// sector.
StateVector unmap_state(const FockState& f, int n_sites);

/// Each single-site factor sum_st w_st |s><t| becomes sum_st w_st a+_{j,s} a_{j,t}.
FermionOperator map_operator(const OperatorSum& lattice_op);

FermionOperator number_operator(int site, int n_sites);

/// sum_j U_j (n_j - 1)^2; throws std::invalid_argument unless every U_j > 0.
FermionOperator build_penalty(std::span<const double> u);

/// Occupations over n_modes, optionally restricted to a particle number,
/// in increasing integer order.
std::vector<Occupation> fock_basis(int n_modes, std::optional<int> particles = std::nullopt);
CMatrix to_dense(const FermionOperator& op, const std::vector<Occupation>& basis);
StateVector to_dense(const FockState& f, const std::vector<Occupation>& basis);

/// Trace-one two-particle density matrix on ordered mode pairs (P<Q):
/// entry [(P,Q),(R,S)] = <a+_R a+_S a_Q a_P> / C(N,2).
struct Fermionic2RDM {
  int n_modes = 0;
  int n_particles = 0;
  std::vector<std::pair<int, int>> mode_pairs;
  CMatrix matrix;
};

std::vector<std::pair<int, int>> mode_pairs(int n_modes);
std::size_t mode_pair_index(int p, int q, int n_modes);

/// Throws std::invalid_argument if the state lacks a fixed particle number
/// of at least two.
Fermionic2RDM fermionic_2rdm(const FockState& f);

namespace serial {
Fermionic2RDM fermionic_2rdm(const FockState& f);
}

/// C(N,2)^{-1} sum_{j<k} V_jk rho_jk V_jk^dag with V_jk |s t> = a+_{j,s} a+_{k,t} |vac>.
Fermionic2RDM assemble_2rdm(const MarginalVector& mv);

/// V_jk^dag rho V_jk rescaled to unit trace.
Eigen::Matrix4cd recover_pair_marginal(const Fermionic2RDM& rdm, int j, int k);

struct DiagramReport {
  int n_sites = 0;
  /// max |reduce(map(psi)) - assemble(marginals(psi))| elementwise
  double max_deviation = 0.0;
  /// max over pairs of |recover(assembled) - rho_jk|
  double recovery_deviation = 0.0;
  /// | <V psi|V psi> - <psi|psi> |
  double isometry_deviation = 0.0;
};

/// Both routes from a lattice state to its fermionic 2-RDM. Sites limited
/// to 12.
DiagramReport verify_diagram(const StateVector& lattice_state, int n_sites);

/// Ground space of map_operator(H) + penalty compared with V applied to the
/// lattice ground space over the full Fock space of 2N modes.
struct PenaltyReport {
  double u = 0.0;
  std::size_t lattice_degeneracy = 0;
  std::size_t fock_degeneracy = 0;
  double subspace_distance = 0.0;
};

/// U_j = u_scale * ||H||_1 (sum of |coefficients|) on every site.
PenaltyReport verify_penalty_ground_space(const OperatorSum& h_latt, double u_scale = 10.0);

json to_json(const FockState& f);
json to_json(const Fermionic2RDM& rdm);

}  // namespace nrep
