#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "nrep/pauli.hpp"

namespace nrep {

/// The ground-energy cluster is too close to the rest of the spectrum to
/// decide its degeneracy.
class AmbiguousGapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenDecomposition {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // columns
};

/// Dense Hermitian eigensolve. Rejects inputs with ||M - M^H||_max > 1e-12
/// (relative to max |M_ij| when that exceeds 1) and dimensions above 4096.
EigenDecomposition eig_hermitian(const CMatrix& m);

inline constexpr Eigen::Index kMaxDenseDimension = 4096;

struct GroundSpaceOptions {
  /// Relative to the spectral range.
  double degeneracy_tol = 1e-8;
  /// Commuting Paulis diagonalized in turn inside the ground space to fix the
  /// basis; eigenvalue +1 first. Each vector is then phase-fixed so its first
  /// amplitude above 1e-8 in modulus is real positive.
  std::vector<PauliTerm> gauge;
};

struct GroundSpace {
  int n_sites = 0;
  double e0 = 0.0;
  std::vector<StateVector> basis;
  /// Next distinct eigenvalue minus E0; +inf when the whole space is degenerate.
  double gap = std::numeric_limits<double>::infinity();
  /// Absolute threshold used to group eigenvalues with E0.
  double degeneracy_tol = 0.0;
  /// max_v ||H v - E0 v||.
  double max_residual = 0.0;

  std::size_t degeneracy() const { return basis.size(); }
};

/// Throws AmbiguousGapError when the gap is below 10x the absolute
/// degeneracy threshold.
GroundSpace ground_space(const OperatorSum& h, const GroundSpaceOptions& opts = {});
GroundSpace ground_space(const OperatorSum& h, const EigenDecomposition& spectrum,
                         const GroundSpaceOptions& opts = {});

/// ||P_a - P_b||_2 for the projectors onto the column spans of a and b
/// (orthonormal columns); the sine of the largest principal angle when the
/// dimensions agree, 1 when they differ.
double subspace_distance(const CMatrix& a, const CMatrix& b);

/// Gauge used for the compass model: the product of all column parities.
PauliTerm compass_gauge(int n);

struct Sector {
  /// Bit i set iff parity operator i has eigenvalue -1 on the sector.
  std::uint32_t label = 0;
  double minimum = 0.0;
  std::size_t dimension = 0;
};

/// Groups computational basis states by the eigenvalues of diagonal (Z/I
/// only) parity operators and solves each block densely. Sectors are ordered
/// by label. Throws std::invalid_argument for parity operators that are not
/// diagonal or do not commute with every term of h.
std::vector<Sector> sector_split(const OperatorSum& h, std::span<const PauliTerm> parity_ops);

namespace serial {
std::vector<Sector> sector_split(const OperatorSum& h, std::span<const PauliTerm> parity_ops);
}

/// The three symmetric even-parity states spanning the n = 3 compass ground
/// state. Columns v0 = 000, v1 = 011, v2 = 101, v3 = 110 (row 0 first).
struct ParityBasis {
  StateVector a1;
  StateVector a2;
  StateVector a3;
};

/// Throws std::invalid_argument unless n == 3.
ParityBasis build_parity_basis(int n = 3);

/// Basis state index for three columns given by even-column labels 0..3.
std::uint64_t column_configuration_index(int c0, int c1, int c2);

struct GroundStateDecomposition {
  cplx a1;
  cplx a2;
  cplx a3;
  double residual = 0.0;
};

/// Overlaps with the parity basis after rotating the global phase so a1 is
/// real positive (or the first non-negligible overlap if a1 vanishes).
GroundStateDecomposition decompose_ground_state(const StateVector& c0);

}  // namespace nrep
