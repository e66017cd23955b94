#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrep/lattice.hpp"
#include "nrep/marginals.hpp"
#include "nrep/spectral.hpp"

namespace nrep {

/// A site subset and basis pair where the blindness criterion is violated.
struct BlindnessWitness {
  std::vector<int> sites;
  int p = 0;
  int q = 0;
  double value = 0.0;
  /// Set by the symplectic path: the offending Pauli, e.g. "Z(0) Z(1)".
  std::string pauli;
};

/// Record of the m-site indistinguishability test on a ground space. The
/// dense path compares cross-marginals sigma^{pq}_S over all |S| = m: the
/// diagonal blocks must agree and the off-diagonal blocks must vanish, both
/// in Frobenius norm. Worst offenders are kept separately for each part.
struct BlindnessCertificate {
  int m = 0;
  bool passed = false;
  double max_diagonal_deviation = 0.0;
  double max_offdiagonal_norm = 0.0;
  std::optional<BlindnessWitness> diagonal_witness;
  std::optional<BlindnessWitness> offdiagonal_witness;
  double tolerance = 0.0;
  std::string method = "dense";
  /// Site subsets (dense) or Pauli operators (symplectic) examined.
  std::uint64_t candidates_checked = 0;

  /// The witness with the larger violation, if any.
  const BlindnessWitness* witness() const;
};

inline constexpr double kDefaultBlindnessTol = 1e-9;

/// Throws std::invalid_argument for m < 1 or m > N, or an empty basis.
BlindnessCertificate certify_blindness(const GroundSpace& gs, int m, double tol = kDefaultBlindnessTol);

/// Subset scan over a plain list of orthonormal states.
BlindnessCertificate certify_blindness(std::span<const StateVector> basis, int n_sites, int m,
                                       double tol = kDefaultBlindnessTol);

namespace serial {
BlindnessCertificate certify_blindness(std::span<const StateVector> basis, int n_sites, int m,
                                       double tol = kDefaultBlindnessTol);
}

/// All size-m subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> site_subsets(int n, int m);

struct KLReport {
  std::string error_set;
  /// Q_{lm} = <C_0|E_l^dag E_m|C_0>.
  CMatrix q;
  bool passed = false;
  /// max over l, m, p, q of |<C_p|E_l^dag E_m|C_q> - delta_pq Q_lm|.
  double worst_violation = 0.0;
};

/// The identity (no error) is put first when the set lacks it, so Q is
/// indexed over the completed set. Throws std::invalid_argument if the
/// codewords are not orthonormal (1e-8).
KLReport check_knill_laflamme(std::span<const StateVector> codewords, std::span<const OperatorSum> errors,
                              double tol = kDefaultBlindnessTol, std::string description = {});

/// {I} followed by X_j, Y_j, Z_j for every site j.
std::vector<OperatorSum> single_site_error_basis(int n_sites);

enum class Conclusion { extreme_multiple_preimages, extreme_unique_preimage, not_certified };

std::string to_string(Conclusion c);

struct ExtremePointCertificate {
  std::size_t degeneracy = 0;
  double e0 = 0.0;
  double gap = 0.0;
  BlindnessCertificate blindness;
  Conclusion conclusion = Conclusion::not_certified;
  std::string note;
};

struct ExposedOptions {
  double tol = kDefaultBlindnessTol;
  GroundSpaceOptions ground;
};

/// Ground space -> m-blindness -> conclusion. A degenerate ground space
/// whose marginals are blind and which is separated by a strict gap gives a
/// marginal vector that is the unique minimizer of the reduced Hamiltonian,
/// with every ground vector as a pure pre-image.
ExtremePointCertificate certify_exposed_extreme(const OperatorSum& h, int m, const ExposedOptions& opts = {});

/// sum_{j<k} Tr(H_jk rho_jk); non-negative on consistent marginals and zero
/// exactly on ground-state marginals.
double verify_witness_duality(const ReducedHamiltonianVector& rh, const MarginalVector& mv);

json to_json(const BlindnessWitness& w);
json to_json(const BlindnessCertificate& c);
json to_json(const KLReport& r);
json to_json(const ExtremePointCertificate& c);

}  // namespace nrep
