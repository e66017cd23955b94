#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nrep/pauli.hpp"

namespace nrep {

/// Number of sites of a 2^n dimensional state; throws if not a power of two.
int sites_of(const StateVector& state);

/// Tr_{rest} |u><v| over the complement of `keep`. The first kept site is the
/// most significant bit of the result index. Linear in u, conjugate-linear
/// in v.
CMatrix cross_marginal(const StateVector& u, const StateVector& v, std::span<const int> keep, int n_sites);

/// Reduced density matrix of a pure state on the sites in `keep`.
CMatrix partial_trace(const StateVector& state, std::span<const int> keep, int n_sites);

/// Partial trace of a 2^m x 2^m operator on m ordered sites, keeping the
/// listed positions (0-based positions into the operator's own site list).
CMatrix reduce_operator(const CMatrix& rho, int m, std::span<const int> keep_positions);

/// All two-site marginals of a state, pairs (j<k) in lexicographic order.
struct MarginalVector {
  int n_sites = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<Eigen::Matrix4cd> rdms;
};

MarginalVector marginal_vector(const StateVector& state, int n_sites);

/// Cross-marginals sigma^{pq}_{jk} = Tr_rest |u><v| on every pair.
MarginalVector cross_marginal_vector(const StateVector& u, const StateVector& v, int n_sites);

namespace serial {
MarginalVector marginal_vector(const StateVector& state, int n_sites);
}

/// Marginals of the mixture sum_pq c_p c_q^* |C_p><C_q| assembled from the
/// basis cross-marginals cross[p][q].
MarginalVector combine_marginals(const std::vector<std::vector<MarginalVector>>& cross, std::span<const cplx> c);

/// {"pairs": [[j,k],...], "rdms": [[[re,im] x16], ...]}
json to_json(const MarginalVector& mv);
MarginalVector marginal_vector_from_json(const json& j);

/// Largest elementwise modulus of the difference between two marginal vectors.
double max_deviation(const MarginalVector& a, const MarginalVector& b);

}  // namespace nrep
