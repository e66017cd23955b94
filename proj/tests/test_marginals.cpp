#include <gtest/gtest.h>

#include <random>

#include "nrep/lattice.hpp"
#include "nrep/marginals.hpp"
#include "nrep/spectral.hpp"
#include "oracles.hpp"

using namespace nrep;

namespace {

const GroundSpace& compass_ground() {
  static const GroundSpace gs = [] {
    GroundSpaceOptions opts;
    opts.gauge.push_back(compass_gauge(3));
    return ground_space(build_compass({}), opts);
  }();
  return gs;
}

StateVector basis_state(int n, std::uint64_t idx) {
  StateVector v = StateVector::Zero(Eigen::Index(1) << n);
  v[static_cast<Eigen::Index>(idx)] = 1.0;
  return v;
}

}  // namespace

TEST(PartialTrace, ProductAndBellStates) {
  const int keep0[] = {0};
  CMatrix rho = partial_trace(basis_state(2, 0b01), keep0, 2);
  EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(rho.norm(), 1.0, 1e-15);
  StateVector bell = StateVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  rho = partial_trace(bell, keep0, 2);
  EXPECT_LT((rho - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(PartialTrace, MatchesBruteForceOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector psi = oracle::random_state(rng, 5);
    for (const std::vector<int>& keep : {std::vector<int>{0, 3}, {4, 1}, {2}, {1, 2, 4}}) {
      const CMatrix ref = oracle::brute_partial_trace(psi, keep, 5);
      EXPECT_LT((partial_trace(psi, keep, 5) - ref).norm(), 1e-13);
    }
  }
}

TEST(PartialTrace, TracePositivityAndCompatibility) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector psi = oracle::random_state(rng, 6);
    const int pair[] = {1, 4};
    const CMatrix rho = partial_trace(psi, pair, 6);
    EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
    EXPECT_LT((rho - rho.adjoint()).norm(), 1e-13);
    EXPECT_GT(oracle::zheev_values(rho)[0], -1e-12);
    const int only1[] = {1};
    const int pos0[] = {0};
    EXPECT_LT((partial_trace(psi, only1, 6) - reduce_operator(rho, 2, pos0)).norm(), 1e-10);
  }
}

TEST(CrossMarginal, IdentityAndOrthogonalCases) {
  std::mt19937_64 rng(2);
  const StateVector u = oracle::random_state(rng, 4);
  const int keep[] = {1, 2};
  EXPECT_LT((cross_marginal(u, u, keep, 4) - partial_trace(u, keep, 4)).norm(), 1e-14);
  const int keep0[] = {0};
  EXPECT_LT(cross_marginal(basis_state(3, 0), basis_state(3, 7), keep0, 3).norm(), 1e-15);
}

TEST(CrossMarginal, Linearity) {
  std::mt19937_64 rng(6);
  const StateVector u = oracle::random_state(rng, 5), w = oracle::random_state(rng, 5), v = oracle::random_state(rng, 5);
  const cplx alpha(0.3, -0.7), beta(1.2, 0.4);
  const int keep[] = {0, 2};
  const CMatrix lhs = cross_marginal(alpha * u + beta * w, v, keep, 5);
  const CMatrix rhs = alpha * cross_marginal(u, v, keep, 5) + beta * cross_marginal(w, v, keep, 5);
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
}

TEST(CrossMarginal, CompassBasisPairsVanishOnEveryPair) {
  const auto& gs = compass_ground();
  const MarginalVector x = cross_marginal_vector(gs.basis[0], gs.basis[1], 9);
  for (const auto& r : x.rdms) EXPECT_LT(r.norm(), 1e-10);
}

TEST(MarginalVector, ProductState) {
  const MarginalVector mv = marginal_vector(basis_state(3, 0), 3);
  ASSERT_EQ(mv.rdms.size(), 3U);
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 0) = 1.0;
  for (const auto& r : mv.rdms) EXPECT_LT((r - p).norm(), 1e-15);
}

TEST(MarginalVector, ParallelMatchesSerialAndOracle) {
  std::mt19937_64 rng(10);
  const StateVector psi = oracle::random_state(rng, 7);
  const MarginalVector a = marginal_vector(psi, 7);
  const MarginalVector b = serial::marginal_vector(psi, 7);
  EXPECT_LT(max_deviation(a, b), 1e-13);
  for (std::size_t p = 0; p < a.pairs.size(); ++p) {
    const std::vector<int> keep{a.pairs[p].first, a.pairs[p].second};
    EXPECT_LT((CMatrix(a.rdms[p]) - oracle::brute_partial_trace(psi, keep, 7)).norm(), 1e-13);
  }
}

TEST(MarginalVector, CompassGroundStatesShareMarginals) {
  const auto& gs = compass_ground();
  EXPECT_LT(max_deviation(marginal_vector(gs.basis[0], 9), marginal_vector(gs.basis[1], 9)), 1e-10);
}

TEST(MarginalVector, EnergyReconstruction) {
  const auto& gs = compass_ground();
  const OperatorSum h = build_compass({});
  const MarginalVector mv = marginal_vector(gs.basis[0], 9);
  const BodyTerms bt = split_body_terms(h);
  cplx e = 0.0;
  for (std::size_t p = 0; p < mv.pairs.size(); ++p) e += (bt.two_body[p] * mv.rdms[p]).trace();
  EXPECT_NEAR(e.real(), gs.e0, 1e-9);
}

TEST(MarginalVector, CombineMatchesDirectMixture) {
  const auto& gs = compass_ground();
  std::vector<std::vector<MarginalVector>> cross(2, std::vector<MarginalVector>(2));
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) cross[p][q] = cross_marginal_vector(gs.basis[p], gs.basis[q], 9);
  const cplx c[] = {cplx(0.6, 0.0), cplx(0.0, 0.8)};
  const StateVector psi = c[0] * gs.basis[0] + c[1] * gs.basis[1];
  EXPECT_LT(max_deviation(combine_marginals(cross, c), marginal_vector(psi, 9)), 1e-12);
}

TEST(MarginalVector, JsonRoundTrip) {
  std::mt19937_64 rng(12);
  const MarginalVector mv = marginal_vector(oracle::random_state(rng, 4), 4);
  const MarginalVector back = marginal_vector_from_json(to_json(mv));
  EXPECT_EQ(back.pairs, mv.pairs);
  EXPECT_LT(max_deviation(mv, back), 1e-15);
}

TEST(MarginalVector, InputValidation) {
  EXPECT_THROW(sites_of(StateVector::Zero(6)), std::invalid_argument);
  const int bad[] = {0, 0};
  EXPECT_THROW(partial_trace(basis_state(3, 0), bad, 3), std::invalid_argument);
  const int out_of_range[] = {5};
  EXPECT_THROW(partial_trace(basis_state(3, 0), out_of_range, 3), std::out_of_range);
}
