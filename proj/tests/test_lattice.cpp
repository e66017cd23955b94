#include <gtest/gtest.h>

#include <random>

#include "nrep/lattice.hpp"
#include "nrep/marginals.hpp"
#include "nrep/spectral.hpp"
#include "oracles.hpp"

using namespace nrep;

TEST(Compass, TermCountsAndSigns) {
  const OperatorSum cyc = build_compass({});
  EXPECT_EQ(cyc.size(), 18U);
  for (const auto& t : cyc.terms()) {
    EXPECT_LT(t.coeff.real(), 0.0);
    EXPECT_EQ(t.weight(), 2);
  }
  EXPECT_EQ(build_compass({4, 1, 1, Boundary::open}).size(), 24U);
  EXPECT_EQ(build_compass({4, 1, 1, Boundary::cyclic}).size(), 32U);
}

TEST(Compass, BondGeometry) {
  const OperatorSum h = build_compass({3, 2.0, 5.0, Boundary::open});
  // XX bonds join (j,k)-(j+1,k), i.e. flat i and i+3; ZZ bonds join i and i+1.
  for (const auto& t : h.terms()) {
    const int a = t.letters.begin()->first, b = t.letters.rbegin()->first;
    if (t.at(a) == Pauli::X) {
      EXPECT_EQ(b - a, 3);
      EXPECT_EQ(t.coeff, cplx(-2.0));
    } else {
      EXPECT_EQ(b - a, 1);
      EXPECT_EQ(a / 3, b / 3);
      EXPECT_EQ(t.coeff, cplx(-5.0));
    }
  }
}

TEST(Compass, ParameterValidation) {
  EXPECT_THROW(build_compass({2, 1, 1, Boundary::cyclic}), std::invalid_argument);
  EXPECT_NO_THROW(build_compass({2, 1, 1, Boundary::open}));
  EXPECT_THROW(build_compass({3, 0.0, 1, Boundary::cyclic}), std::invalid_argument);
  EXPECT_THROW(build_compass({3, 1, -1, Boundary::cyclic}), std::invalid_argument);
  EXPECT_THROW(build_compass({1, 1, 1, Boundary::open}), std::invalid_argument);
}

TEST(Compass, SymmetriesCommuteExactly) {
  for (int n : {3, 4}) {
    const OperatorSum h = build_compass({n, 1, 1, Boundary::cyclic});
    for (int i = 0; i < n; ++i)
      for (const auto& t : h.terms()) {
        EXPECT_TRUE(commutes(build_column_parity(i, n), t));
        EXPECT_TRUE(commutes(build_row_parity(i, n), t));
      }
  }
}

TEST(Compass, ParityOperatorShapes) {
  const PauliTerm z0 = build_column_parity(0, 3);
  EXPECT_EQ(z0.to_string(), "Z(0) Z(3) Z(6)");
  const PauliTerm x0 = build_logical_x(0, 3);
  EXPECT_EQ(x0.weight(), 3);
  EXPECT_EQ(x0.to_string(), "X(0) X(1) X(2)");
  EXPECT_EQ(build_row_parity(1, 3).to_string(), build_logical_x(1, 3).to_string());
  EXPECT_EQ(build_logical_z(2, 3).to_string(), "Z(2) Z(5) Z(8)");
}

TEST(Compass, MatrixIsRealSymmetric) {
  const CMatrix m = to_matrix(build_compass({3, 0.4, 1.7, Boundary::cyclic}));
  EXPECT_LT(m.imag().norm(), 1e-15);
  EXPECT_LT((m - m.transpose()).norm(), 1e-15);
}

TEST(Compass, ColumnParityIsPlusOneOnEvenGroundState) {
  GroundSpaceOptions opts;
  opts.gauge.push_back(compass_gauge(3));
  const GroundSpace gs = ground_space(build_compass({}), opts);
  for (int k = 0; k < 3; ++k) {
    const StateVector& c0 = gs.basis[0];
    EXPECT_NEAR(c0.dot(nrep::apply(build_column_parity(k, 3), c0, 9)).real(), 1.0, 1e-10);
  }
}

TEST(Toric, Geometry) {
  EXPECT_EQ(toric_horizontal_edge(1, 0, 2), 2);
  EXPECT_EQ(toric_vertical_edge(0, 1, 2), 5);
  EXPECT_EQ(toric_horizontal_edge(0, -1, 3), 2);
  const auto stars = toric_stars(2);
  const auto plaqs = toric_plaquettes(2);
  ASSERT_EQ(stars.size(), 4U);
  ASSERT_EQ(plaqs.size(), 4U);
  for (const auto& s : stars)
    for (const auto& p : plaqs) EXPECT_TRUE(commutes(s, p));
  for (int L : {2, 3, 4}) {
    PauliTerm prod = PauliTerm::identity();
    for (const auto& s : toric_stars(L)) {
      EXPECT_EQ(s.weight(), 4);
      prod = multiply(prod, s);
    }
    EXPECT_EQ(prod.weight(), 0) << "L=" << L;
  }
  const OperatorSum h = build_toric(2);
  EXPECT_EQ(h.n_sites(), 8);
  EXPECT_EQ(h.size(), 8U);
}

TEST(Toric, L2GroundSpaceHasDimensionFour) {
  const OperatorSum h = build_toric(2);
  const auto w = oracle::zheev_values(to_matrix(h));
  int deg = 0;
  for (double e : w) deg += std::abs(e - w[0]) < 1e-9;
  EXPECT_EQ(deg, 4);
  EXPECT_EQ(ground_space(h).degeneracy(), 4U);
}

TEST(ReducedHamiltonian, PureOffsetArithmetic) {
  std::vector<Eigen::Matrix2cd> t(9, Eigen::Matrix2cd::Zero());
  std::vector<Eigen::Matrix4cd> v(36, Eigen::Matrix4cd::Zero());
  const auto rh = build_reduced_hamiltonian(t, v, -9.0, 9);
  ASSERT_EQ(rh.entries.size(), 36U);
  for (const auto& e : rh.entries) EXPECT_LT((e - 0.25 * Eigen::Matrix4cd::Identity()).norm(), 1e-15);
  EXPECT_EQ(rh.pairs.front(), std::make_pair(0, 1));
  EXPECT_EQ(rh.pairs.back(), std::make_pair(7, 8));
}

TEST(ReducedHamiltonian, RejectsNonHermitianEntries) {
  std::vector<Eigen::Matrix2cd> t(3, Eigen::Matrix2cd::Zero());
  std::vector<Eigen::Matrix4cd> v(3, Eigen::Matrix4cd::Zero());
  v[1](0, 1) = 1.0;
  EXPECT_THROW(build_reduced_hamiltonian(t, v, 0.0, 3), std::invalid_argument);
  v[1](0, 1) = 0.0;
  EXPECT_THROW(build_reduced_hamiltonian(t, v, 0.0, 4), std::invalid_argument);
}

namespace {

// Sum over pairs of H_jk embedded on the full lattice.
CMatrix embed_sum(const ReducedHamiltonianVector& rh) {
  const int n = rh.n_sites;
  const Eigen::Index dim = Eigen::Index(1) << n;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t p = 0; p < rh.pairs.size(); ++p) {
    const auto [j, k] = rh.pairs[p];
    for (Eigen::Index a = 0; a < dim; ++a)
      for (Eigen::Index b = 0; b < dim; ++b) {
        if (((a ^ b) & ~((Eigen::Index(1) << (n - 1 - j)) | (Eigen::Index(1) << (n - 1 - k)))) != 0) continue;
        const int ia = 2 * oracle::bit(a, j, n) + oracle::bit(a, k, n);
        const int ib = 2 * oracle::bit(b, j, n) + oracle::bit(b, k, n);
        out(a, b) += rh.entries[p](ia, ib);
      }
  }
  return out;
}

}  // namespace

TEST(ReducedHamiltonian, SumReproducesShiftedHamiltonian) {
  OperatorSum h = build_compass({2, 0.6, 1.4, Boundary::open});
  h.add(PauliTerm::single(1, Pauli::X, 0.3));
  h.add(PauliTerm::single(3, Pauli::Y, -0.2));
  h.add(PauliTerm::identity(0.75));
  const double e0 = -2.5;
  const auto rh = build_reduced_hamiltonian(h, e0);
  const CMatrix target = to_matrix(h) - e0 * CMatrix::Identity(16, 16);
  EXPECT_LT((embed_sum(rh) - target).norm(), 1e-12);
}

TEST(ReducedHamiltonian, ExpectationMatchesMarginals) {
  std::mt19937_64 rng(9);
  const OperatorSum h = build_compass({3, 1, 1, Boundary::cyclic});
  const auto rh = build_reduced_hamiltonian(h, -1.0);
  const StateVector psi = oracle::random_state(rng, 9);
  const MarginalVector mv = marginal_vector(psi, 9);
  cplx sum = 0.0;
  for (std::size_t p = 0; p < rh.entries.size(); ++p) sum += (rh.entries[p] * mv.rdms[p]).trace();
  EXPECT_NEAR(sum.real(), psi.dot(to_matrix(h) * psi).real() + 1.0, 1e-10);
}

TEST(BodyTerms, SplitRejectsThreeBodyTerms) {
  OperatorSum op(3);
  op.add(PauliTerm::product({{0, Pauli::X}, {1, Pauli::X}, {2, Pauli::X}}));
  EXPECT_THROW(split_body_terms(op), std::invalid_argument);
}

TEST(BodyTerms, JsonRoundTripAndPauliExpansion) {
  std::mt19937_64 rng(1);
  BodyTerms bt;
  bt.n_sites = 3;
  for (int j = 0; j < 3; ++j) bt.one_body.push_back(oracle::random_hermitian(rng, 2));
  for (int p = 0; p < 3; ++p) bt.two_body.push_back(oracle::random_hermitian(rng, 4));
  const BodyTerms back = body_terms_from_json(to_json(bt));
  const CMatrix a = to_matrix(to_operator_sum(bt));
  const CMatrix b = to_matrix(to_operator_sum(back));
  EXPECT_LT((a - b).norm(), 1e-14);
  const BodyTerms again = split_body_terms(to_operator_sum(bt));
  EXPECT_LT((to_matrix(to_operator_sum(again)) - a).norm(), 1e-12);
}

TEST(BodyTerms, JsonSchemaErrors) {
  EXPECT_ANY_THROW(body_terms_from_json(json{{"n_sites", 1}}));
  EXPECT_ANY_THROW(body_terms_from_json(json{{"one_body", json::array()}}));
  EXPECT_ANY_THROW(body_terms_from_json(json{{"n_sites", 2}, {"one_body", json::array()}, {"two_body", json::array()}}));
}

TEST(Repetition, StatesAreBasisVectors) {
  const auto [zero, one] = build_repetition_code_states(3);
  EXPECT_EQ(zero[0], cplx(1.0));
  EXPECT_EQ(one[7], cplx(1.0));
  EXPECT_NEAR(zero.norm(), 1.0, 1e-15);
}
