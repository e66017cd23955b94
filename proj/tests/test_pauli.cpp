#include <gtest/gtest.h>

#include <random>

#include "nrep/lattice.hpp"
#include "nrep/pauli.hpp"
#include "oracles.hpp"

using namespace nrep;

namespace {

PauliTerm random_term(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> letter(0, 3);
  PauliTerm t;
  for (int s = 0; s < n; ++s) {
    const auto p = static_cast<Pauli>(letter(rng));
    if (p != Pauli::I) t.letters[s] = p;
  }
  return t;
}

std::string dense_letters(const PauliTerm& t, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += to_char(t.at(i));
  return s;
}

}  // namespace

TEST(Pauli, SingleSiteProducts) {
  const PauliTerm xz = multiply(PauliTerm::single(0, Pauli::X), PauliTerm::single(0, Pauli::Z));
  EXPECT_EQ(xz.at(0), Pauli::Y);
  EXPECT_EQ(xz.coeff, cplx(0, -1));

  const PauliTerm p = PauliTerm::product({{0, Pauli::Y}, {2, Pauli::Z}}, 2.5);
  const PauliTerm ip = multiply(PauliTerm::identity(), p);
  EXPECT_EQ(ip.letters, p.letters);
  EXPECT_EQ(ip.coeff, p.coeff);
}

TEST(Pauli, OverlappingProductAnticommutes) {
  const PauliTerm a = PauliTerm::product({{0, Pauli::X}, {1, Pauli::X}});
  const PauliTerm b = PauliTerm::product({{1, Pauli::Z}, {2, Pauli::Z}});
  const PauliTerm ab = multiply(a, b);
  EXPECT_EQ(ab.to_string(), "X(0) Y(1) Z(2)");
  EXPECT_EQ(ab.coeff, cplx(0, -1));
  EXPECT_FALSE(commutes(a, b));
}

TEST(Pauli, CommutationExamples) {
  EXPECT_TRUE(commutes(PauliTerm::single(0, Pauli::X), PauliTerm::single(1, Pauli::Z)));
  EXPECT_FALSE(commutes(PauliTerm::single(0, Pauli::X), PauliTerm::single(0, Pauli::Z)));
  const PauliTerm parity = build_column_parity(0, 3);
  const OperatorSum h = build_compass({});
  for (const auto& t : h.terms()) EXPECT_TRUE(commutes(parity, t)) << t.to_string();
}

TEST(Pauli, ToMatrixSmallCases) {
  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  EXPECT_EQ(to_matrix(PauliTerm::single(0, Pauli::Z), 1), z);
  CMatrix xx = CMatrix::Zero(4, 4);
  xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1.0;
  EXPECT_EQ(to_matrix(PauliTerm::product({{0, Pauli::X}, {1, Pauli::X}}), 2), xx);
  EXPECT_NEAR(std::abs(to_matrix(build_compass({})).trace()), 0.0, 1e-12);
}

TEST(Pauli, ToMatrixMatchesKroneckerOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const PauliTerm t = random_term(rng, 4);
    EXPECT_LT((to_matrix(t, 4) - oracle::kron_pauli(dense_letters(t, 4))).norm(), 1e-14);
  }
}

TEST(Pauli, MatrixProductIsHomomorphicOnTwoQubits) {
  std::vector<PauliTerm> all;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      PauliTerm t;
      if (a) t.letters[0] = static_cast<Pauli>(a);
      if (b) t.letters[1] = static_cast<Pauli>(b);
      all.push_back(t);
    }
  for (const auto& a : all)
    for (const auto& b : all)
      EXPECT_LT((to_matrix(a, 2) * to_matrix(b, 2) - to_matrix(multiply(a, b), 2)).norm(), 1e-15);
}

TEST(Pauli, MultiplyIsAssociative) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    PauliTerm a = random_term(rng, 6), b = random_term(rng, 6), c = random_term(rng, 6);
    a.coeff = cplx(0.3, -1.1);
    const PauliTerm l = multiply(multiply(a, b), c);
    const PauliTerm r = multiply(a, multiply(b, c));
    EXPECT_EQ(l.letters, r.letters);
    EXPECT_LT(std::abs(l.coeff - r.coeff), 1e-15);
  }
}

TEST(Pauli, CommutesAgreesWithDenseCommutator) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const PauliTerm a = random_term(rng, 4), b = random_term(rng, 4);
    const CMatrix ma = to_matrix(a, 4), mb = to_matrix(b, 4);
    EXPECT_EQ(commutes(a, b), (ma * mb - mb * ma).norm() < 1e-12);
  }
}

TEST(Pauli, ApplyMatchesMatrix) {
  std::mt19937_64 rng(3);
  const OperatorSum h = build_compass({2, 0.7, 1.3, Boundary::open});
  const StateVector psi = oracle::random_state(rng, 4);
  EXPECT_LT((nrep::apply(h, psi) - to_matrix(h) * psi).norm(), 1e-13);
  const PauliTerm t = PauliTerm::product({{0, Pauli::Y}, {3, Pauli::X}}, cplx(0, 2));
  EXPECT_LT((nrep::apply(t, psi, 4) - to_matrix(t, 4) * psi).norm(), 1e-13);
}

TEST(Pauli, BitConventionSiteZeroMostSignificant) {
  StateVector e0 = StateVector::Zero(8);
  e0[0] = 1.0;
  const StateVector out = nrep::apply(PauliTerm::single(0, Pauli::X), e0, 3);
  EXPECT_EQ(out[4], cplx(1.0));
  EXPECT_EQ(bit_position(0, 3), 2);
}

TEST(Pauli, PhaseArithmeticIsExact) {
  const Phase i(1);
  EXPECT_EQ((i * i * i * i).quarter_turns(), 0);
  EXPECT_EQ(Phase(-1).quarter_turns(), 3);
  EXPECT_EQ(Phase(1).apply(cplx(2, 3)), cplx(-3, 2));
}

TEST(Pauli, CanonicalMergesAndHermiticity) {
  OperatorSum op(2);
  op.add(PauliTerm::single(0, Pauli::X, 1.0));
  op.add(PauliTerm::single(0, Pauli::X, 2.0));
  op.add(PauliTerm::single(1, Pauli::Z, 1e-16));
  const OperatorSum c = op.canonical();
  ASSERT_EQ(c.size(), 1U);
  EXPECT_EQ(c.terms()[0].coeff, cplx(3.0));
  EXPECT_TRUE(op.is_hermitian());
  OperatorSum bad(1);
  bad.add(PauliTerm::single(0, Pauli::X, cplx(0, 1)));
  EXPECT_FALSE(bad.is_hermitian());
  EXPECT_DOUBLE_EQ(build_compass({}).coefficient_norm(), 18.0);
}

TEST(Pauli, JsonRoundTrip) {
  const OperatorSum h = build_compass({3, 0.5, 2.0, Boundary::cyclic});
  const OperatorSum back = operator_sum_from_json(to_json(h), 9, 3);
  EXPECT_LT((to_matrix(h) - to_matrix(back)).norm(), 1e-14);
  EXPECT_EQ(to_json(h)[0]["sites"][0], json({0, 0}));
}

TEST(Pauli, DenseLimitEnforced) {
  OperatorSum big(20);
  big.add(PauliTerm::single(0, Pauli::Z));
  EXPECT_THROW(to_matrix(big), DimensionLimitError);
  EXPECT_THROW(pauli_from_char('Q'), std::invalid_argument);
}
