// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "nrep/blindness.hpp"
#include "nrep/fermion.hpp"
#include "nrep/lattice.hpp"
#include "nrep/marginals.hpp"
#include "nrep/report.hpp"
#include "nrep/spectral.hpp"
#include "nrep/symplectic.hpp"

using namespace nrep;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s [%2d] %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename F>
void guarded(int id, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GroundSpace compass_ground() {
  GroundSpaceOptions opts;
  opts.gauge.push_back(compass_gauge(3));
  return ground_space(build_compass({}), opts);
}

StateVector random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  StateVector v(Eigen::Index(1) << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(g(rng), g(rng));
  return v / v.norm();
}

OperatorSum single(int n, const PauliTerm& t) {
  OperatorSum op(n);
  op.add(t);
  return op;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const GroundSpace gs = compass_ground();
  const double solve_s = seconds_since(t0);
  const OperatorSum h = build_compass({});

  guarded(1, "compass n=3 ground space", [&] {
    const bool ok = gs.degeneracy() == 2 && gs.e0 <= -9.0 && solve_s < 60.0;
    report(1, ok, "compass n=3 ground space",
           "degeneracy " + std::to_string(gs.degeneracy()) + ", E0 " + num(gs.e0) + ", solve " + num(solve_s) + " s");
  });

  guarded(2, "column-parity sector structure", [&] {
    std::vector<PauliTerm> ops;
    for (int k = 0; k < 3; ++k) ops.push_back(build_column_parity(k, 3));
    bool parities = true;
    for (int p = 0; p < 2; ++p)
      for (const auto& z : ops) {
        const double ev = gs.basis[p].dot(nrep::apply(z, gs.basis[p], 9)).real();
        parities = parities && std::abs(ev - (p == 0 ? 1.0 : -1.0)) < 1e-9;
      }
    double margin = 1e300;
    bool ends = true;
    for (const auto& s : sector_split(h, ops)) {
      if (s.label == 0 || s.label == 7)
        ends = ends && std::abs(s.minimum - gs.e0) < 1e-9;
      else
        margin = std::min(margin, s.minimum - gs.e0);
    }
    report(2, parities && ends && margin > 1e-6, "column-parity sector structure",
           "ground parities +1/-1 " + std::string(parities ? "yes" : "no") + ", smallest mixed-sector margin " +
               num(margin));
  });

  guarded(3, "2-blind, not 3-blind with row witness", [&] {
    const auto two = certify_blindness(gs, 2);
    const auto three = certify_blindness(gs, 3);
    bool row = false;
    std::string sites = "none";
    if (three.offdiagonal_witness) {
      const auto& s = three.offdiagonal_witness->sites;
      row = s.size() == 3 && s[0] % 3 == 0 && s[1] == s[0] + 1 && s[2] == s[0] + 2;
      sites = json(s).dump();
    }
    const bool ok = two.passed && two.candidates_checked == 36 &&
                    std::max(two.max_diagonal_deviation, two.max_offdiagonal_norm) < 1e-9 && !three.passed && row;
    report(3, ok, "2-blind, not 3-blind with row witness",
           "m=2 max dev " + num(std::max(two.max_diagonal_deviation, two.max_offdiagonal_norm)) + " over " +
               std::to_string(two.candidates_checked) + " pairs; m=3 witness sites " + sites);
  });

  guarded(4, "logical X and Z action", [&] {
    double worst_x = 0.0, worst_z = 0.0;
    for (int j = 0; j < 3; ++j) {
      const StateVector xc0 = nrep::apply(build_logical_x(j, 3), gs.basis[0], 9);
      const double overlap = std::abs(gs.basis[1].dot(xc0));
      worst_x = std::max(worst_x, std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap)));
    }
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < 2; ++p) {
        const StateVector zc = nrep::apply(build_logical_z(k, 3), gs.basis[p], 9);
        worst_z = std::max(worst_z, (zc - (p == 0 ? 1.0 : -1.0) * gs.basis[p]).norm());
      }
    report(4, worst_x < 1e-9 && worst_z < 1e-9, "logical X and Z action",
           "max phase-optimal X residual " + num(worst_x) + ", max Z residual " + num(worst_z));
  });

  guarded(5, "parity-basis decomposition", [&] {
    const auto d = decompose_ground_state(gs.basis[0]);
    const auto again = decompose_ground_state(compass_ground().basis[0]);
    std::ifstream in(std::string(NREP_GOLDEN_DIR) + "/compass_n3.json");
    const json golden = json::parse(in);
    const auto& ga = golden["parity_basis"]["a"];
    const cplx mine[] = {d.a1, d.a2, d.a3};
    const cplx rerun[] = {again.a1, again.a2, again.a3};
    double drift = 0.0;
    for (int i = 0; i < 3; ++i) {
      const cplx g(ga[i][0].get<double>(), ga[i][1].get<double>());
      drift = std::max({drift, std::abs(mine[i] - g), std::abs(mine[i] - rerun[i])});
    }
    report(5, d.residual < 1e-9 && drift < 1e-9, "parity-basis decomposition",
           "residual " + num(d.residual) + ", a = (" + num(d.a1.real()) + ", " + num(d.a2.real()) + ", " +
               num(d.a3.real()) + "), drift vs golden " + num(drift));
  });

  guarded(6, "fermion bridge at N=4", [&] {
    const OperatorSum h4 = build_compass({2, 1, 1, Boundary::open});
    std::mt19937_64 rng(2024);
    double iso = 0.0, diagram = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector u = random_state(rng, 4), v = random_state(rng, 4);
      iso = std::max(iso, std::abs(map_state(u, 4).inner(map_state(v, 4)) - u.dot(v)));
      diagram = std::max(diagram, verify_diagram(u, 4).max_deviation);
    }
    const PenaltyReport pen = verify_penalty_ground_space(h4);
    const bool ok = iso < 1e-12 && diagram < 1e-10 && pen.subspace_distance < 1e-8 &&
                    pen.fock_degeneracy == pen.lattice_degeneracy;
    report(6, ok, "fermion bridge at N=4",
           "isometry " + num(iso) + ", diagram " + num(diagram) + ", penalty U " + num(pen.u) +
               ", subspace distance " + num(pen.subspace_distance));
  });

  guarded(7, "fermionic counterexample at N=9", [&] {
    const Fermionic2RDM r0 = assemble_2rdm(marginal_vector(gs.basis[0], 9));
    const Fermionic2RDM r1 = assemble_2rdm(marginal_vector(gs.basis[1], 9));
    const double diff = (r0.matrix - r1.matrix).norm();
    const double overlap = std::abs(map_state(gs.basis[0], 9).inner(map_state(gs.basis[1], 9)));
    const auto ext = certify_exposed_extreme(h, 2, {kDefaultBlindnessTol, {1e-8, {compass_gauge(3)}}});
    const bool ok = r0.matrix.rows() == 153 && diff < 1e-9 && overlap < 1e-12 &&
                    ext.conclusion == Conclusion::extreme_multiple_preimages;
    report(7, ok, "fermionic counterexample at N=9",
           std::to_string(r0.matrix.rows()) + "x" + std::to_string(r0.matrix.cols()) + " 2-RDMs differ by " +
               num(diff) + ", pre-image overlap " + num(overlap) + ", conclusion " + to_string(ext.conclusion));
  });

  guarded(8, "witness duality", [&] {
    const auto rh = build_reduced_hamiltonian(h, gs.e0);
    double ground = 0.0;
    for (const auto& v : gs.basis) ground = std::max(ground, std::abs(verify_witness_duality(rh, marginal_vector(v, 9))));
    std::mt19937_64 rng(77);
    double lowest = 1e300;
    for (int trial = 0; trial < 1000; ++trial)
      lowest = std::min(lowest, verify_witness_duality(rh, marginal_vector(random_state(rng, 9), 9)));
    const EigenDecomposition spec = eig_hermitian(to_matrix(h));
    const double excited = verify_witness_duality(rh, marginal_vector(spec.vectors.col(2), 9));
    const bool ok = ground <= 1e-9 && lowest >= -1e-9 && std::abs(excited - gs.gap) < 1e-9;
    report(8, ok, "witness duality",
           "ground " + num(ground) + ", min over 1000 random " + num(lowest) + ", first excited - gap " +
               num(excited - gs.gap));
  });

  guarded(9, "Knill-Laflamme vs blindness", [&] {
    const KLReport kl = check_knill_laflamme(gs.basis, single_site_error_basis(9));
    const bool agree = kl.passed == certify_blindness(gs, 2).passed;
    const auto [zero, one] = build_repetition_code_states(3);
    const std::vector<StateVector> code{zero, one};
    std::vector<OperatorSum> flips{single(3, PauliTerm::identity())};
    for (int j = 0; j < 3; ++j) flips.push_back(single(3, PauliTerm::single(j, Pauli::X)));
    const KLReport pos = check_knill_laflamme(code, flips);
    const std::vector<OperatorSum> phase{single(3, PauliTerm::single(0, Pauli::Z))};
    const KLReport neg = check_knill_laflamme(code, phase);
    const bool fixtures = pos.passed && (pos.q - CMatrix::Identity(4, 4)).norm() < 1e-15 && !neg.passed &&
                          std::abs(neg.worst_violation - 2.0) < 1e-15;
    report(9, kl.passed && agree && fixtures, "Knill-Laflamme vs blindness",
           "compass 28 errors worst " + num(kl.worst_violation) + ", agrees " + (agree ? "yes" : "no") +
               ", repetition fixtures " + (fixtures ? "ok" : "wrong"));
  });

  guarded(10, "toric code stabilizer certification", [&] {
    const StabilizerGroup g2 = toric_generators(2);
    const GroundSpace dense = ground_space(build_toric(2));
    const auto s1 = certify_stabilizer_blindness(g2, 1);
    const auto s2 = certify_stabilizer_blindness(g2, 2);
    const bool small = s1.passed && !s2.passed && s2.diagonal_witness && s2.diagonal_witness->sites.size() == 2 &&
                       certify_blindness(dense, 1).passed == s1.passed &&
                       certify_blindness(dense, 2).passed == s2.passed;
    const auto t5 = std::chrono::steady_clock::now();
    const auto s5 = certify_stabilizer_blindness(toric_generators(5), 4);
    const double scan_s = seconds_since(t5);
    const bool big = s5.passed && s5.candidates_checked == count_low_weight_paulis(50, 4) && scan_s < 300.0;
    report(10, small && big, "toric code stabilizer certification",
           "L=2 m=1 " + std::string(s1.passed ? "pass" : "fail") + ", m=2 witness " +
               (s2.diagonal_witness ? s2.diagonal_witness->pauli : "none") + "; L=5 m=4 " +
               std::to_string(s5.candidates_checked) + " Paulis in " + num(scan_s) + " s");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
