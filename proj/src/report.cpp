#include "nrep/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nrep/blindness.hpp"
#include "nrep/fermion.hpp"
#include "nrep/marginals.hpp"
#include "nrep/spectral.hpp"
#include "nrep/symplectic.hpp"

namespace nrep {

std::string to_string(Task t) {
  switch (t) {
    case Task::spectrum: return "spectrum";
    case Task::blindness: return "blindness";
    case Task::kl: return "kl";
    case Task::fermion_verify: return "fermion-verify";
    case Task::stabilizer: return "stabilizer";
    case Task::counterexample: return "counterexample";
    case Task::golden: return "golden";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  for (Task t : {Task::spectrum, Task::blindness, Task::kl, Task::fermion_verify, Task::stabilizer,
                 Task::counterexample, Task::golden})
    if (to_string(t) == s) return t;
  throw ConfigError("unknown task: " + s);
}

ModelKind model_from_string(const std::string& s) {
  if (s == "compass") return ModelKind::compass;
  if (s == "toric") return ModelKind::toric;
  if (s == "custom") return ModelKind::custom;
  throw ConfigError("unknown model: " + s);
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "cyclic") return Boundary::cyclic;
  if (s == "open") return Boundary::open;
  throw ConfigError("unknown boundary: " + s);
}

void RunConfig::validate() const {
  if (tol <= 0.0) throw ConfigError("--tol must be positive");
  if (degeneracy_tol <= 0.0) throw ConfigError("degeneracy tolerance must be positive");
  if (threads < 0) throw ConfigError("--threads must be non-negative");
  switch (model) {
    case ModelKind::compass:
      try {
        compass.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      break;
    case ModelKind::toric:
      if (toric_l < 2) throw ConfigError("--L must be >= 2");
      break;
    case ModelKind::custom:
      if (custom_file.empty()) throw ConfigError("custom model needs --file");
      break;
  }
  if ((task == Task::blindness || task == Task::stabilizer) && m < 1) throw ConfigError("--m must be >= 1");
  if (task == Task::stabilizer && model != ModelKind::toric)
    throw ConfigError("stabilizer certification is available for the toric code only");
  if ((task == Task::counterexample || task == Task::golden) && model != ModelKind::compass)
    throw ConfigError(to_string(task) + " runs on the compass model");
}

namespace {

json cplx_json(cplx z) { return {z.real(), z.imag()}; }

json model_json(const RunConfig& c) {
  switch (c.model) {
    case ModelKind::compass:
      return {{"kind", "compass"},
              {"n", c.compass.n},
              {"jx", c.compass.jx},
              {"jz", c.compass.jz},
              {"boundary", c.compass.boundary == Boundary::cyclic ? "cyclic" : "open"}};
    case ModelKind::toric:
      return {{"kind", "toric"}, {"L", c.toric_l}};
    case ModelKind::custom:
      return {{"kind", "custom"}, {"file", c.custom_file}};
  }
  return nullptr;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

OperatorSum build_model(const RunConfig& c) {
  switch (c.model) {
    case ModelKind::compass: return build_compass(c.compass);
    case ModelKind::toric: return build_toric(c.toric_l);
    case ModelKind::custom: return to_operator_sum(body_terms_from_json(read_json(c.custom_file)));
  }
  throw ConfigError("unknown model");
}

GroundSpaceOptions ground_options(const RunConfig& c) {
  GroundSpaceOptions o;
  o.degeneracy_tol = c.degeneracy_tol;
  if (c.model == ModelKind::compass) o.gauge.push_back(compass_gauge(c.compass.n));
  return o;
}

json sectors_json(const std::vector<Sector>& sectors) {
  json out = json::array();
  for (const auto& s : sectors) out.push_back({{"label", s.label}, {"minimum", s.minimum}, {"dimension", s.dimension}});
  return out;
}

std::vector<PauliTerm> column_parities(int n) {
  std::vector<PauliTerm> ops;
  for (int k = 0; k < n; ++k) ops.push_back(build_column_parity(k, n));
  return ops;
}

json decomposition_json(const GroundStateDecomposition& d) {
  return {{"a", {cplx_json(d.a1), cplx_json(d.a2), cplx_json(d.a3)}}, {"residual", d.residual}};
}

json state_json(const StateVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cplx_json(v[i]));
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

RunResult run_spectrum(const RunConfig& c) {
  const OperatorSum h = build_model(c);
  const EigenDecomposition spec = eig_hermitian(to_matrix(h));
  const GroundSpace gs = ground_space(h, spec, ground_options(c));
  RunResult r;
  r.report = {{"model", model_json(c)},
              {"task", "spectrum"},
              {"n_sites", h.n_sites()},
              {"e0", gs.e0},
              {"gap", std::isfinite(gs.gap) ? json(gs.gap) : json(nullptr)},
              {"degeneracy", gs.degeneracy()},
              {"max_residual", gs.max_residual}};
  json lowest = json::array();
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(8, spec.values.size()); ++i) lowest.push_back(spec.values[i]);
  r.report["lowest_eigenvalues"] = lowest;
  if (c.model == ModelKind::compass) {
    const auto ops = column_parities(c.compass.n);
    r.report["column_parity_sectors"] = sectors_json(sector_split(h, ops));
    if (c.compass.n == 3) r.report["parity_basis"] = decomposition_json(decompose_ground_state(gs.basis[0]));
  }
  if (!c.dump_spectrum.empty()) {
    json vals = json::array();
    for (Eigen::Index i = 0; i < spec.values.size(); ++i) vals.push_back(spec.values[i]);
    write_json(c.dump_spectrum, {{"model", model_json(c)}, {"eigenvalues", vals}});
  }
  if (!c.dump_ground.empty()) {
    json states = json::array();
    for (const auto& v : gs.basis) states.push_back(state_json(v));
    write_json(c.dump_ground, {{"model", model_json(c)},
                               {"n_sites", h.n_sites()},
                               {"basis_ordering", "site 0 is the most significant bit; site = row * width + col"},
                               {"gauge", c.model == ModelKind::compass ? "all-site Z parity, +1 first" : "none"},
                               {"e0", gs.e0},
                               {"states", states}});
  }
  r.summary = "E0 = " + fmt(gs.e0) + ", degeneracy " + std::to_string(gs.degeneracy()) + ", gap " + fmt(gs.gap);
  return r;
}

RunResult run_blindness(const RunConfig& c) {
  ExposedOptions opts{c.tol, ground_options(c)};
  const ExtremePointCertificate cert = certify_exposed_extreme(build_model(c), c.m, opts);
  RunResult r;
  r.report = to_json(cert);
  r.report["model"] = model_json(c);
  r.exit_code = cert.blindness.passed ? 0 : 2;
  r.summary = std::to_string(c.m) + "-blindness " + (cert.blindness.passed ? "PASS" : "FAIL") +
              " (max diag " + fmt(cert.blindness.max_diagonal_deviation) + ", max offdiag " +
              fmt(cert.blindness.max_offdiagonal_norm) + "); conclusion " + to_string(cert.conclusion);
  if (const auto* w = cert.blindness.offdiagonal_witness ? &*cert.blindness.offdiagonal_witness : nullptr) {
    r.summary += "; off-diagonal witness sites";
    for (int s : w->sites) r.summary += " " + std::to_string(s);
  }
  return r;
}

RunResult run_kl(const RunConfig& c) {
  const OperatorSum h = build_model(c);
  const GroundSpace gs = ground_space(h, ground_options(c));
  const auto errors = single_site_error_basis(h.n_sites());
  const KLReport kl = check_knill_laflamme(gs.basis, errors, c.tol, "identity and all weight-1 Paulis");
  const BlindnessCertificate blind = certify_blindness(gs, std::min(2, h.n_sites()), c.tol);
  RunResult r;
  r.report = to_json(kl);
  r.report["model"] = model_json(c);
  r.report["codewords"] = gs.degeneracy();
  r.report["blindness_m2_passed"] = blind.passed;
  r.report["agrees_with_blindness"] = blind.passed == kl.passed;
  r.exit_code = kl.passed ? 0 : 2;
  r.summary = std::string("Knill-Laflamme ") + (kl.passed ? "PASS" : "FAIL") + " (worst violation " +
              fmt(kl.worst_violation) + "), 2-blindness " + (blind.passed ? "PASS" : "FAIL");
  return r;
}

RunResult run_fermion_verify(const RunConfig& c) {
  const OperatorSum h = build_model(c);
  const int n = h.n_sites();
  const GroundSpace gs = ground_space(h, ground_options(c));
  RunResult r;
  r.report = {{"model", model_json(c)}, {"task", "fermion-verify"}, {"n_sites", n}, {"degeneracy", gs.degeneracy()}};
  bool ok = true;

  double isometry = 0.0;
  std::vector<FockState> mapped;
  for (const auto& v : gs.basis) mapped.push_back(map_state(v, n));
  for (std::size_t p = 0; p < mapped.size(); ++p)
    for (std::size_t q = 0; q < mapped.size(); ++q)
      isometry = std::max(isometry, std::abs(mapped[p].inner(mapped[q]) - gs.basis[p].dot(gs.basis[q])));
  r.report["isometry_deviation"] = isometry;
  ok = ok && isometry <= 1e-12;

  double diagram = 0.0, recovery = 0.0;
  for (const auto& v : gs.basis) {
    const DiagramReport d = verify_diagram(v, n);
    diagram = std::max(diagram, d.max_deviation);
    recovery = std::max(recovery, d.recovery_deviation);
  }
  r.report["diagram_max_deviation"] = diagram;
  r.report["recovery_max_deviation"] = recovery;
  ok = ok && diagram <= c.tol && recovery <= c.tol;

  if (2 * n <= 12) {
    const PenaltyReport pen = verify_penalty_ground_space(h);
    r.report["penalty"] = {{"u", pen.u},
                           {"lattice_degeneracy", pen.lattice_degeneracy},
                           {"fock_degeneracy", pen.fock_degeneracy},
                           {"subspace_distance", pen.subspace_distance}};
    ok = ok && pen.subspace_distance < 1e-8;
  }
  if (gs.degeneracy() >= 2) {
    const Fermionic2RDM r0 = assemble_2rdm(marginal_vector(gs.basis[0], n));
    const Fermionic2RDM r1 = assemble_2rdm(marginal_vector(gs.basis[1], n));
    r.report["preimage_rdm_difference"] = (r0.matrix - r1.matrix).norm();
    r.report["rdm_dimension"] = r0.matrix.rows();
  }
  r.report["passed"] = ok;
  r.exit_code = ok ? 0 : 2;
  r.summary = std::string("fermion bridge ") + (ok ? "PASS" : "FAIL") + " (diagram " + fmt(diagram) +
              ", isometry " + fmt(isometry) + ")";
  return r;
}

RunResult run_stabilizer(const RunConfig& c) {
  const StabilizerGroup g = toric_generators(c.toric_l);
  const BlindnessCertificate cert = certify_stabilizer_blindness(g, c.m, c.threads);
  RunResult r;
  r.report = to_json(cert);
  r.report["model"] = model_json(c);
  r.report["n_qubits"] = g.n_qubits();
  r.report["independent_generators"] = g.rank();
  const int reached = cert.passed ? c.m : cert.diagonal_witness->sites.size();
  const std::uint64_t expected = count_low_weight_paulis(g.n_qubits(), reached);
  r.report["candidates_expected"] = expected;
  r.report["enumeration_complete"] = expected == cert.candidates_checked;
  const bool ok = cert.passed && expected == cert.candidates_checked;
  r.exit_code = ok ? 0 : 2;
  r.summary = "toric L=" + std::to_string(c.toric_l) + " " + std::to_string(c.m) + "-blindness " +
              (cert.passed ? "PASS" : "FAIL") + " after " + std::to_string(cert.candidates_checked) + " Paulis";
  if (!cert.passed) r.summary += "; logical witness " + cert.diagonal_witness->pauli;
  return r;
}

RunResult run_counterexample(const RunConfig& c) {
  const OperatorSum h = build_compass(c.compass);
  const int n = h.n_sites();
  const GroundSpace gs = ground_space(h, ground_options(c));
  const ExtremePointCertificate ext = certify_exposed_extreme(h, 2, {c.tol, ground_options(c)});

  RunResult r;
  r.report = to_json(ext);
  r.report["model"] = model_json(c);
  r.report["task"] = "counterexample";
  bool ok = ext.conclusion == Conclusion::extreme_multiple_preimages;

  if (c.compass.n == 3 && gs.degeneracy() >= 1) {
    const GroundStateDecomposition d = decompose_ground_state(gs.basis[0]);
    r.report["parity_basis"] = decomposition_json(d);
    ok = ok && d.residual < 1e-9;
  }
  if (gs.degeneracy() >= 2) {
    const FockState f0 = map_state(gs.basis[0], n);
    const FockState f1 = map_state(gs.basis[1], n);
    const Fermionic2RDM r0 = assemble_2rdm(marginal_vector(gs.basis[0], n));
    const Fermionic2RDM r1 = assemble_2rdm(marginal_vector(gs.basis[1], n));
    const double diff = (r0.matrix - r1.matrix).norm();
    r.report["fermionic"] = {{"rdm_dimension", r0.matrix.rows()},
                             {"preimage_overlap", std::abs(f0.inner(f1))},
                             {"rdm_frobenius_difference", diff},
                             {"conclusion", to_string(ext.conclusion)}};
    ok = ok && diff <= c.tol;
  } else {
    ok = false;
  }
  r.report["passed"] = ok;
  r.exit_code = ok ? 0 : 2;
  r.summary = "counterexample: " + to_string(ext.conclusion) + " (degeneracy " + std::to_string(ext.degeneracy) +
              ", gap " + fmt(ext.gap) + ", 2-blind max deviation " +
              fmt(std::max(ext.blindness.max_diagonal_deviation, ext.blindness.max_offdiagonal_norm)) + ")";
  return r;
}

RunResult run_golden(const RunConfig& c) {
  RunResult r;
  const json fresh = golden_report(c.compass);
  if (c.golden_check.empty()) {
    r.report = fresh;
    r.summary = "golden values regenerated";
    return r;
  }
  std::string mismatch;
  const bool same = compare_golden(fresh, read_json(c.golden_check), default_golden_tolerances(), &mismatch);
  r.report = {{"golden", c.golden_check}, {"match", same}, {"mismatch", mismatch}};
  r.exit_code = same ? 0 : 2;
  r.summary = same ? "golden file matches" : "golden mismatch at " + mismatch;
  return r;
}

}  // namespace

RunResult run(const RunConfig& config) {
  try {
    config.validate();
    switch (config.task) {
      case Task::spectrum: return run_spectrum(config);
      case Task::blindness: return run_blindness(config);
      case Task::kl: return run_kl(config);
      case Task::fermion_verify: return run_fermion_verify(config);
      case Task::stabilizer: return run_stabilizer(config);
      case Task::counterexample: return run_counterexample(config);
      case Task::golden: return run_golden(config);
    }
    throw ConfigError("unknown task");
  } catch (const std::exception& e) {
    return {1, {{"error", e.what()}, {"task", to_string(config.task)}}, std::string("error: ") + e.what()};
  }
}

namespace {

bool compare_node(const json& a, const json& b, const GoldenTolerances& tol, const std::string& path,
                  const std::string& key, std::string* mismatch) {
  auto fail = [&](const std::string& why) {
    if (mismatch) *mismatch = path + ": " + why;
    return false;
  };
  if (a.is_number() && b.is_number()) {
    auto it = tol.per_field.find(key);
    const double t = it == tol.per_field.end() ? tol.fallback : it->second;
    const double d = std::abs(a.get<double>() - b.get<double>());
    return d <= t ? true : fail("differs by " + std::to_string(d));
  }
  if (a.type() != b.type()) throw GoldenSchemaError("type mismatch at " + path);
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key())) throw GoldenSchemaError("golden lacks field " + path + "/" + it.key());
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key())) throw GoldenSchemaError("report lacks field " + path + "/" + it.key());
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!compare_node(it.value(), b.at(it.key()), tol, path + "/" + it.key(), it.key(), mismatch)) return false;
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) throw GoldenSchemaError("array length mismatch at " + path);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!compare_node(a[i], b[i], tol, path + "/" + std::to_string(i), key, mismatch)) return false;
    return true;
  }
  return a == b ? true : fail("values differ");
}

}  // namespace

bool compare_golden(const json& report, const json& golden, const GoldenTolerances& tol, std::string* first_mismatch) {
  return compare_node(report, golden, tol, "", "", first_mismatch);
}

GoldenTolerances default_golden_tolerances() {
  return {1e-9, {{"e0", 1e-9}, {"gap", 1e-9}, {"minimum", 1e-9}, {"a", 1e-9}, {"residual", 1e-9}, {"rdm", 1e-9}}};
}

json golden_report(const CompassParams& params) {
  const OperatorSum h = build_compass(params);
  const int n = h.n_sites();
  GroundSpaceOptions opts;
  opts.gauge.push_back(compass_gauge(params.n));
  const GroundSpace gs = ground_space(h, opts);
  const auto ops = column_parities(params.n);
  json g{{"method", "dense Hermitian eigensolve of the compass Hamiltonian; ground basis fixed by the all-site Z "
                        "parity (+1 first) with the first non-negligible amplitude real positive"},
         {"model",
          {{"n", params.n},
           {"jx", params.jx},
           {"jz", params.jz},
           {"boundary", params.boundary == Boundary::cyclic ? "cyclic" : "open"}}},
         {"e0", gs.e0},
         {"gap", gs.gap},
         {"degeneracy", gs.degeneracy()},
         {"sectors", sectors_json(sector_split(h, ops))}};
  if (params.n == 3) g["parity_basis"] = decomposition_json(decompose_ground_state(gs.basis[0]));
  const int keep[2] = {0, 1};
  const CMatrix rho = partial_trace(gs.basis[0], keep, n);
  json rdm = json::array();
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = 0; b < 4; ++b) rdm.push_back(cplx_json(rho(a, b)));
  g["rdm"] = {{"state", 0}, {"sites", {0, 1}}, {"matrix", rdm}};
  return g;
}

}  // namespace nrep
