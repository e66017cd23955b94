#include "nrep/blindness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace nrep {

const BlindnessWitness* BlindnessCertificate::witness() const {
  const BlindnessWitness* d = diagonal_witness ? &*diagonal_witness : nullptr;
  const BlindnessWitness* o = offdiagonal_witness ? &*offdiagonal_witness : nullptr;
  if (d && o) return d->value >= o->value ? d : o;
  return d ? d : o;
}

std::vector<std::vector<int>> site_subsets(int n, int m) {
  std::vector<std::vector<int>> out;
  if (m < 0 || m > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = m - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < m; ++k) cur[static_cast<std::size_t>(k)] = cur[static_cast<std::size_t>(k - 1)] + 1;
  }
  return out;
}

namespace {

struct SubsetScore {
  double diag = 0.0;
  int diag_p = 0, diag_q = 0;
  double off = 0.0;
  int off_p = 0, off_q = 0;
};

SubsetScore score_subset(std::span<const StateVector> basis, std::span<const int> sites, int n_sites) {
  const auto k = basis.size();
  std::vector<CMatrix> diag(k);
  for (std::size_t p = 0; p < k; ++p) diag[p] = partial_trace(basis[p], sites, n_sites);
  SubsetScore s;
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = p + 1; q < k; ++q) {
      const double d = (diag[p] - diag[q]).norm();
      if (d > s.diag) {
        s.diag = d;
        s.diag_p = int(p);
        s.diag_q = int(q);
      }
      const double o = cross_marginal(basis[p], basis[q], sites, n_sites).norm();
      if (o > s.off) {
        s.off = o;
        s.off_p = int(p);
        s.off_q = int(q);
      }
    }
  return s;
}

void validate(std::span<const StateVector> basis, int n_sites, int m) {
  if (basis.empty()) throw std::invalid_argument("certify_blindness: empty basis");
  if (m < 1) throw std::invalid_argument("certify_blindness: m must be >= 1");
  if (m > n_sites) throw std::invalid_argument("certify_blindness: m exceeds the number of sites");
}

BlindnessCertificate reduce(const std::vector<std::vector<int>>& subsets, const std::vector<SubsetScore>& scores,
                            int m, double tol) {
  BlindnessCertificate cert;
  cert.m = m;
  cert.tolerance = tol;
  cert.candidates_checked = subsets.size();
  std::size_t best_d = 0, best_o = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].diag > cert.max_diagonal_deviation) {
      cert.max_diagonal_deviation = scores[i].diag;
      best_d = i;
    }
    if (scores[i].off > cert.max_offdiagonal_norm) {
      cert.max_offdiagonal_norm = scores[i].off;
      best_o = i;
    }
  }
  if (cert.max_diagonal_deviation > tol)
    cert.diagonal_witness = BlindnessWitness{subsets[best_d], scores[best_d].diag_p, scores[best_d].diag_q,
                                             cert.max_diagonal_deviation, {}};
  if (cert.max_offdiagonal_norm > tol)
    cert.offdiagonal_witness = BlindnessWitness{subsets[best_o], scores[best_o].off_p, scores[best_o].off_q,
                                                cert.max_offdiagonal_norm, {}};
  cert.passed = !cert.diagonal_witness && !cert.offdiagonal_witness;
  return cert;
}

}  // namespace

BlindnessCertificate certify_blindness(std::span<const StateVector> basis, int n_sites, int m, double tol) {
  validate(basis, n_sites, m);
  const auto subsets = site_subsets(n_sites, m);
  std::vector<SubsetScore> scores(subsets.size());
  const auto n = static_cast<std::int64_t>(subsets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i)
    scores[static_cast<std::size_t>(i)] = score_subset(basis, subsets[static_cast<std::size_t>(i)], n_sites);
  return reduce(subsets, scores, m, tol);
}

BlindnessCertificate certify_blindness(const GroundSpace& gs, int m, double tol) {
  return certify_blindness(gs.basis, gs.n_sites, m, tol);
}

namespace serial {

BlindnessCertificate certify_blindness(std::span<const StateVector> basis, int n_sites, int m, double tol) {
  validate(basis, n_sites, m);
  const auto subsets = site_subsets(n_sites, m);
  std::vector<SubsetScore> scores;
  scores.reserve(subsets.size());
  for (const auto& s : subsets) scores.push_back(score_subset(basis, s, n_sites));
  return reduce(subsets, scores, m, tol);
}

}  // namespace serial

KLReport check_knill_laflamme(std::span<const StateVector> codewords, std::span<const OperatorSum> given,
                              double tol, std::string description) {
  const auto k = codewords.size();
  if (k == 0) throw std::invalid_argument("check_knill_laflamme: no codewords");
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) {
      const cplx overlap = codewords[p].dot(codewords[q]);
      if (std::abs(overlap - (p == q ? 1.0 : 0.0)) > 1e-8)
        throw std::invalid_argument("check_knill_laflamme: codewords are not orthonormal");
    }
  std::vector<OperatorSum> errors;
  const bool has_identity = std::any_of(given.begin(), given.end(), [](const OperatorSum& e) {
    const OperatorSum c = e.canonical();
    return c.size() == 1 && c.terms()[0].weight() == 0;
  });
  if (!has_identity) {
    OperatorSum id(sites_of(codewords[0]));
    id.add(PauliTerm::identity());
    errors.push_back(std::move(id));
  }
  errors.insert(errors.end(), given.begin(), given.end());
  const auto ne = errors.size();
  // ec[l][p] = E_l |C_p>
  std::vector<std::vector<StateVector>> ec(ne, std::vector<StateVector>(k));
  for (std::size_t l = 0; l < ne; ++l)
    for (std::size_t p = 0; p < k; ++p) ec[l][p] = nrep::apply(errors[l], codewords[p]);

  KLReport rep;
  rep.error_set = std::move(description);
  rep.q = CMatrix::Zero(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(ne));
  for (std::size_t l = 0; l < ne; ++l)
    for (std::size_t m = 0; m < ne; ++m) {
      const cplx q00 = ec[l][0].dot(ec[m][0]);
      rep.q(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) = q00;
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q) {
          const cplx v = ec[l][p].dot(ec[m][q]);
          const double dev = p == q ? std::abs(v - q00) : std::abs(v);
          rep.worst_violation = std::max(rep.worst_violation, dev);
        }
    }
  rep.passed = rep.worst_violation <= tol;
  return rep;
}

std::vector<OperatorSum> single_site_error_basis(int n_sites) {
  std::vector<OperatorSum> out;
  OperatorSum id(n_sites);
  id.add(PauliTerm::identity());
  out.push_back(id);
  for (int j = 0; j < n_sites; ++j)
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      OperatorSum e(n_sites);
      e.add(PauliTerm::single(j, p));
      out.push_back(std::move(e));
    }
  return out;
}

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::extreme_multiple_preimages: return "extreme-multiple-preimages";
    case Conclusion::extreme_unique_preimage: return "extreme-unique-preimage";
    case Conclusion::not_certified: return "not-certified";
  }
  return "not-certified";
}

ExtremePointCertificate certify_exposed_extreme(const OperatorSum& h, int m, const ExposedOptions& opts) {
  ExtremePointCertificate out;
  GroundSpace gs;
  try {
    gs = ground_space(h, opts.ground);
  } catch (const AmbiguousGapError& e) {
    out.conclusion = Conclusion::not_certified;
    out.note = e.what();
    out.blindness.m = m;
    out.blindness.tolerance = opts.tol;
    return out;
  }
  out.degeneracy = gs.degeneracy();
  out.e0 = gs.e0;
  out.gap = gs.gap;
  out.blindness = certify_blindness(gs, m, opts.tol);
  if (!(gs.gap > opts.tol)) {
    out.conclusion = Conclusion::not_certified;
    out.note = "no strict spectral gap above the ground space";
  } else if (out.degeneracy == 1) {
    out.conclusion = Conclusion::extreme_unique_preimage;
    out.note = "non-degenerate ground state";
  } else if (out.blindness.passed) {
    out.conclusion = Conclusion::extreme_multiple_preimages;
    out.note = "degenerate ground space with identical " + std::to_string(m) + "-site marginals";
  } else {
    out.conclusion = Conclusion::not_certified;
    out.note = "ground states are distinguishable by " + std::to_string(m) + "-site operators";
  }
  return out;
}

double verify_witness_duality(const ReducedHamiltonianVector& rh, const MarginalVector& mv) {
  if (rh.pairs != mv.pairs || rh.entries.size() != mv.rdms.size())
    throw std::invalid_argument("verify_witness_duality: pair lists differ");
  cplx total = 0.0;
  for (std::size_t i = 0; i < rh.entries.size(); ++i) total += (rh.entries[i] * mv.rdms[i]).trace();
  return total.real();
}

json to_json(const BlindnessWitness& w) {
  json j{{"sites", w.sites}, {"p", w.p}, {"q", w.q}, {"value", w.value}};
  if (!w.pauli.empty()) j["pauli"] = w.pauli;
  return j;
}

json to_json(const BlindnessCertificate& c) {
  json j{{"m", c.m},
         {"passed", c.passed},
         {"max_diag_dev", c.max_diagonal_deviation},
         {"max_offdiag", c.max_offdiagonal_norm},
         {"tolerance", c.tolerance},
         {"method", c.method},
         {"candidates_checked", c.candidates_checked}};
  json w = nullptr;
  if (c.diagonal_witness || c.offdiagonal_witness) {
    w = json::object();
    w["diagonal"] = c.diagonal_witness ? to_json(*c.diagonal_witness) : json(nullptr);
    w["offdiagonal"] = c.offdiagonal_witness ? to_json(*c.offdiagonal_witness) : json(nullptr);
  }
  j["witness"] = w;
  return j;
}

json to_json(const KLReport& r) {
  json q = json::array();
  for (Eigen::Index a = 0; a < r.q.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < r.q.cols(); ++b) row.push_back({r.q(a, b).real(), r.q(a, b).imag()});
    q.push_back(std::move(row));
  }
  return {{"error_set", r.error_set}, {"passed", r.passed}, {"worst_violation", r.worst_violation}, {"Q", q}};
}

json to_json(const ExtremePointCertificate& c) {
  json j = to_json(c.blindness);
  j["degeneracy"] = c.degeneracy;
  j["e0"] = c.e0;
  j["gap"] = std::isfinite(c.gap) ? json(c.gap) : json(nullptr);
  j["conclusion"] = to_string(c.conclusion);
  j["note"] = c.note;
  return j;
}

}  // namespace nrep
