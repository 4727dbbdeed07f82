#include "oscgraph/anticlique.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <random>

namespace oscgraph {

namespace {

constexpr double kProjectorTol = 1e-10;
constexpr double kDegenerateAmplitude = 1e-12;

struct RankInfo {
  int rank = 0;
  std::vector<double> sigma;
};

RankInfo compressed_rank(const CMatrix& P, const GraphBasis& basis, double tol) {
  CMatrix M(P.size(), static_cast<Eigen::Index>(basis.ops.size()));
  for (std::size_t k = 0; k < basis.ops.size(); ++k) {
    const CMatrix PBP = P * basis.ops[k].entries * P;
    M.col(static_cast<Eigen::Index>(k)) = vectorize(PBP);
  }
  Eigen::BDCSVD<CMatrix> svd(M);
  const Eigen::VectorXd s = svd.singularValues();
  RankInfo info;
  info.sigma.assign(s.data(), s.data() + s.size());
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (s(k) > tol * s(0)) ++info.rank;
    }
  }
  return info;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller on raw engine output, so streams match across standard libraries.
Complex complex_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

void require_projection(const TwoModeOperator& P, const char* what) {
  const double scale = std::max(1.0, P.entries.norm());
  if ((P.entries * P.entries - P.entries).norm() > kProjectorTol * scale ||
      (P.entries - P.entries.adjoint()).norm() > kProjectorTol * scale) {
    throw std::invalid_argument(std::string(what) + ": P is not an orthogonal projection");
  }
}

}  // namespace

AnticliqueSpec AnticliqueSpec::vacuum(const ModeDims& dims) {
  AnticliqueSpec spec;
  spec.dims = dims;
  spec.K = dims.d_cm;
  spec.g0 = CVector::Zero(dims.d_rel);
  spec.g0(0) = 1.0;
  return spec;
}

void AnticliqueSpec::validate() const {
  dims.validate();
  if (K < 2) throw std::invalid_argument("AnticliqueSpec: K must be >= 2 (rank P >= 2)");
  if (K > dims.d_cm) throw std::invalid_argument("AnticliqueSpec: K exceeds d_cm");
  if (g0.size() != dims.d_rel) throw std::invalid_argument("AnticliqueSpec: g0 size != d_rel");
  if (std::abs(g0.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("AnticliqueSpec: g0 must be a unit vector");
  }
}

TwoModeOperator anticlique_projector(const AnticliqueSpec& spec) {
  spec.validate();
  CMatrix pi_k = CMatrix::Zero(spec.dims.d_cm, spec.dims.d_cm);
  for (int k = 0; k < spec.K; ++k) pi_k(k, k) = 1.0;
  TwoModeOperator P;
  P.dims = spec.dims;
  P.hermitian_flag = true;
  P.entries = kron(pi_k, CMatrix(spec.g0 * spec.g0.adjoint()));
  return P;
}

ScalarCompression kl_scalar_check(const TwoModeOperator& P, const TwoModeOperator& A) {
  const Complex pp = hs_inner(P, P);
  if (std::abs(pp) < 1e-24) throw std::invalid_argument("kl_scalar_check: P is zero");
  const CMatrix PAP = P.entries * A.entries * P.entries;
  ScalarCompression out;
  out.lambda = hs_inner(P.entries, PAP) / pp;
  out.defect = (PAP - out.lambda * P.entries).norm();
  return out;
}

CompressionReport compression_dimension(const TwoModeOperator& P, const GraphBasis& basis,
                                        double tol,
                                        std::span<const LabeledOperator> generators) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("compression_dimension: tol must lie in (0, 1)");
  }
  if (basis.ops.empty()) throw std::invalid_argument("compression_dimension: empty basis");
  require_projection(P, "compression_dimension");
  CompressionReport report;
  report.tol = tol;
  const RankInfo info = compressed_rank(P.entries, basis, tol);
  report.numerical_rank = info.rank;
  report.singular_values = info.sigma;
  for (const auto& B : basis.ops) {
    report.max_defect = std::max(report.max_defect, kl_scalar_check(P, B).defect);
  }
  for (const auto& g : generators) {
    const ScalarCompression c = kl_scalar_check(P, g.op);
    report.coefficients[g.label] = c.lambda.real();
    report.max_defect = std::max(report.max_defect, c.defect);
  }
  return report;
}

std::vector<CVector> structured_probes(const AnticliqueSpec& spec, std::span<const int> levels) {
  spec.validate();
  std::vector<CVector> probes;
  for (int level : levels) {
    if (level < 0 || level >= spec.dims.d_rel) {
      throw std::invalid_argument("structured_probes: level outside the relative truncation");
    }
    CVector h = CVector::Zero(spec.dims.d_rel);
    h(level) = 1.0;
    h -= spec.g0.dot(h) * spec.g0;
    if (h.norm() < 1e-12) continue;
    h.normalize();
    CVector phi = CVector::Zero(spec.dims.d_cm);
    phi(0) = 1.0;
    probes.push_back(kron(phi, h));
  }
  return probes;
}

MaximalityReport maximality_probe(const TwoModeOperator& P, const GraphBasis& basis,
                                  int n_probes, std::uint64_t seed,
                                  std::span<const CVector> structured, double tol) {
  require_projection(P, "maximality_probe");
  if (n_probes < 0) throw std::invalid_argument("maximality_probe: n_probes must be >= 0");
  const Eigen::Index D = P.entries.rows();
  const double rank_p = P.entries.trace().real();
  if (std::lround(rank_p) >= D) {
    throw std::invalid_argument("maximality_probe: range(P) is the whole space");
  }
  if (compressed_rank(P.entries, basis, tol).rank != 1) {
    throw std::invalid_argument("maximality_probe: P is not an anticlique for this basis");
  }

  std::vector<std::pair<std::string, CVector>> candidates;
  for (std::size_t i = 0; i < structured.size(); ++i) {
    const CVector& chi = structured[i];
    if (chi.size() != D) throw std::invalid_argument("maximality_probe: probe size mismatch");
    if ((P.entries * chi).norm() > 1e-10 * chi.norm()) {
      throw std::invalid_argument("maximality_probe: probe has a component inside range(P)");
    }
    candidates.emplace_back("structured_" + std::to_string(i), chi.normalized());
  }
  std::mt19937_64 rng(seed);
  const CMatrix complement = CMatrix::Identity(D, D) - P.entries;
  for (int i = 0; i < n_probes; ++i) {
    CVector v(D);
    for (Eigen::Index k = 0; k < D; ++k) v(k) = complex_normal(rng);
    candidates.emplace_back("random_" + std::to_string(i), (complement * v).normalized());
  }
  if (candidates.empty()) throw std::invalid_argument("maximality_probe: no probes");

  MaximalityReport report;
  for (auto& [label, chi] : candidates) {
    const CMatrix extended = P.entries + chi * chi.adjoint();
    const RankInfo info = compressed_rank(extended, basis, tol);
    ProbeOutcome outcome;
    outcome.label = label;
    outcome.rank = info.rank;
    outcome.sigma_ratio = info.sigma.size() > 1 ? info.sigma[1] / info.sigma[0] : 0.0;
    outcome.witness = chi;
    report.probes.push_back(outcome);
  }
  report.weakest = report.probes.front();
  report.min_sigma_ratio = report.probes.front().sigma_ratio;
  for (const auto& p : report.probes) {
    report.min_sigma_ratio = std::min(report.min_sigma_ratio, p.sigma_ratio);
    if (p.rank < report.weakest.rank ||
        (p.rank == report.weakest.rank && p.sigma_ratio < report.weakest.sigma_ratio)) {
      report.weakest = p;
    }
  }
  report.min_rank = report.weakest.rank;
  return report;
}

TwoModeOperator elementary_error(const TwoModeOperator& rho, double t, Complex beta,
                                 const ModeDims& dims) {
  if (!(rho.dims == dims)) throw std::invalid_argument("elementary_error: dims mismatch");
  if (!rho.is_hermitian(1e-12)) throw std::invalid_argument("elementary_error: rho not Hermitian");
  const double trace = rho.entries.trace().real();
  if (trace > 1.0 + 1e-10) throw std::invalid_argument("elementary_error: trace(rho) > 1");
  const CMatrix herm = (rho.entries + rho.entries.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("elementary_error: rho is not positive semidefinite");
  }
  const PropagatorMatrix prop = propagator_matrix(t, dims, PropagatorLimits::unrestricted());
  const TwoModeOperator Q = q_projector(beta, dims);
  TwoModeOperator out;
  out.dims = dims;
  out.hermitian_flag = true;
  const CMatrix QU = Q.entries * prop.U.entries;
  out.entries = QU * rho.entries * QU.adjoint();
  return out;
}

CodeCheck code_orthogonality_check(const AnticliqueSpec& spec, double t, Complex beta) {
  spec.validate();
  const PropagatorMatrix prop = propagator_matrix(t, spec.dims, PropagatorLimits::unrestricted());
  const TwoModeOperator Q = q_projector(beta, spec.dims);
  const Eigen::Index D = spec.dims.total();
  CMatrix images(D, spec.K);
  for (int k = 0; k < spec.K; ++k) {
    CVector phi = CVector::Zero(spec.dims.d_cm);
    phi(k) = 1.0;
    const CVector eta = kron(phi, spec.g0);
    images.col(k) = Q.entries * (prop.U.entries * eta);
  }
  const CMatrix gram = images.adjoint() * images;
  CodeCheck check;
  double largest = 0.0;
  for (int k = 0; k < spec.K; ++k) {
    check.diagonals.push_back(gram(k, k).real());
    largest = std::max(largest, gram(k, k).real());
  }
  if (largest <= kDegenerateAmplitude * kDegenerateAmplitude) {
    throw DegenerateCodeError("code_orthogonality_check: error annihilates every codeword");
  }
  for (int j = 0; j < spec.K; ++j) {
    for (int k = 0; k < spec.K; ++k) {
      if (j == k) continue;
      const double denom = std::sqrt(check.diagonals[j] * check.diagonals[k]);
      check.max_offdiag = std::max(check.max_offdiag, std::abs(gram(j, k)) / denom);
    }
  }
  return check;
}

}  // namespace oscgraph
