#include "oscgraph/graph.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numbers>

namespace oscgraph {

namespace {

CMatrix stack_columns(std::span<const TwoModeOperator> ops) {
  const Eigen::Index len = ops.front().entries.size();
  CMatrix M(len, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].entries.size() != len) {
      throw std::invalid_argument("hs_orthonormalize: operators of differing shapes");
    }
    M.col(static_cast<Eigen::Index>(k)) = vectorize(ops[k].entries);
  }
  return M;
}

void require_tol(double tol, const char* what) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument(std::string(what) + ": tol must lie in (0, 1)");
  }
}

int count_rank(const Eigen::VectorXd& sigma, double tol) {
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > tol * sigma(0)) ++rank;
  }
  return rank;
}

}  // namespace

TwoModeOperator q_projector(Complex beta, const ModeDims& dims,
                            std::optional<double> tail_budget, double alpha_max) {
  dims.validate();
  const ModeVector b = coherent_fock(beta, dims.d_rel, true, alpha_max);
  if (tail_budget && b.tail_mass > *tail_budget) {
    throw std::invalid_argument("q_projector: coherent tail " + std::to_string(b.tail_mass) +
                                " over budget " + std::to_string(*tail_budget));
  }
  TwoModeOperator Q;
  Q.dims = dims;
  Q.hermitian_flag = true;
  const CMatrix rel = b.coefficients * b.coefficients.adjoint();
  Q.entries = kron(CMatrix::Identity(dims.d_cm, dims.d_cm), rel);
  return Q;
}

double projection_defect(const TwoModeOperator& Q) {
  const double idem = (Q.entries * Q.entries - Q.entries).norm();
  const double herm = (Q.entries - Q.entries.adjoint()).norm();
  return std::max(idem, herm);
}

double covariance_defect(Complex beta, double t, const ModeDims& dims) {
  const PropagatorMatrix prop = propagator_matrix(t, dims, PropagatorLimits::unrestricted());
  const TwoModeOperator Q = q_projector(beta, dims);
  const Complex rotated = beta * std::exp(Complex(0.0, -std::numbers::sqrt2 * t));
  const TwoModeOperator Q_rot = q_projector(rotated, dims);
  const CMatrix& U = prop.U.entries;
  return (U * Q.entries * U.adjoint() - Q_rot.entries).norm();
}

std::vector<Complex> sample_betas(const GraphSampleSpec& spec) {
  std::vector<Complex> out;
  for (double r : spec.radii) {
    if (!(r >= 0.0)) throw std::invalid_argument("sample_graph: radii must be non-negative");
    for (double phi : spec.angles) {
      for (double t : spec.times) {
        const Complex beta = std::polar(r, -std::numbers::sqrt2 * t + phi);
        bool seen = false;
        for (const Complex& b : out) {
          if (std::abs(b - beta) <= kBetaDedupTol) {
            seen = true;
            break;
          }
        }
        if (!seen) out.push_back(beta);
      }
    }
  }
  if (out.empty()) throw std::invalid_argument("sample_graph: empty effective sample set");
  return out;
}

std::vector<TwoModeOperator> projectors_for(std::span<const Complex> betas,
                                            const ModeDims& dims) {
  std::vector<TwoModeOperator> ops;
  ops.reserve(betas.size());
  for (const Complex& b : betas) ops.push_back(q_projector(b, dims));
  return ops;
}

std::vector<TwoModeOperator> sample_graph(const GraphSampleSpec& spec) {
  const auto betas = sample_betas(spec);
  return projectors_for(betas, spec.dims);
}

std::vector<Complex> grid_betas(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid_betas: n must be >= 1");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  const double step = n > 1 ? (hi - lo) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.emplace_back(lo + j * step, lo + i * step);
  }
  return out;
}

GraphBasis hs_orthonormalize(std::span<const TwoModeOperator> ops, double tol) {
  require_tol(tol, "hs_orthonormalize");
  if (ops.empty()) throw std::invalid_argument("hs_orthonormalize: no operators");
  const CMatrix M = stack_columns(ops);
  Eigen::BDCSVD<CMatrix> svd(M, Eigen::ComputeThinU);
  const Eigen::VectorXd sigma = svd.singularValues();

  GraphBasis basis;
  basis.tol = tol;
  basis.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  basis.numerical_rank = count_rank(sigma, tol);
  const ModeDims dims = ops.front().dims;
  const Eigen::Index side = ops.front().entries.rows();
  for (int k = 0; k < basis.numerical_rank; ++k) {
    TwoModeOperator B;
    B.dims = dims;
    B.entries = Eigen::Map<const CMatrix>(svd.matrixU().col(k).data(), side, side);
    basis.ops.push_back(std::move(B));
  }
  return basis;
}

std::vector<std::pair<int, int>> rank_curve(std::span<const TwoModeOperator> ops,
                                            double tol) {
  require_tol(tol, "rank_curve");
  if (ops.empty()) return {};
  const CMatrix M = stack_columns(ops);
  std::vector<std::pair<int, int>> curve;
  for (Eigen::Index k = 1; k <= M.cols(); ++k) {
    Eigen::BDCSVD<CMatrix> svd(M.leftCols(k));
    curve.emplace_back(static_cast<int>(k), count_rank(svd.singularValues(), tol));
  }
  return curve;
}

double projection_residual(const CMatrix& A, const GraphBasis& basis) {
  CMatrix proj = CMatrix::Zero(A.rows(), A.cols());
  for (const auto& B : basis.ops) proj += hs_inner(B.entries, A) * B.entries;
  const double scale = A.norm();
  return scale == 0.0 ? 0.0 : (A - proj).norm() / scale;
}

double identity_residual(const GraphBasis& basis) {
  if (basis.ops.empty()) throw std::invalid_argument("identity_residual: empty basis");
  const Eigen::Index side = basis.ops.front().entries.rows();
  return projection_residual(CMatrix::Identity(side, side), basis);
}

double subspace_residual(const GraphBasis& from, const GraphBasis& onto) {
  double worst = 0.0;
  for (const auto& B : from.ops) worst = std::max(worst, projection_residual(B.entries, onto));
  return worst;
}

CMatrix coherent_resolution_integral(int d_rel, const DiskRule& rule) {
  if (d_rel < 1) throw std::invalid_argument("coherent_resolution: d_rel must be >= 1");
  const double inf = std::numeric_limits<double>::infinity();
  return integrate(rule, [&](Complex beta) -> CMatrix {
           const CVector v = coherent_fock(beta, d_rel, false, inf).coefficients;
           return v * v.adjoint();
         }) /
         std::numbers::pi;
}

double coherent_resolution_deviation(int d_rel, const DiskRule& rule) {
  return (coherent_resolution_integral(d_rel, rule) - CMatrix::Identity(d_rel, d_rel)).norm();
}

double coherent_resolution_check(int d_rel, const DiskRule& rule) {
  if (d_rel < 1) throw std::invalid_argument("coherent_resolution_check: d_rel must be >= 1");
  const double min_radius = std::sqrt(2.0 * d_rel) + 4.0;
  if (rule.R < min_radius) {
    throw std::invalid_argument("coherent_resolution_check: R = " + std::to_string(rule.R) +
                                " below sqrt(2 d_rel) + 4 = " + std::to_string(min_radius));
  }
  if (rule.angular_nodes < 4 * d_rel) {
    throw std::invalid_argument("coherent_resolution_check: " +
                                std::to_string(rule.angular_nodes) +
                                " angular nodes under-resolve d_rel = " + std::to_string(d_rel));
  }
  return coherent_resolution_deviation(d_rel, rule);
}

}  // namespace oscgraph
