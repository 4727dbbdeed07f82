#pragma once

// Code projections P = Pi_K (x) |g0><g0| with g0 on the relative factor, the
// Knill-Laflamme scalar test P A P = lambda P, compression dimension of a
// graph basis, and a falsification battery for maximality.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oscgraph/graph.hpp"

namespace oscgraph {

struct AnticliqueSpec {
  CVector g0;  // unit vector on the relative factor
  int K = 0;   // number of CM basis vectors in the code
  ModeDims dims;

  /// Vacuum g0 with K = d_cm.
  static AnticliqueSpec vacuum(const ModeDims& dims);
  void validate() const;
};

struct LabeledOperator {
  std::string label;
  TwoModeOperator op;
};

struct ScalarCompression {
  Complex lambda;
  double defect = 0.0;  // ||P A P - lambda P||_F
};

struct CompressionReport {
  int numerical_rank = 0;
  std::vector<double> singular_values;
  std::map<std::string, double> coefficients;  // generator label -> Re lambda
  double max_defect = 0.0;
  double tol = 0.0;

  double sigma_ratio() const {
    return singular_values.size() < 2 || singular_values[0] == 0.0
               ? 0.0
               : singular_values[1] / singular_values[0];
  }
};

struct ProbeOutcome {
  std::string label;
  int rank = 0;
  double sigma_ratio = 0.0;
  CVector witness;
};

struct MaximalityReport {
  int min_rank = 0;
  double min_sigma_ratio = 0.0;
  ProbeOutcome weakest;  // probe achieving min_rank (ties: smallest sigma ratio)
  std::vector<ProbeOutcome> probes;
};

struct CodeCheck {
  double max_offdiag = 0.0;        // after normalizing the Gram diagonal
  std::vector<double> diagonals;   // ||Q U eta_k||^2 = success probability per codeword
};

/// Raised when every codeword image vanishes under the error.
class DegenerateCodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultCompressionTol = 1e-8;

TwoModeOperator anticlique_projector(const AnticliqueSpec& spec);

ScalarCompression kl_scalar_check(const TwoModeOperator& P, const TwoModeOperator& A);

/// Rank of {P B_k P} over the basis; coefficients and defects are also
/// collected for any labeled generators passed in.
CompressionReport compression_dimension(const TwoModeOperator& P, const GraphBasis& basis,
                                        double tol = kDefaultCompressionTol,
                                        std::span<const LabeledOperator> generators = {});

/// Probe vectors phi_0 (x) h with h the Fock level k orthogonalized against g0.
std::vector<CVector> structured_probes(const AnticliqueSpec& spec, std::span<const int> levels);

/// Extends P by each probe chi (structured ones plus n_probes seeded random
/// unit vectors orthogonal to range(P)) and records the compression rank of
/// P + |chi><chi|.
MaximalityReport maximality_probe(const TwoModeOperator& P, const GraphBasis& basis,
                                  int n_probes, std::uint64_t seed,
                                  std::span<const CVector> structured = {},
                                  double tol = kDefaultCompressionTol);

/// Q_beta U_t rho U_t^dagger Q_beta (unnormalized; trace = success probability).
TwoModeOperator elementary_error(const TwoModeOperator& rho, double t, Complex beta,
                                 const ModeDims& dims);

/// Gram matrix of the error images Q_beta U_t eta_k of the codewords
/// eta_k = e_k (x) g0, k < K.
CodeCheck code_orthogonality_check(const AnticliqueSpec& spec, double t, Complex beta);

}  // namespace oscgraph
