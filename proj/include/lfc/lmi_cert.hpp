#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lfc/graph_topology.hpp"
#include "lfc/linalg.hpp"
#include "lfc/plant.hpp"
#include "lfc/protocol.hpp"

namespace lfc {

/// Error-dynamics matrices of the delayed closed loop
///   e' = A0 e + sum_l Ahat_l e(t - tau_l) + sum_p Atilde_p e(t - sigma_p).
struct ClosedLoopMatrices {
  int agents = 0;
  int order = 0;
  Matrix A0;
  std::vector<Matrix> Ahat;    // one per pin channel
  std::vector<Matrix> Atilde;  // one per follower channel
  std::vector<int> pin_agents; // agent of each Ahat
  Matrix F;

  int dimension() const { return agents * order; }
  Matrix sum_hat() const;
  Matrix sum_tilde() const;
};

ClosedLoopMatrices assemble_closed_loop(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains);

struct Certificate {
  Matrix P;
  std::vector<Matrix> Q;     // per pin channel
  std::vector<Matrix> Qbar;  // per follower channel
  std::vector<Matrix> R;
  std::vector<Matrix> Rbar;
};

/// Delay bounds of the admissible class: 0 <= tau(t) < tau, |tau'| <= d.
struct DelayBounds {
  double tau = 0.0;
  double d_pin = 0.99;
  double d_follower = 0.99;
};

/// Which Q family enters the third LMI.
enum class ThirdLmi { follower_family, pin_family };

struct LmiOptions {
  double margin = 1e-8;  // relative to the largest base-matrix entry
  ThirdLmi third = ThirdLmi::follower_family;
};

/// Matrices derived from a certificate; recomputed on demand.
struct DerivedMatrices {
  Matrix H;
  Matrix M1, M1bar, M1tilde;
  Matrix M2, M2bar, M2tilde;
};

DerivedMatrices compute_derived(const ClosedLoopMatrices& mats, const Certificate& cert, const DelayBounds& bounds,
                                const LmiOptions& options = {});

struct LmiReport {
  std::array<double, 3> max_eigenvalue{};  // NaN for a vacuous LMI
  std::array<bool, 3> present{};
  double scale = 0.0;       // largest absolute entry of the base matrices
  double tolerance = 0.0;   // margin * scale
  double margin = 0.0;      // -max lambda_max / scale over present LMIs
  double tau = 0.0;
  bool feasible = false;
  std::string reason;
  std::vector<std::string> warnings;
};

/// Verifies the three LMIs at bounds.tau: each present LMI must have
/// lambda_max <= -margin * scale. Throws ValidationError when a base matrix
/// is not positive definite or the dimensions disagree.
LmiReport check_feasibility(const ClosedLoopMatrices& mats, const Certificate& cert, const DelayBounds& bounds,
                            const LmiOptions& options = {});

/// The three LMI matrices evaluated on family sums (exact when the slope
/// bound is common to each family). Empty families are vacuous and give
/// an empty matrix.
std::array<Matrix, 3> lmi_blocks(const ClosedLoopMatrices& mats, const Matrix& P, const Matrix& q_pin, const Matrix& q_follower,
                                 const Matrix& r_pin, const Matrix& r_follower, const DelayBounds& bounds, ThirdLmi third);

enum class SearchMethod { barrier, projection };

struct SearchOptions {
  SearchMethod method = SearchMethod::barrier;
  LmiOptions lmi;
  int budget = 5000;            // projection iterations
  int newton_budget = 400;      // barrier Newton steps
  double gap_tolerance = 1e-3;
  /// Return as soon as the scaled margin exceeds this multiple of the
  /// target (0 = optimize the margin fully).
  double early_stop = 0.0;
};

struct SearchResult {
  std::optional<Certificate> certificate;
  LmiReport report;          // verifier output for the returned or best point
  double best_margin = 0.0;  // largest scaled margin reached by the search
  int iterations = 0;
  std::string reason;
  double seconds = 0.0;
};

SearchResult search_certificate(const ClosedLoopMatrices& mats, const DelayBounds& bounds, const SearchOptions& options = {});

enum class RatioStatus { ok, zero, undefined, unbounded, vacuous };

struct RatioTerm {
  double numerator = 0.0;    // lambda_max of the negative matrix
  double denominator = 0.0;  // lambda_max of the positive matrix
  double value = 0.0;
  RatioStatus status = RatioStatus::ok;
};

struct MaxDelayEstimate {
  std::array<RatioTerm, 3> terms;
  double tau_hat = 0.0;
  bool valid = false;
};

/// min over |lambda_max(M1x)| / lambda_max(M2x) for the three pairs.
MaxDelayEstimate estimate_max_delay(const ClosedLoopMatrices& mats, const Certificate& cert, const DelayBounds& bounds,
                                    const LmiOptions& options = {});

/// xi_m = |lambda_max(M1)| / lambda_max(M2); requires M1 < 0 and M2 > 0.
double ratio_bound(const Matrix& m1, const Matrix& m2);

struct HurwitzReport {
  bool hurwitz = false;
  Vector gamma;
  std::optional<bool> routh;  // gamma3 gamma2 > gamma1 with gamma1, gamma3 > 0, for n = 3
  double abscissa = 0.0;
};

/// phi_i: companion matrix with last row -gamma, gamma = a + b alpha_i0 k_i0.
HurwitzReport hurwitz_phi(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains, int agent);
HurwitzReport hurwitz_gamma(const Vector& gamma);

std::string to_string(ThirdLmi mode);
ThirdLmi third_lmi_from_string(const std::string& s);
std::string to_string(SearchMethod m);
SearchMethod search_method_from_string(const std::string& s);
std::string to_string(RatioStatus s);

}  // namespace lfc
