#include "lfc/lmi_cert.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "lfc/error.hpp"
#include "lfc/sdp.hpp"

namespace lfc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix sum_of(const std::vector<Matrix>& ms, Eigen::Index d) {
  Matrix s = Matrix::Zero(d, d);
  for (const auto& m : ms) s += m;
  return s;
}

}  // namespace

Matrix ClosedLoopMatrices::sum_hat() const { return sum_of(Ahat, dimension()); }
Matrix ClosedLoopMatrices::sum_tilde() const { return sum_of(Atilde, dimension()); }

ClosedLoopMatrices assemble_closed_loop(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains) {
  const int n = plant.order();
  const int agents = topology.agents();
  validate_gains(gains, topology, n);

  ClosedLoopMatrices m;
  m.agents = agents;
  m.order = n;
  const int d = agents * n;
  m.A0 = Matrix::Zero(d, d);
  for (int i = 0; i < agents; ++i) m.A0.block(i * n, i * n, n, n) = plant.A();

  m.Ahat.assign(static_cast<std::size_t>(topology.pin_channels()), Matrix::Zero(d, d));
  m.pin_agents.assign(m.Ahat.size(), -1);
  for (const auto& pin : topology.pins()) {
    const auto l = static_cast<std::size_t>(topology.pin_channel(pin.agent));
    m.Ahat[l].block(pin.agent * n, pin.agent * n, n, n) = -pin.weight * plant.B() * gains.pin.at(pin.agent);
    m.pin_agents[l] = pin.agent;
  }

  m.Atilde.assign(static_cast<std::size_t>(topology.follower_channels()), Matrix::Zero(d, d));
  for (const auto& e : topology.follower_edges()) {
    const Edge key{e.agent, e.neighbor};
    const auto p = static_cast<std::size_t>(topology.follower_channel(key));
    const Matrix aij = -e.weight * plant.B() * gains.follower.at(key);
    m.Atilde[p].block(e.agent * n, e.agent * n, n, n) += aij;
    m.Atilde[p].block(e.agent * n, e.neighbor * n, n, n) -= aij;
  }

  m.F = m.A0 + m.sum_hat() + m.sum_tilde();
  return m;
}

std::array<Matrix, 3> lmi_blocks(const ClosedLoopMatrices& mats, const Matrix& P, const Matrix& q_pin, const Matrix& q_follower,
                                 const Matrix& r_pin, const Matrix& r_follower, const DelayBounds& b, ThirdLmi third) {
  const Eigen::Index d = mats.dimension();
  const bool has_pin = !mats.Ahat.empty();
  const bool has_follower = !mats.Atilde.empty();
  const double tau = b.tau;
  const Matrix H = r_pin + r_follower;
  const Matrix M1 = mats.F.transpose() * P + P * mats.F + q_pin + q_follower;
  const Matrix sum_hat = mats.sum_hat();
  const Matrix sum_tilde = mats.sum_tilde();

  std::array<Matrix, 3> out;
  // at tau = 0 the R rows and columns vanish identically and are dropped
  const bool pin_rows = has_pin && tau > 0.0;
  const bool follower_rows = has_follower && tau > 0.0;
  const Eigen::Index blocks = 1 + (pin_rows ? 1 : 0) + (follower_rows ? 1 : 0);
  Matrix l1 = Matrix::Zero(blocks * d, blocks * d);
  l1.topLeftCorner(d, d) = M1 + 3.0 * tau * mats.A0.transpose() * H * mats.A0;
  Eigen::Index at = d;
  if (pin_rows) {
    const Matrix c = tau * P * sum_hat;
    l1.block(0, at, d, d) = c;
    l1.block(at, 0, d, d) = c.transpose();
    l1.block(at, at, d, d) = -tau * r_pin;
    at += d;
  }
  if (follower_rows) {
    const Matrix c = tau * P * sum_tilde;
    l1.block(0, at, d, d) = c;
    l1.block(at, 0, d, d) = c.transpose();
    l1.block(at, at, d, d) = -tau * r_follower;
  }
  out[0] = l1;

  const Matrix m1bar = -(1.0 - b.d_pin) * q_pin;
  const Matrix m1tilde = third == ThirdLmi::follower_family ? Matrix(-(1.0 - b.d_follower) * q_follower) : m1bar;
  if (has_pin) out[1] = 3.0 * tau * sum_hat.transpose() * H * sum_hat + m1bar;
  if (has_follower) out[2] = 3.0 * tau * sum_tilde.transpose() * H * sum_tilde + m1tilde;
  return out;
}

DerivedMatrices compute_derived(const ClosedLoopMatrices& mats, const Certificate& c, const DelayBounds& b,
                                const LmiOptions& options) {
  const Eigen::Index d = mats.dimension();
  DerivedMatrices out;
  const Matrix q = sum_of(c.Q, d), qbar = sum_of(c.Qbar, d);
  out.H = sum_of(c.Rbar, d) + sum_of(c.R, d);
  out.M1 = mats.F.transpose() * c.P + c.P * mats.F + qbar + q;
  out.M1bar = -(1.0 - b.d_pin) * q;
  out.M1tilde = options.third == ThirdLmi::follower_family ? Matrix(-(1.0 - b.d_follower) * qbar) : out.M1bar;

  out.M2 = 3.0 * mats.A0.transpose() * out.H * mats.A0;
  for (std::size_t l = 0; l < mats.Ahat.size(); ++l)
    out.M2 += c.P * mats.Ahat[l] * c.R[l].llt().solve(mats.Ahat[l].transpose() * c.P);
  for (std::size_t p = 0; p < mats.Atilde.size(); ++p)
    out.M2 += c.P * mats.Atilde[p] * c.Rbar[p].llt().solve(mats.Atilde[p].transpose() * c.P);
  out.M2 = symmetrize(out.M2);
  const Matrix sh = mats.sum_hat(), st = mats.sum_tilde();
  out.M2bar = symmetrize(3.0 * sh.transpose() * out.H * sh);
  out.M2tilde = symmetrize(3.0 * st.transpose() * out.H * st);
  return out;
}

namespace {

// Symmetrizes in place, warning above 1e-12 asymmetry, and requires PD.
void prepare(Matrix& m, const std::string& name, Eigen::Index d, LmiReport& report) {
  if (m.rows() != d || m.cols() != d) throw ValidationError("certificate matrix " + name + " has the wrong dimensions");
  if (!m.allFinite()) throw ValidationError("certificate matrix " + name + " has non-finite entries");
  const double asym = asymmetry(m);
  if (asym > 1e-12) report.warnings.push_back(name + " was symmetrized (asymmetry " + std::to_string(asym) + ")");
  m = symmetrize(m);
  if (!(lambda_min(m) > 0.0)) throw ValidationError("certificate matrix " + name + " is not positive definite");
}

}  // namespace

LmiReport check_feasibility(const ClosedLoopMatrices& mats, const Certificate& cert, const DelayBounds& b,
                            const LmiOptions& options) {
  if (!(options.margin > 0.0)) throw ValidationError("feasibility margin must be positive");
  if (!(b.tau >= 0.0)) throw ValidationError("delay bound must be nonnegative");
  if (cert.Q.size() != mats.Ahat.size() || cert.R.size() != mats.Ahat.size())
    throw ValidationError("certificate needs one Q and one R per pin channel");
  if (cert.Qbar.size() != mats.Atilde.size() || cert.Rbar.size() != mats.Atilde.size())
    throw ValidationError("certificate needs one Qbar and one Rbar per follower channel");

  LmiReport report;
  report.tau = b.tau;
  const Eigen::Index d = mats.dimension();
  Certificate c = cert;
  prepare(c.P, "P", d, report);
  auto prepare_family = [&](std::vector<Matrix>& fam, const std::string& name) {
    for (std::size_t k = 0; k < fam.size(); ++k) prepare(fam[k], name + "[" + std::to_string(k + 1) + "]", d, report);
  };
  prepare_family(c.Q, "Q");
  prepare_family(c.Qbar, "Qbar");
  prepare_family(c.R, "R");
  prepare_family(c.Rbar, "Rbar");

  double scale = max_abs_entry(c.P);
  for (const auto* fam : {&c.Q, &c.Qbar, &c.R, &c.Rbar})
    for (const auto& m : *fam) scale = std::max(scale, max_abs_entry(m));
  report.scale = scale;
  report.tolerance = options.margin * scale;

  const auto lmis = lmi_blocks(mats, c.P, sum_of(c.Q, d), sum_of(c.Qbar, d), sum_of(c.R, d), sum_of(c.Rbar, d), b, options.third);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < 3; ++k) {
    report.present[k] = lmis[k].size() > 0;
    report.max_eigenvalue[k] = report.present[k] ? lambda_max(symmetrize(lmis[k])) : kNaN;
    if (report.present[k]) worst = std::max(worst, report.max_eigenvalue[k]);
  }
  report.margin = -worst / scale;
  report.feasible = worst <= -report.tolerance;
  if (!report.feasible) {
    for (std::size_t k = 0; k < 3; ++k)
      if (report.present[k] && report.max_eigenvalue[k] > -report.tolerance) {
        report.reason = "LMI " + std::to_string(k + 1) + " not negative definite within margin";
        break;
      }
  }
  return report;
}

SearchResult search_certificate(const ClosedLoopMatrices& mats, const DelayBounds& b, const SearchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  SearchResult out;
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };
  if (!is_hurwitz(mats.F)) {
    out.reason = "F not Hurwitz";
    out.seconds = elapsed();
    return out;
  }

  const int d = mats.dimension();
  const SymmetricBasis basis(d);
  const int k = basis.size();
  const bool has_pin = !mats.Ahat.empty();
  const bool has_follower = !mats.Atilde.empty();
  // variable blocks: P, Q, Qbar, R, Rbar (family sums); absent families skipped
  std::array<int, 5> offset{};
  int nv = 0;
  for (int v = 0; v < 5; ++v) {
    const bool used = v == 0 || ((v == 1 || v == 3) ? has_pin : has_follower);
    offset[static_cast<std::size_t>(v)] = used ? nv : -1;
    if (used) nv += k;
  }

  const Matrix zero = Matrix::Zero(d, d);
  AffineMatrixSystem sys;
  sys.variables = nv;
  const auto probe0 = lmi_blocks(mats, zero, zero, zero, zero, zero, b, options.lmi.third);
  std::array<int, 3> lmi_slot{-1, -1, -1};
  for (std::size_t l = 0; l < 3; ++l) {
    if (probe0[l].size() == 0) continue;
    lmi_slot[l] = static_cast<int>(sys.constraints.size());
    sys.constraints.push_back({Matrix::Zero(probe0[l].rows(), probe0[l].cols()), {}, true});
  }
  for (int v = 0; v < 5; ++v) {
    if (offset[static_cast<std::size_t>(v)] < 0) continue;
    MatrixConstraint lower{Matrix::Zero(d, d), {}, true};
    MatrixConstraint upper{Matrix::Identity(d, d), {}, false};
    for (int a = 0; a < k; ++a) {
      const Matrix e = basis.element(a);
      std::array<const Matrix*, 5> args{&zero, &zero, &zero, &zero, &zero};
      args[static_cast<std::size_t>(v)] = &e;
      const auto lm = lmi_blocks(mats, *args[0], *args[1], *args[2], *args[3], *args[4], b, options.lmi.third);
      const int var = offset[static_cast<std::size_t>(v)] + a;
      for (std::size_t l = 0; l < 3; ++l) {
        if (lmi_slot[l] < 0) continue;
        const Matrix g = -symmetrize(lm[l]);
        if (g.cwiseAbs().maxCoeff() > 0.0) sys.constraints[static_cast<std::size_t>(lmi_slot[l])].terms.emplace_back(var, g);
      }
      lower.terms.emplace_back(var, e);
      upper.terms.emplace_back(var, -e);
    }
    sys.constraints.push_back(std::move(lower));
    sys.constraints.push_back(std::move(upper));
  }

  // seed: Lyapunov P for F'P + PF = -I, scaled into (0, I); half-identity families
  Matrix p0 = solve_lyapunov(mats.F, -Matrix::Identity(d, d));
  const double p_top = lambda_max(p0);
  if (!(lambda_min(p0) > 0.0)) p0 = Matrix::Identity(d, d);
  else p0 /= 2.0 * p_top;
  Vector x0(nv);
  x0.segment(0, k) = basis.to_coords(p0);
  for (int v = 1; v < 5; ++v)
    if (offset[static_cast<std::size_t>(v)] >= 0) x0.segment(offset[static_cast<std::size_t>(v)], k) = basis.to_coords(0.5 * Matrix::Identity(d, d));

  const double target = options.lmi.margin;
  SdpResult sdp;
  if (options.method == SearchMethod::barrier) {
    BarrierOptions bo;
    bo.target = target;
    bo.gap_tolerance = options.gap_tolerance;
    bo.max_newton = options.newton_budget;
    if (options.early_stop > 0.0) bo.stop_margin = options.early_stop * target;
    sdp = maximize_margin(sys, x0, bo);
  } else {
    ProjectionOptions po;
    po.target = target;
    po.budget = options.budget;
    sdp = alternating_projections(sys, x0, po);
  }
  out.iterations = sdp.iterations;
  out.best_margin = sdp.margin;
  out.reason = sdp.reason;

  auto block = [&](int v) {
    const int o = offset[static_cast<std::size_t>(v)];
    return o < 0 ? zero : basis.to_matrix(sdp.x.segment(o, k));
  };
  Certificate cert;
  cert.P = block(0);
  const double pins = static_cast<double>(mats.Ahat.size());
  const double channels = static_cast<double>(mats.Atilde.size());
  cert.Q.assign(mats.Ahat.size(), block(1) / std::max(pins, 1.0));
  cert.R.assign(mats.Ahat.size(), block(3) / std::max(pins, 1.0));
  cert.Qbar.assign(mats.Atilde.size(), block(2) / std::max(channels, 1.0));
  cert.Rbar.assign(mats.Atilde.size(), block(4) / std::max(channels, 1.0));

  try {
    out.report = check_feasibility(mats, cert, b, options.lmi);
  } catch (const ValidationError& e) {
    out.report = LmiReport{};
    out.report.tau = b.tau;
    out.report.reason = e.what();
  }
  if (sdp.feasible && out.report.feasible) {
    out.certificate = std::move(cert);
    out.reason = "certified";
  } else if (sdp.feasible) {
    out.reason = "search point failed verification: " + out.report.reason;
  }
  out.seconds = elapsed();
  return out;
}

MaxDelayEstimate estimate_max_delay(const ClosedLoopMatrices& mats, const Certificate& cert, const DelayBounds& b,
                                    const LmiOptions& options) {
  const DerivedMatrices dm = compute_derived(mats, cert, b, options);
  MaxDelayEstimate est;
  const std::array<std::pair<const Matrix*, const Matrix*>, 3> pairs{
      std::pair{&dm.M1, &dm.M2}, std::pair{&dm.M1bar, &dm.M2bar}, std::pair{&dm.M1tilde, &dm.M2tilde}};
  const std::array<bool, 3> present{true, !mats.Ahat.empty(), !mats.Atilde.empty()};
  est.tau_hat = std::numeric_limits<double>::infinity();
  bool undefined = false;
  for (std::size_t k = 0; k < 3; ++k) {
    RatioTerm& t = est.terms[k];
    if (!present[k]) {
      t.status = RatioStatus::vacuous;
      t.value = kNaN;
      continue;
    }
    t.numerator = lambda_max(symmetrize(*pairs[k].first));
    t.denominator = lambda_max(symmetrize(*pairs[k].second));
    if (t.numerator > 0.0) {
      t.status = RatioStatus::undefined;
      t.value = kNaN;
      undefined = true;
    } else if (t.numerator == 0.0) {
      t.status = RatioStatus::zero;
      t.value = 0.0;
    } else if (!(t.denominator > 0.0)) {
      t.status = RatioStatus::unbounded;
      t.value = std::numeric_limits<double>::infinity();
    } else {
      t.status = RatioStatus::ok;
      t.value = std::abs(t.numerator) / t.denominator;
    }
    if (t.status == RatioStatus::ok || t.status == RatioStatus::zero) est.tau_hat = std::min(est.tau_hat, t.value);
  }
  est.valid = !undefined && std::isfinite(est.tau_hat);
  return est;
}

double ratio_bound(const Matrix& m1, const Matrix& m2) {
  if (m1.rows() != m1.cols() || m2.rows() != m2.cols() || m1.rows() != m2.rows())
    throw ValidationError("ratio_bound needs square matrices of equal size");
  const double top1 = lambda_max(symmetrize(m1));
  if (!(top1 < 0.0)) throw ValidationError("M1 must be negative definite");
  const SymmetricEigen e2 = jacobi_eigen(symmetrize(m2));
  if (!(e2.values(0) > 0.0)) throw ValidationError("M2 must be positive definite");
  return std::abs(top1) / e2.values(e2.values.size() - 1);
}

HurwitzReport hurwitz_gamma(const Vector& gamma) {
  HurwitzReport r;
  r.gamma = gamma;
  const std::vector<double> coeffs(gamma.data(), gamma.data() + gamma.size());
  r.abscissa = spectral_abscissa(companion_matrix(coeffs));
  r.hurwitz = r.abscissa < 0.0;
  if (gamma.size() == 3) r.routh = gamma(0) > 0.0 && gamma(2) > 0.0 && gamma(2) * gamma(1) > gamma(0);
  return r;
}

HurwitzReport hurwitz_phi(const CompanionPlant& plant, const DirectedTopology& topology, const GainSet& gains, int agent) {
  if (!topology.is_pinned(agent)) throw ValidationError("agent " + std::to_string(agent + 1) + " is not pinned");
  const auto it = gains.pin.find(agent);
  if (it == gains.pin.end()) throw ValidationError("missing pin gain for agent " + std::to_string(agent + 1));
  if (it->second.size() != plant.order()) throw ValidationError("pin gain has the wrong length");
  const double alpha = topology.pinning()(agent);
  Vector gamma(plant.order());
  for (int y = 0; y < plant.order(); ++y)
    gamma(y) = plant.a_coeffs()[static_cast<std::size_t>(y)] + plant.b_gain() * alpha * it->second(y);
  return hurwitz_gamma(gamma);
}

std::string to_string(ThirdLmi mode) { return mode == ThirdLmi::follower_family ? "follower_family" : "pin_family"; }

ThirdLmi third_lmi_from_string(const std::string& s) {
  if (s == "follower_family") return ThirdLmi::follower_family;
  if (s == "pin_family") return ThirdLmi::pin_family;
  throw ValidationError("unknown third-LMI mode '" + s + "' (expected follower_family or pin_family)");
}

std::string to_string(SearchMethod m) { return m == SearchMethod::barrier ? "barrier" : "projection"; }

SearchMethod search_method_from_string(const std::string& s) {
  if (s == "barrier") return SearchMethod::barrier;
  if (s == "projection") return SearchMethod::projection;
  throw ValidationError("unknown search method '" + s + "' (expected barrier or projection)");
}

std::string to_string(RatioStatus s) {
  switch (s) {
    case RatioStatus::ok: return "ok";
    case RatioStatus::zero: return "zero";
    case RatioStatus::undefined: return "undefined";
    case RatioStatus::unbounded: return "unbounded";
    case RatioStatus::vacuous: return "vacuous";
  }
  return "?";
}

}  // namespace lfc
