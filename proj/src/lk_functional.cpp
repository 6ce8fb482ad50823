#include "lfc/lk_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfc/error.hpp"

namespace lfc {

namespace {

// Running trapezoid integrals of a sampled integrand f and of s*f.
struct Prefix {
  double h;
  std::vector<double> f, sf, cf, csf;

  Prefix(double step, std::vector<double> values) : h(step), f(std::move(values)) {
    const std::size_t n = f.size();
    sf.resize(n);
    cf.assign(n, 0.0);
    csf.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) sf[k] = static_cast<double>(k) * h * f[k];
    for (std::size_t k = 1; k < n; ++k) {
      cf[k] = cf[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
      csf[k] = csf[k - 1] + 0.5 * h * (sf[k - 1] + sf[k]);
    }
  }

  // integral of g from 0 to u (0 <= u <= t_last), g linear between samples
  static double partial(const std::vector<double>& g, const std::vector<double>& c, double h, double u) {
    const auto k = std::min(static_cast<std::size_t>(std::floor(u / h)), g.size() - 1);
    if (k + 1 >= g.size()) return c.back();
    const double w = u / h - static_cast<double>(k);
    const double gu = (1.0 - w) * g[k] + w * g[k + 1];
    return c[k] + 0.5 * w * h * (g[k] + gu);
  }

  // integral of f over [a, t_k] for a >= 0
  double window(std::size_t k, double a) const { return cf[k] - partial(f, cf, h, a); }
  double window_weighted(std::size_t k, double a) const { return csf[k] - partial(sf, csf, h, a); }
};

}  // namespace

LkSeries evaluate_lk_functional(const SimTrace& trace, const Certificate& cert, const DelayProfiles& profiles) {
  const std::size_t n = trace.samples();
  const Eigen::Index dim = static_cast<Eigen::Index>(trace.agents) * trace.order;
  if (cert.P.rows() != dim) throw ValidationError("certificate dimension does not match the trace");
  if (cert.Q.size() != profiles.pin.size() || cert.Qbar.size() != profiles.follower.size())
    throw ValidationError("certificate families do not match the delay channels");
  const double tau_max = profiles.max_delay();
  if (n < 3 || trace.time.back() < tau_max) throw ValidationError("trace is shorter than the largest delay");
  const double h = trace.step;

  std::vector<Vector> e(n), de(n);
  for (std::size_t k = 0; k < n; ++k) e[k] = trace.stacked_error(k);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0) de[k] = (e[1] - e[0]) / h;
    else if (k + 1 == n) de[k] = (e[k] - e[k - 1]) / h;
    else de[k] = (e[k + 1] - e[k - 1]) / (2.0 * h);
  }

  LkSeries out;
  out.time = trace.time;
  out.v1.resize(n);
  out.v2.assign(n, 0.0);
  out.v3.assign(n, 0.0);
  out.v4.assign(n, 0.0);
  out.v5.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) out.v1[k] = e[k].dot(cert.P * e[k]);

  // adds one channel's single and double integral terms
  auto accumulate = [&](const Matrix& q, const Matrix& r, const DelayProfile& profile, std::vector<double>& vq,
                        std::vector<double>& vr) {
    std::vector<double> fq(n), fr(n);
    for (std::size_t k = 0; k < n; ++k) {
      fq[k] = e[k].dot(q * e[k]);
      fr[k] = de[k].dot(r * de[k]);
    }
    const double q0 = fq[0];
    const Prefix pq(h, std::move(fq)), pr(h, std::move(fr));
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * h;
      const double tau = profile.value(trace.time[k]);
      const double a = t - tau;
      // single integral over [t - tau, t]; pre-history e = e(0)
      vq[k] += a >= 0.0 ? pq.window(k, a) : pq.cf[k] + (-a) * q0;
      // int_{-tau}^0 int_{t+theta}^t g ds dtheta = int_{t-tau}^t (s - (t - tau)) g(s) ds; g = 0 before 0
      const double lo = std::max(a, 0.0);
      vr[k] += pr.window_weighted(k, lo) - a * pr.window(k, lo);
    }
  };
  for (std::size_t l = 0; l < cert.Q.size(); ++l) accumulate(cert.Q[l], cert.R[l], profiles.pin[l], out.v2, out.v4);
  for (std::size_t p = 0; p < cert.Qbar.size(); ++p)
    accumulate(cert.Qbar[p], cert.Rbar[p], profiles.follower[p], out.v3, out.v5);

  out.total.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.total[k] = out.v1[k] + out.v2[k] + out.v3[k] + out.v4[k] + out.v5[k];
  return out;
}

double max_relative_increase(const LkSeries& s, double t_from) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < s.total.size(); ++k) {
    if (s.time[k] < t_from) continue;
    const double base = s.total[k];
    if (base <= 0.0) continue;
    worst = std::max(worst, (s.total[k + 1] - s.total[k]) / base);
  }
  return worst;
}

}  // namespace lfc
