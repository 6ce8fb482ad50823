#pragma once

#include <vector>

#include "lfc/delay_sim.hpp"
#include "lfc/lmi_cert.hpp"

namespace lfc {

struct LkSeries {
  std::vector<double> time;
  std::vector<double> v1, v2, v3, v4, v5;
  std::vector<double> total;
};

/// Lyapunov-Krasovskii functional along a trace:
///   V1 = e'Pe,  V2/V3 = integrals of e'Qe over the delayed windows,
///   V4/V5 = double integrals of e'' R e' (e' by central differences).
/// Trapezoidal quadrature on the trace grid; e(s) = e(0), e'(s) = 0 for
/// s < 0. Window lengths follow the channel delays tau(t).
LkSeries evaluate_lk_functional(const SimTrace& trace, const Certificate& cert, const DelayProfiles& profiles);

/// Largest (V_{k+1} - V_k) / V_k over samples with t_k >= t_from.
double max_relative_increase(const LkSeries& series, double t_from);

}  // namespace lfc
