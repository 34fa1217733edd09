// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conelab/archimedean.hpp"
#include "conelab/enumerate.hpp"
#include "conelab/expsums.hpp"
#include "conelab/localdens.hpp"

namespace conelab::harness {

struct Options {
  int threads = 1;
  u64 seed = 0x5EED;
  i64 prime_cutoff = 100;
  int bootstrap = 200;
  double tolerance = 0.10;
  archimedean::QuadratureSpec quad = archimedean::QuadratureSpec::defaults();
  Budget budget = default_budget();
};

struct FitReport {
  std::vector<double> b_grid;
  std::vector<double> counts;
  std::string model;               // "BlogB_plus_B" or "linear_B"
  double coef_main = 0;            // leading coefficient
  double coef_secondary = 0;       // B coefficient in the BlogB model
  double se_main = 0;
  double se_secondary = 0;
  double predicted_constant = 0;   // 1/2 S I(w), or 1/4 I(w) omega for conics
  double predicted_error = 0;
  double relative_deviation = 0;
  double g_estimate = 0;           // fitted minus predicted (primitive fits)
  double g_se = 0;
  double coef_main_top_half = 0;   // refit on the top half of the grid
  double se_main_top_half = 0;
  double resid_rel_full = 0;       // max |residual| / prediction
  double resid_rel_top_half = 0;
  bool hypothesis_warning = false;
  std::string verdict;
};

FitReport fit_integral_counts(const TernaryForm& F, const archimedean::WeightFunction& w,
                              const std::optional<localdens::CongruenceCondition>& cond,
                              const std::vector<double>& b_grid, const Options& opts);

FitReport fit_primitive_counts(const TernaryForm& F, const archimedean::WeightFunction& w,
                               const std::optional<localdens::CongruenceCondition>& cond,
                               const std::vector<double>& b_grid, const Options& opts);

struct SlopeReport {
  Vec3i c{0, 0, 0};
  std::vector<double> x_grid;
  std::vector<cplx> partial_sums;
  cplx slope{0, 0};
  cplx slope_se{0, 0};
  cplx eta{0, 0};
  double eta_tail = 0;
  double deviation = 0;  // |slope - eta|
  double threshold = 0;  // pinned sqrt(X) error model
  bool pass = false;
};

SlopeReport slope_eta_check(const expsums::SumContext& ctx, const Vec3i& c,
                            const std::vector<i64>& x_grid,
                            const expsums::TruncationPolicy& policy, const Options& opts);

struct S0Report {
  std::vector<i64> x_grid;
  std::vector<double> sum_plain;
  std::vector<double> sum_over_q3;
  double s_hat = 0;               // singular series value used
  std::vector<double> cubic_rel_dev; // vs (1/6) L^4 S X^3
  bool cubic_dev_decreasing = false;
  double log_slope = 0;           // regression of sum_over_q3 on log X
  double log_slope_expected = 0;  // 1/2 S L^4
  double log_slope_rel_dev = 0;
  double intercept = 0;
  double intercept_expected = 0;  // 1/2 S * 2*gamma_Euler (L = 1 normalization)
};

S0Report s0_growth_check(const expsums::SumContext& ctx, const std::vector<i64>& x_grid,
                         const localdens::CongruenceCondition& cond, const Options& opts);

struct MuReport {
  i64 L = 1;
  std::vector<i64> d_grid;
  std::vector<double> plain_over_d_scaled; // |sum mu(d)| / D
  std::vector<double> inv_sum;             // sum mu(d)/d
  std::vector<double> log_sum;             // sum mu(d) log d / d
  double log_limit_expected = -1;          // -L/phi(L); equals -1 when L = 1
  std::vector<std::vector<double>> chi_sums; // per non-principal real character
  std::vector<double> l_one_inverse;         // targets 1/L(1,chi)
  bool plain_decreasing = false;
};

MuReport mu_limit_checks(i64 L, const std::vector<i64>& d_grid, const Options& opts);

struct ConicReport {
  FitReport fit;
  std::vector<double> per_gamma_g;   // per-unit-class secondary estimates
  std::vector<double> per_gamma_se;
  double g_sum = 0;
  double g_sum_se = 0;
};

ConicReport conic_count(const TernaryForm& F, const archimedean::WeightFunction& w, i64 L,
                        const Vec3i& gamma, const std::vector<double>& b_grid,
                        const Options& opts);

/// Direct projective count: canonical-sign primitive representatives whose
/// residue class lies in the unit orbit of gamma. Cross-check oracle for
/// conic_count.
double conic_count_projective(const TernaryForm& F, const archimedean::WeightFunction& w,
                              i64 L, const Vec3i& gamma, double B, int threads);

/// One enumeration pass over the largest box: primitive weighted counts for
/// every listed residue class mod L, one count vector per class.
std::vector<std::vector<double>> bucketed_primitive_counts(
    const TernaryForm& F, const archimedean::WeightFunction& w, i64 L,
    const std::vector<Vec3i>& classes, const std::vector<double>& b_grid, int threads);

struct ObstructionReport {
  std::vector<double> b_grid;
  std::vector<double> counts;       // primitive, exhaustive
  double main_constant = 0;         // 1/2 S I(w)
  double main_error = 0;
  double g_estimate = 0;
  std::string verdict;              // obstructed | consistent | inconclusive
};

ObstructionReport obstruction_probe(const TernaryForm& F, const archimedean::WeightFunction& w,
                                    const localdens::CongruenceCondition& cond,
                                    const std::vector<double>& b_grid, const Options& opts);

/// Fit an already-computed count grid against the B log B or linear law;
/// fills the coefficient/bootstrap/stability fields of FitReport (prediction
/// fields are left to the caller).
FitReport fit_counts_report(const std::vector<double>& b_grid,
                            const std::vector<double>& counts, bool blogb_model,
                            const Options& opts);

/// Weighted least squares y ~ X beta with weights 1/w_i, plus seeded residual
/// bootstrap standard errors. Exposed for reuse in tests.
struct WlsFit {
  std::vector<double> beta;
  std::vector<double> se;
  std::vector<double> residuals;
};

WlsFit wls_fit(const std::vector<std::vector<double>>& design, const std::vector<double>& y,
               const std::vector<double>& weights, int bootstrap, u64 seed);

} // namespace conelab::harness
