#pragma once

#include <span>

#include "valsize/samplesize.hpp"

namespace valsize {

// Calibration, discrimination and net-benefit criteria for binary outcomes.

struct CalibrationAssumption {
  double intercept = 0.0;
  double slope = 1.0;
};

/// Per-observation means of the logistic information contributions.
struct FisherInfo {
  double i_alpha = 0.0;
  double i_ab = 0.0;
  double i_beta = 0.0;

  double determinant() const { return i_alpha * i_beta - i_ab * i_ab; }
};

/// SE of ln(O/E) such that exp(z*se) - exp(-z*se) equals the O/E interval
/// width around O/E = 1.
double oe_ciw_to_log_se(double ciw);

SampleSizeResult n_oe(double prevalence, double target_se_log_oe);

/// Means of a_i, LP_i * a_i and LP_i^2 * a_i where a_i is the logistic
/// variance at alpha + beta * LP_i. Chunked and compensated, so the result
/// does not depend on the number of worker threads.
FisherInfo fisher_info(std::span<const double> lp, CalibrationAssumption assumption = {});

SampleSizeResult n_calibration_slope(const FisherInfo& info, double target_se_slope,
                                     double prevalence);

/// Newcombe's distribution-free SE of the c-statistic.
double se_cstat(double c, double n, double prevalence);

/// Smallest n in [10, 1e7] with se_cstat(c, n, prevalence) <= target_se.
SampleSizeResult n_cstat(double c, double prevalence, double target_se);

struct SNBInputs {
  double threshold = 0.1;
  double prevalence = 0.5;
  double sensitivity = 0.5;
  double specificity = 0.5;

  // Harm-to-benefit weight rescaled by the odds of non-events.
  double weight() const;
  // Standardised net benefit at the anticipated sensitivity and specificity.
  double snb() const;
};

SampleSizeResult n_snb(const SNBInputs& inputs, double target_se_snb);

}  // namespace valsize
