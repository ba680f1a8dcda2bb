#include "valsize/anticipation.hpp"

#include <cmath>
#include <string>

#include "valsize/error.hpp"

namespace valsize {

void PerformanceAnticipation::validate() const {
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    throw Error(ErrorCode::Degenerate, "prevalence must lie in (0, 1)");
  }
  for (Measure m : kAllMeasures) {
    if (auto v = get(m)) {
      require(*v > 0.0 && *v < 1.0,
              "anticipated " + std::string(to_string(m)) + " must lie in the open interval (0, 1)");
    }
  }
  if (accuracy && sensitivity && specificity) {
    const double implied = *sensitivity * prevalence + *specificity * (1 - prevalence);
    if (std::abs(implied - *accuracy) > kAccuracyTolerance) {
      throw Error(ErrorCode::InvalidArgument,
                  "anticipated accuracy " + std::to_string(*accuracy) +
                      " is inconsistent with sensitivity, specificity and prevalence (implied " +
                      std::to_string(implied) + ")");
    }
  }
}

std::optional<double> PerformanceAnticipation::get(Measure m) const {
  switch (m) {
    case Measure::Accuracy: return accuracy;
    case Measure::Specificity: return specificity;
    case Measure::Sensitivity: return sensitivity;
    case Measure::PPV: return ppv;
    case Measure::NPV: return npv;
    case Measure::F1: return f1;
  }
  return std::nullopt;
}

double PerformanceAnticipation::value(Measure m) const {
  if (auto v = get(m)) return *v;
  throw Error(ErrorCode::InvalidArgument,
              "anticipated " + std::string(to_string(m)) + " is required but was not supplied");
}

PerformanceAnticipation PerformanceAnticipation::completed() const {
  PerformanceAnticipation out = *this;
  if (!sensitivity || !specificity) return out;
  const double sens = *sensitivity;
  const double spec = *specificity;
  const double phi = prevalence;
  const double tp = sens * phi;
  const double fn = (1 - sens) * phi;
  const double tn = spec * (1 - phi);
  const double fp = (1 - spec) * (1 - phi);
  if (!out.accuracy) out.accuracy = tp + tn;
  if (!out.ppv && tp + fp > 0) out.ppv = tp / (tp + fp);
  if (!out.npv && tn + fn > 0) out.npv = tn / (tn + fn);
  if (!out.f1 && tp > 0) out.f1 = 2 * tp / (2 * tp + fp + fn);
  return out;
}

}  // namespace valsize
