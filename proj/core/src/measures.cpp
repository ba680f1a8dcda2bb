#include "valsize/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "valsize/anticipation.hpp"
#include "valsize/error.hpp"

namespace valsize {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

[[noreturn]] void undefined(Measure kind, const char* cells) {
  throw Error(ErrorCode::UndefinedMeasure,
              std::string(to_string(kind)) + " is undefined: " + cells + " is zero");
}

void require_rate(double v, const char* name) {
  require(v > 0.0 && v < 1.0, std::string(name) + " must lie in (0, 1)");
}

void require_prevalence(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) {
    throw Error(ErrorCode::Degenerate, "prevalence must lie in (0, 1)");
  }
}

}  // namespace

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Accuracy: return "accuracy";
    case Measure::Specificity: return "specificity";
    case Measure::Sensitivity: return "sensitivity";
    case Measure::PPV: return "ppv";
    case Measure::NPV: return "npv";
    case Measure::F1: return "f1";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (to_string(m) == name) return m;
  }
  if (name == "recall") return Measure::Sensitivity;
  if (name == "precision") return Measure::PPV;
  return std::nullopt;
}

std::string_view to_string(IntervalMethod m) {
  return m == IntervalMethod::Wald ? "wald" : "agresti_coull";
}

std::optional<IntervalMethod> parse_interval_method(std::string_view name) {
  if (name == "wald") return IntervalMethod::Wald;
  if (name == "agresti_coull" || name == "agresti-coull") return IntervalMethod::AgrestiCoull;
  return std::nullopt;
}

double ConfusionMatrix::prevalence() const {
  const double total = n();
  if (!(total > 0.0)) throw Error(ErrorCode::UndefinedMeasure, "confusion matrix is empty");
  return (tp + fn) / total;
}

ConfusionMatrix build_confusion(std::span<const double> probs,
                                std::span<const int> outcomes, double threshold) {
  require(probs.size() == outcomes.size(), "probabilities and outcomes differ in length");
  require(!probs.empty(), "no observations");
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    require(p >= 0.0 && p <= 1.0, "probability out of [0, 1] at index " + std::to_string(i));
    const int y = outcomes[i];
    require(y == 0 || y == 1, "outcome must be 0 or 1 at index " + std::to_string(i));
    if (p > threshold) {
      (y == 1 ? cm.tp : cm.fp) += 1.0;
    } else {
      (y == 1 ? cm.fn : cm.tn) += 1.0;
    }
  }
  return cm;
}

Proportion measure_proportion(const ConfusionMatrix& cm, Measure kind) {
  switch (kind) {
    case Measure::Accuracy: return {cm.tp + cm.tn, cm.n()};
    case Measure::Specificity: return {cm.tn, cm.tn + cm.fp};
    case Measure::Sensitivity: return {cm.tp, cm.tp + cm.fn};
    case Measure::PPV: return {cm.tp, cm.tp + cm.fp};
    case Measure::NPV: return {cm.tn, cm.tn + cm.fn};
    case Measure::F1: break;
  }
  throw Error(ErrorCode::InvalidArgument, "f1 is not a simple proportion");
}

double measure_value(const ConfusionMatrix& cm, Measure kind) {
  switch (kind) {
    case Measure::Accuracy:
      if (!(cm.n() > 0)) undefined(kind, "tp+fp+tn+fn");
      return (cm.tp + cm.tn) / cm.n();
    case Measure::Specificity:
      if (!(cm.tn + cm.fp > 0)) undefined(kind, "tn+fp");
      return cm.tn / (cm.tn + cm.fp);
    case Measure::Sensitivity:
      if (!(cm.tp + cm.fn > 0)) undefined(kind, "tp+fn");
      return cm.tp / (cm.tp + cm.fn);
    case Measure::PPV:
      if (!(cm.tp + cm.fp > 0)) undefined(kind, "tp+fp");
      return cm.tp / (cm.tp + cm.fp);
    case Measure::NPV:
      if (!(cm.tn + cm.fn > 0)) undefined(kind, "tn+fn");
      return cm.tn / (cm.tn + cm.fn);
    case Measure::F1: {
      const double denom = 2 * cm.tp + cm.fp + cm.fn;
      if (!(denom > 0)) undefined(kind, "2tp+fp+fn");
      return 2 * cm.tp / denom;
    }
  }
  return 0.0;
}

Interval wald_interval(double value, double se) {
  require(se >= 0.0, "standard error must be non-negative");
  const double half = kZ * se;
  return {value, clamp01(value - half), clamp01(value + half), 2 * half};
}

Interval agresti_coull_interval(double successes, double trials) {
  require(trials >= 1.0, "agresti-coull needs at least one trial");
  require(successes >= 0.0, "successes must be non-negative");
  require(successes <= trials, "successes exceed trials");
  const double center = (successes + 2.0) / (trials + 4.0);
  const double half = kZ * std::sqrt(center * (1.0 - center) / trials);
  return {center, clamp01(center - half), clamp01(center + half), 2 * half};
}

double cov_precision_recall(const ConfusionMatrix& cm) {
  const double pos_pred = cm.tp + cm.fp;
  const double pos = cm.tp + cm.fn;
  const double neg = cm.tn + cm.fp;
  if (!(pos_pred > 0) || !(pos > 0) || !(neg > 0)) {
    throw Error(ErrorCode::UndefinedMeasure, "cov(P, R) needs tp+fp, tp+fn and tn+fp > 0");
  }
  const double pp2 = pos_pred * pos_pred;
  return cm.fp * cm.tp * cm.fn / (pp2 * pos * pos) +
         cm.fp * cm.tp * cm.tn / (pp2 * neg * neg);
}

double cov_precision_recall(double precision, double recall, double specificity,
                            double prevalence, double n) {
  require_prevalence(prevalence);
  require(n >= 1.0, "n must be at least 1");
  require(precision >= 0.0 && precision <= 1.0, "precision must lie in [0, 1]");
  require(recall >= 0.0 && recall <= 1.0, "recall must lie in [0, 1]");
  require(specificity >= 0.0 && specificity <= 1.0, "specificity must lie in [0, 1]");
  const double pq = precision * (1.0 - precision);
  return (pq * (1.0 - recall) / prevalence + pq * specificity / (1.0 - prevalence)) / n;
}

double f1_se(double precision, double recall, double se_precision, double se_recall,
             double cov) {
  const double p = precision;
  const double r = recall;
  const double s = p + r;
  require(s > 0.0, "precision + recall must be positive");
  const double var = 4.0 *
                     (r * r * r * r * se_precision * se_precision +
                      2.0 * p * p * r * r * cov +
                      p * p * p * p * se_recall * se_recall) /
                     (s * s * s * s);
  return std::sqrt(std::max(var, 0.0));
}

MeasureEstimate estimate(const ConfusionMatrix& cm, Measure kind, IntervalMethod method) {
  MeasureEstimate e;
  e.kind = kind;
  e.value = measure_value(cm, kind);
  if (kind == Measure::F1) {
    const double p = measure_value(cm, Measure::PPV);
    const double r = measure_value(cm, Measure::Sensitivity);
    const double se_p = std::sqrt(p * (1 - p) / (cm.tp + cm.fp));
    const double se_r = std::sqrt(r * (1 - r) / (cm.tp + cm.fn));
    // The covariance needs tn+fp > 0; without negatives only the variance terms remain.
    const double cov = (cm.tn + cm.fp > 0) ? cov_precision_recall(cm) : 0.0;
    e.se = f1_se(p, r, se_p, se_r, cov);
    e.ci = wald_interval(e.value, e.se);
    e.method = IntervalMethod::Wald;
    return e;
  }
  const Proportion prop = measure_proportion(cm, kind);
  e.se = std::sqrt(e.value * (1 - e.value) / prop.trials);
  e.method = method;
  if (method == IntervalMethod::Wald || prop.trials < 1.0) {
    e.ci = wald_interval(e.value, e.se);
    e.method = IntervalMethod::Wald;
  } else {
    // Pseudo-observation cells may be slightly negative; AC needs 0 <= x <= n.
    e.ci = agresti_coull_interval(std::clamp(prop.successes, 0.0, prop.trials), prop.trials);
  }
  return e;
}

std::array<MeasureEstimate, 6> estimate_all(const ConfusionMatrix& cm, IntervalMethod method) {
  std::array<MeasureEstimate, 6> out;
  for (std::size_t i = 0; i < kAllMeasures.size(); ++i) {
    out[i] = estimate(cm, kAllMeasures[i], method);
  }
  return out;
}

double measure_se(Measure kind, const PerformanceAnticipation& a, double n) {
  require(n >= 1.0, "n must be at least 1");
  require_prevalence(a.prevalence);
  const double phi = a.prevalence;
  switch (kind) {
    case Measure::Accuracy: {
      const double acc = a.value(kind);
      require_rate(acc, "accuracy");
      return std::sqrt(acc * (1 - acc) / n);
    }
    case Measure::Specificity: {
      const double spec = a.value(kind);
      require_rate(spec, "specificity");
      return std::sqrt(spec * (1 - spec) / (n * (1 - phi)));
    }
    case Measure::Sensitivity: {
      const double sens = a.value(kind);
      require_rate(sens, "sensitivity");
      return std::sqrt(sens * (1 - sens) / (n * phi));
    }
    case Measure::PPV: {
      const double ppv = a.value(kind);
      const double sens = a.value(Measure::Sensitivity);
      require_rate(ppv, "ppv");
      require_rate(sens, "sensitivity");
      return std::sqrt(ppv * ppv * (1 - ppv) / (n * phi * sens));
    }
    case Measure::NPV: {
      const double npv = a.value(kind);
      const double sens = a.value(Measure::Sensitivity);
      const double spec = a.value(Measure::Specificity);
      require_rate(npv, "npv");
      require_rate(sens, "sensitivity");
      require_rate(spec, "specificity");
      return std::sqrt(npv * (1 - npv) / (n * (spec * (1 - phi) + phi * (1 - sens))));
    }
    case Measure::F1: {
      const double p = a.value(Measure::PPV);
      const double r = a.value(Measure::Sensitivity);
      const double spec = a.value(Measure::Specificity);
      const double se_p = measure_se(Measure::PPV, a, n);
      const double se_r = measure_se(Measure::Sensitivity, a, n);
      return f1_se(p, r, se_p, se_r, cov_precision_recall(p, r, spec, phi, n));
    }
  }
  return 0.0;
}

}  // namespace valsize
