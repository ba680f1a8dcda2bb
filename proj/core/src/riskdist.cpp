#include "valsize/riskdist.hpp"

#include <cmath>
#include <istream>
#include <string>

#include "valsize/error.hpp"
#include "valsize/measures.hpp"
#include "valsize/numeric.hpp"
#include "valsize/random.hpp"

namespace valsize {

namespace {

constexpr std::size_t kChunk = 1 << 16;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const RiskDistribution& dist) {
  std::visit(overloaded{
                 [](const BetaDist& d) {
                   require(d.a > 0.0 && d.b > 0.0 && std::isfinite(d.a) && std::isfinite(d.b),
                           "beta parameters must be positive");
                 },
                 [](const EmpiricalDist& d) {
                   require(!d.probs.empty(), "empirical risk distribution is empty");
                   for (std::size_t i = 0; i < d.probs.size(); ++i) {
                     require(d.probs[i] > 0.0 && d.probs[i] < 1.0,
                             "empirical probability at index " + std::to_string(i) +
                                 " must lie in (0, 1)");
                   }
                 },
             },
             dist);
}

double SimulatedCohort::prevalence() const {
  require(!outcomes.empty(), "cohort is empty");
  CompensatedSum s;
  for (int y : outcomes) s.add(y);
  return s.value() / static_cast<double>(outcomes.size());
}

SimulatedCohort sample_cohort(const RiskDistribution& dist, std::size_t m, std::uint64_t seed) {
  require(m >= 1, "cohort size must be at least 1");
  validate(dist);
  SimulatedCohort cohort;
  cohort.seed = seed;
  cohort.probs.resize(m);
  cohort.outcomes.resize(m);
  const std::size_t chunks = (m + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t k) {
    Rng rng(seed, k);
    const std::size_t begin = k * kChunk;
    const std::size_t end = std::min(m, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const double p = std::visit(overloaded{
                                      [&](const BetaDist& d) { return rng.beta(d.a, d.b); },
                                      [&](const EmpiricalDist& d) {
                                        return d.probs[rng.index(d.probs.size())];
                                      },
                                  },
                                  dist);
      cohort.probs[i] = p;
      cohort.outcomes[i] = rng.bernoulli(p) ? 1 : 0;
    }
  });
  return cohort;
}

PerformanceAnticipation anticipated_measures(const SimulatedCohort& cohort, double threshold) {
  const ConfusionMatrix cm = build_confusion(cohort.probs, cohort.outcomes, threshold);
  PerformanceAnticipation a;
  a.threshold = threshold;
  a.prevalence = cm.prevalence();
  a.accuracy = measure_value(cm, Measure::Accuracy);
  a.specificity = measure_value(cm, Measure::Specificity);
  a.sensitivity = measure_value(cm, Measure::Sensitivity);
  a.ppv = measure_value(cm, Measure::PPV);
  a.npv = measure_value(cm, Measure::NPV);
  a.f1 = measure_value(cm, Measure::F1);
  return a;
}

std::vector<double> lp_samples(std::span<const double> probs) {
  std::vector<double> lp(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    require(p > 0.0 && p < 1.0,
            "probability at index " + std::to_string(i) + " has no finite logit");
    lp[i] = logit(p);
  }
  return lp;
}

std::vector<double> read_probabilities(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Config, "line " + std::to_string(lineno) + ": not a number");
    }
    const auto rest = line.find_first_not_of(" \t\r", first + used);
    if (rest != std::string::npos) {
      throw Error(ErrorCode::Config,
                  "line " + std::to_string(lineno) + ": expected exactly one value");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace valsize
