#pragma once

#include <stdexcept>
#include <string>

namespace rolling {

struct DomainExit : std::runtime_error {
  double exit_time;
  explicit DomainExit(const std::string& what, double t = 0.0)
      : std::runtime_error(what), exit_time(t) {}
};

struct MetricNotSpd : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotAnIsometry : std::runtime_error {
  double deviation;
  explicit NotAnIsometry(double dev)
      : std::runtime_error("frame coefficient matrix is not an isometry, |A^T A - I| = " +
                           std::to_string(dev)),
        deviation(dev) {}
};

struct ChartRadiusExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HypothesesViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rolling
