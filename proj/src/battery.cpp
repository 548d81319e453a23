#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ehpc/evaluation.hpp"

namespace ehpc {

StepOutcome step(double b_minus, double x, double u, double c) {
  if (!(x >= 0.0) || !(u >= 0.0)) {
    throw std::domain_error("arrival and consumption must be >= 0");
  }
  const double b = std::min(b_minus + x, c);
  if (u > b + kAdmissibilitySlack) {
    std::ostringstream msg;
    msg << "inadmissible consumption " << u << " with battery level " << b;
    throw AdmissibilityError(msg.str());
  }
  const double consumed = std::min(u, b);
  return {{b_minus, b}, b - consumed, consumed};
}

std::string to_string(EvaluationMethod method) {
  switch (method) {
    case EvaluationMethod::bernoulli_series:
      return "bernoulli_series";
    case EvaluationMethod::monte_carlo:
      return "monte_carlo";
    case EvaluationMethod::value_iteration:
      return "value_iteration";
  }
  return "unknown";
}

EvaluationMethod parse_method(const std::string& name) {
  if (name == "series" || name == "bernoulli_series") {
    return EvaluationMethod::bernoulli_series;
  }
  if (name == "mc" || name == "monte_carlo") return EvaluationMethod::monte_carlo;
  if (name == "vi" || name == "value_iteration") {
    return EvaluationMethod::value_iteration;
  }
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected series, mc or vi)");
}

}  // namespace ehpc
