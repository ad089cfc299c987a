#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

/// Base class for all library errors. Each error carries a stable
/// machine-readable code of the form "module.kind" next to the human
/// message, so command line tools can emit single-line diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

struct PoleHit : Error {
  explicit PoleHit(const std::string &what) : Error("material_model.pole_hit", what) {}
};

struct IllConditioned : Error {
  explicit IllConditioned(const std::string &what) : Error("material_model.ill_conditioned", what) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string &what) : Error("cli.validation_error", what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string &what) : Error("cli.schema_error", what) {}
};

struct QuadratureFailure : Error {
  explicit QuadratureFailure(const std::string &what) : Error("herglotz_measure.quadrature_failure", what) {}
};

struct NonConvergent : Error {
  explicit NonConvergent(const std::string &what) : Error("herglotz_measure.non_convergent", what) {}
};

struct TruncationError : Error {
  explicit TruncationError(const std::string &what) : Error("herglotz_measure.truncation_error", what) {}
};

/// Thrown by operations that require one of the structural assumptions;
/// the message names the violated flag.
struct AssumptionViolated : Error {
  explicit AssumptionViolated(const std::string &what) : Error("dispersion_solver.assumption_violated", what) {}
};

struct BranchSwapSuspected : Error {
  explicit BranchSwapSuspected(const std::string &what) : Error("dispersion_solver.branch_swap_suspected", what) {}
};

struct DerivativeVanishes : Error {
  explicit DerivativeVanishes(const std::string &what) : Error("dispersion_solver.derivative_vanishes", what) {}
};

struct RegressionUnstable : Error {
  explicit RegressionUnstable(const std::string &what) : Error("decay_harness.regression_unstable", what) {}
};

struct ClusterSeparationFailure : Error {
  explicit ClusterSeparationFailure(const std::string &what) : Error("modal_operator.cluster_separation_failure", what) {}
};

struct StepTooLarge : Error {
  explicit StepTooLarge(const std::string &what) : Error("modal_operator.step_too_large", what) {}
};

} // namespace dlab
