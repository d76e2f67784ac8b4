#pragma once

#include <stdexcept>
#include <string>

namespace bvssl {

enum class ErrorKind {
  invalid_precision,
  invariant_violation,
  data_corruption,
  numerical_singularity,
  graph_too_dense,
  coverage,
  domain,
  accuracy,
  collinearity,
  model_too_large,
  empty_chain,
  undefined_metric,
  incomplete_method,
  unbounded_belief,
  construction,
  ingestion,
  format,
  validation,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers branch
/// (the CLI maps input-side kinds to exit code 2).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for problems with user-supplied input rather than the run itself.
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::ingestion || kind_ == ErrorKind::format ||
           kind_ == ErrorKind::validation || kind_ == ErrorKind::unbounded_belief;
  }

 private:
  ErrorKind kind_;
};

}  // namespace bvssl
