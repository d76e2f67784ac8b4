#include "bvssl/error.hpp"

namespace bvssl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_precision: return "invalid precision";
    case ErrorKind::invariant_violation: return "invariant violation";
    case ErrorKind::data_corruption: return "data corruption";
    case ErrorKind::numerical_singularity: return "numerical singularity";
    case ErrorKind::graph_too_dense: return "graph too dense";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::domain: return "domain";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::collinearity: return "collinearity";
    case ErrorKind::model_too_large: return "model too large";
    case ErrorKind::empty_chain: return "empty chain";
    case ErrorKind::undefined_metric: return "undefined metric";
    case ErrorKind::incomplete_method: return "incomplete method";
    case ErrorKind::unbounded_belief: return "unbounded belief";
    case ErrorKind::construction: return "construction";
    case ErrorKind::ingestion: return "ingestion";
    case ErrorKind::format: return "format";
    case ErrorKind::validation: return "validation";
  }
  return "unknown";
}

}  // namespace bvssl
