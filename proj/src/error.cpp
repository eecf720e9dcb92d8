#include "tpdo/error.hpp"

namespace tpdo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::size_mismatch: return "size_mismatch";
    case ErrorKind::grid_mismatch: return "grid_mismatch";
    case ErrorKind::differentiation_cap: return "differentiation_cap";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::domain: return "domain";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::cutoff: return "cutoff";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::singular: return "singular";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace tpdo
