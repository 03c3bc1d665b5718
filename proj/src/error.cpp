#include "rbbr/error.hpp"

namespace rbbr {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Drift: return "drift error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Solver: return "solver error";
    case ErrorKind::Step: return "step error";
  }
  return "error";
}

}  // namespace rbbr
