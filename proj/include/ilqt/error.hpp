#pragma once

#include <stdexcept>
#include <string>

namespace ilqt {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kConfig,
  kSingular,
  kDiverged,
  kIo,
};

// Every failure raised by the library carries one of the codes above so the
// C layer can map it onto a status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Error DimensionError(const std::string& what) {
  return Error(ErrorCode::kDimensionMismatch, what);
}

}  // namespace ilqt
