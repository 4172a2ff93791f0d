#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gantt {

enum class ErrorCode {
  // instance_model
  kDisconnectedGraph,
  kSelfLoop,
  kDuplicateEdge,
  kBadHost,
  kBadTagIds,
  kBadNodeId,
  kBadNodeCount,
  kBadConfig,
  kGenerationBudgetExceeded,
  kParseError,
  // schedule_model
  kDimensionMismatch,
  kInvalidSchedule,
  kZeroBaseline,
  kZeroTags,
  // oracle / exact_solver
  kLimitsExceeded,
  kBudgetExhausted,
  // gnn_engine
  kShapeMismatch,
  kIsolatedNode,
  kFormatError,
  kChecksumMismatch,
  kIoError,
  // gnn_scheduler
  kAbort,
  kEmptyDataset,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gantt
