#include "gantt/error.hpp"

#include <fstream>
#include <sstream>

#include "gantt/io.hpp"

namespace gantt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kBadHost: return "BadHost";
    case ErrorCode::kBadTagIds: return "BadTagIds";
    case ErrorCode::kBadNodeId: return "BadNodeId";
    case ErrorCode::kBadNodeCount: return "BadNodeCount";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kGenerationBudgetExceeded: return "GenerationBudgetExceeded";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidSchedule: return "InvalidSchedule";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kZeroTags: return "ZeroTags";
    case ErrorCode::kLimitsExceeded: return "LimitsExceeded";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kIsolatedNode: return "IsolatedNode";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kAbort: return "Abort";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
  }
  return "Unknown";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path + "'");
}

}  // namespace gantt
