#pragma once

#include <stdexcept>
#include <string>

namespace nethj {

enum class ErrorCode {
  // network validation
  DuplicateVertex,
  DanglingEdgeEndpoint,
  VertexInsideEdge,
  IllegalEdgeIntersection,
  Disconnected,
  ZeroLengthEdge,
  DuplicateEdge,
  // point addressing
  ParameterOutOfRange,
  NotOnNetwork,
  ForeignPoint,
  // paths
  DiscontinuousPath,
  NonMonotoneTime,
  // generators
  DepthTooSmall,
  CollinearCorners,
  NestingViolation,
  StabilizationViolation,
  EmptySequence,
  // io
  ParseError,
  IoError,
  // fields
  AnchorNotOnLevel,
  // solver
  NonMonotoneTimes,
  CFLViolation,
  NonPositiveStep,
  TimeOutOfRange,
  // slopes
  RadiusBelowResolution,
  NoInteriorNodes,
  // harness
  LevelNotGenerated,
  GridMismatch,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nethj
