#include "nethj/error.hpp"

namespace nethj {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DanglingEdgeEndpoint: return "DanglingEdgeEndpoint";
    case ErrorCode::VertexInsideEdge: return "VertexInsideEdge";
    case ErrorCode::IllegalEdgeIntersection: return "IllegalEdgeIntersection";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::ZeroLengthEdge: return "ZeroLengthEdge";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::NotOnNetwork: return "NotOnNetwork";
    case ErrorCode::ForeignPoint: return "ForeignPoint";
    case ErrorCode::DiscontinuousPath: return "DiscontinuousPath";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::DepthTooSmall: return "DepthTooSmall";
    case ErrorCode::CollinearCorners: return "CollinearCorners";
    case ErrorCode::NestingViolation: return "NestingViolation";
    case ErrorCode::StabilizationViolation: return "StabilizationViolation";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::AnchorNotOnLevel: return "AnchorNotOnLevel";
    case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::RadiusBelowResolution: return "RadiusBelowResolution";
    case ErrorCode::NoInteriorNodes: return "NoInteriorNodes";
    case ErrorCode::LevelNotGenerated: return "LevelNotGenerated";
    case ErrorCode::GridMismatch: return "GridMismatch";
  }
  return "UnknownError";
}

}  // namespace nethj
