#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stickknot {

enum class ErrorCode {
  ParallelCircles,
  AtPole,
  NotOnCircle,
  DegenerateDiagram,
  DisconnectedChain,
  MissingCrossingInfo,
  DegenerateProjection,
  InvalidPD,
  TooManyCrossings,
  Unidentified,
  FingerprintCollision,
  ParseError,
  UnknownKnot,
  InvalidParams,
  DegenerateArrangement,
  NoRoom,
  InsufficientData,
  PoleOnDiagram,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParallelCircles: return "ParallelCircles";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::NotOnCircle: return "NotOnCircle";
    case ErrorCode::DegenerateDiagram: return "DegenerateDiagram";
    case ErrorCode::DisconnectedChain: return "DisconnectedChain";
    case ErrorCode::MissingCrossingInfo: return "MissingCrossingInfo";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::InvalidPD: return "InvalidPD";
    case ErrorCode::TooManyCrossings: return "TooManyCrossings";
    case ErrorCode::Unidentified: return "Unidentified";
    case ErrorCode::FingerprintCollision: return "FingerprintCollision";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKnot: return "UnknownKnot";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DegenerateArrangement: return "DegenerateArrangement";
    case ErrorCode::NoRoom: return "NoRoom";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::PoleOnDiagram: return "PoleOnDiagram";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as an Error carrying a
/// machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stickknot
