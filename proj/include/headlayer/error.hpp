#ifndef HEADLAYER_ERROR_HPP
#define HEADLAYER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace headlayer {

enum class ErrorKind {
  // bracketed / conll parsing
  UnbalancedParens,
  EmptyConstituent,
  BadToken,
  BadColumnCount,
  BadTokenId,
  BadHeadValue,
  NonTreeStructure,
  EmptyTree,
  LengthMismatch,
  // rule tables
  BadDirection,
  DuplicateDefault,
  // classifier
  NoInstances,
  MissingGold,
  BadHeader,
  BadWeightLine,
  // transforms / conversion
  MissingHead,
  IntermediateNodePresent,
  RootIsIntermediate,
  InductionFailed,
  // evaluation
  NodeSetMismatch,
  TokenCountMismatch,
  // label maps
  BadLineKind,
  DuplicateEntry,
  UnmappedLabel,
  // sidecar head files
  BadSidecar,
  // filesystem
  IoError,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnbalancedParens: return "UnbalancedParens";
    case ErrorKind::EmptyConstituent: return "EmptyConstituent";
    case ErrorKind::BadToken: return "BadToken";
    case ErrorKind::BadColumnCount: return "BadColumnCount";
    case ErrorKind::BadTokenId: return "BadTokenId";
    case ErrorKind::BadHeadValue: return "BadHeadValue";
    case ErrorKind::NonTreeStructure: return "NonTreeStructure";
    case ErrorKind::EmptyTree: return "EmptyTree";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::BadDirection: return "BadDirection";
    case ErrorKind::DuplicateDefault: return "DuplicateDefault";
    case ErrorKind::NoInstances: return "NoInstances";
    case ErrorKind::MissingGold: return "MissingGold";
    case ErrorKind::BadHeader: return "BadHeader";
    case ErrorKind::BadWeightLine: return "BadWeightLine";
    case ErrorKind::MissingHead: return "MissingHead";
    case ErrorKind::IntermediateNodePresent: return "IntermediateNodePresent";
    case ErrorKind::RootIsIntermediate: return "RootIsIntermediate";
    case ErrorKind::InductionFailed: return "InductionFailed";
    case ErrorKind::NodeSetMismatch: return "NodeSetMismatch";
    case ErrorKind::TokenCountMismatch: return "TokenCountMismatch";
    case ErrorKind::BadLineKind: return "BadLineKind";
    case ErrorKind::DuplicateEntry: return "DuplicateEntry";
    case ErrorKind::UnmappedLabel: return "UnmappedLabel";
    case ErrorKind::BadSidecar: return "BadSidecar";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace headlayer

#endif
