#ifndef CHARP_ERROR_HPP
#define CHARP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace charp {

// Error kinds surfaced through the CLI (exit code 2 for input/validation
// problems, exit 1 for a failed verification).
enum class ErrKind {
    BadInput,
    NotDivisible,
    NotAUnit,
    LogViolation,
    NotLiftPair,
    NotNilpotent,
    NotCommuting,
    ExponentTooLarge,
    FactorialNotInvertible,
    NotNilpotentEnough,
    CocycleFailure,
    HiggsMismatch,
    ShapeMismatch,
    NotAFrobeniusLift,
    LogShapeViolation,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrKind kind() const { return kind_; }

  private:
    ErrKind kind_;
};

inline const char* errkind_name(ErrKind k) {
    switch (k) {
        case ErrKind::BadInput: return "BadInput";
        case ErrKind::NotDivisible: return "NotDivisible";
        case ErrKind::NotAUnit: return "NotAUnit";
        case ErrKind::LogViolation: return "LogViolation";
        case ErrKind::NotLiftPair: return "NotLiftPair";
        case ErrKind::NotNilpotent: return "NotNilpotent";
        case ErrKind::NotCommuting: return "NotCommuting";
        case ErrKind::ExponentTooLarge: return "ExponentTooLarge";
        case ErrKind::FactorialNotInvertible: return "FactorialNotInvertible";
        case ErrKind::NotNilpotentEnough: return "NotNilpotentEnough";
        case ErrKind::CocycleFailure: return "CocycleFailure";
        case ErrKind::HiggsMismatch: return "HiggsMismatch";
        case ErrKind::ShapeMismatch: return "ShapeMismatch";
        case ErrKind::NotAFrobeniusLift: return "NotAFrobeniusLift";
        case ErrKind::LogShapeViolation: return "LogShapeViolation";
        case ErrKind::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace charp

#endif
