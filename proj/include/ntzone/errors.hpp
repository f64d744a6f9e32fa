#pragma once

#include <stdexcept>
#include <string>

namespace ntzone {

// Failure taxonomy. Kind decides the CLI exit code: config/syntax problems
// exit 2, input validation 3, numerical failures 4.
enum class ErrKind {
    bad_input,         // argument outside its domain (z <= 0, n < 3, ...)
    dimension,         // mismatched vector/matrix dimensions
    infinite_value,    // problem ill-posed: value function is +inf (c_m <= 0)
    degenerate_region, // alpha (or A) singular: no-trade region degenerates
    no_convergence,    // iteration failed to converge
    residual_too_large,// solution found but verification residual above gate
    insolvent,         // wealth cannot cover the fixed cost
    parse,             // config file malformed
};

class Error : public std::runtime_error {
  public:
    Error(ErrKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrKind kind() const { return kind_; }

  private:
    ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& msg) { throw Error(kind, msg); }

inline const char* errkind_name(ErrKind k) {
    switch (k) {
        case ErrKind::bad_input: return "BadInput";
        case ErrKind::dimension: return "DimensionError";
        case ErrKind::infinite_value: return "InfiniteValue";
        case ErrKind::degenerate_region: return "DegenerateRegion";
        case ErrKind::no_convergence: return "NoConvergence";
        case ErrKind::residual_too_large: return "ResidualTooLarge";
        case ErrKind::insolvent: return "Insolvent";
        case ErrKind::parse: return "ParseError";
    }
    return "Error";
}

} // namespace ntzone
