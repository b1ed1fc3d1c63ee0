#pragma once

#include <stdexcept>
#include <string>

namespace hkc {

/// Query outside a trajectory's retained time window, or a delay bracket
/// that reaches past the stored history.
class OutOfWindowError : public std::runtime_error {
public:
    explicit OutOfWindowError(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke an API contract (Lipschitz append, slope clamp,
/// hypothesis s < c, ...). Signals a bug upstream, not bad data.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace hkc
