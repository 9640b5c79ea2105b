#pragma once

#include <stdexcept>
#include <string>

namespace kfn {

/// Bad input: out-of-range parameters, dimension mismatches, unsupported
/// space pairs. Nothing has been computed when this is thrown.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation ran but could not deliver what its contract promises
/// (tolerance not certified, invariant violated, certificate refused).
class CheckFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void fail_domain(const std::string& what) { throw DomainError(what); }
[[noreturn]] inline void fail_check(const std::string& what) { throw CheckFailure(what); }
}  // namespace detail

}  // namespace kfn
