#pragma once

#include <stdexcept>
#include <string>

namespace tkcopula {

//! Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error
{
public:
  explicit DomainError(const std::string& what)
    : std::domain_error(what)
  {}
};

//! Raised when a numerical routine fails to reach its accuracy target.
class NumericalError : public std::runtime_error
{
public:
  explicit NumericalError(const std::string& what)
    : std::runtime_error(what)
  {}
};

namespace detail {

inline void
require(bool condition, const char* message)
{
  if (!condition)
    throw DomainError(message);
}

} // namespace detail

} // namespace tkcopula
