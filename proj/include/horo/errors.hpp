#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace horo {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A precondition or argument outside the operation's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

// A configured resource cap (table size, period bound, ...) was exceeded.
class ResourceError : public Error {
public:
  using Error::Error;
};

// Malformed or inconsistent configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A periodic-orbit obstruction blocks the cohomological equation.
class ObstructionError : public Error {
public:
  ObstructionError(const std::string& msg, int period, double worst)
      : Error(msg), period(period), worst(worst) {}
  int period = 0;
  double worst = 0.0;
};

// The orbit walk did not visit every cylinder within the budget.
class CoverageError : public Error {
public:
  CoverageError(const std::string& msg, std::vector<long> unhit, long total)
      : Error(msg), unhit(std::move(unhit)), total_unhit(total) {}
  std::vector<long> unhit;  // first few unhit cylinder indices
  long total_unhit = 0;
};

// A section fails its invariance requirement.
class InvarianceError : public Error {
public:
  InvarianceError(const std::string& msg, long worst_word, double residual)
      : Error(msg), worst_word(worst_word), residual(residual) {}
  long worst_word = -1;
  double residual = 0.0;
};

}  // namespace horo
