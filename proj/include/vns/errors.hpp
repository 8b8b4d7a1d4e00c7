#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-conforming connectivity (an edge shared by more than two triangles).
class TopologyError : public Error {
 public:
  using Error::Error;
};

class PeriodicityError : public Error {
 public:
  using Error::Error;
};

/// Requested degree/family/combination is not supported.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// Picard iteration failed to converge; carries the update-norm history.
class NonlinearDivergence : public Error {
 public:
  NonlinearDivergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Invalid configuration; key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vns
