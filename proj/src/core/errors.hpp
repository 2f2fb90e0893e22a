#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pevmzi {

// Error taxonomy mirrors the CLI exit codes: config/usage problems are
// recoverable user errors, physics errors mean the requested evolution is
// not representable (annihilation, truncation beyond tolerance).
enum class ErrorKind { Config, Physics, Io, Invalid };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(std::string m) : Error(ErrorKind::Config, std::move(m)) {}
};

struct PhysicsError : Error {
  explicit PhysicsError(std::string m) : Error(ErrorKind::Physics, std::move(m)) {}
};

struct IoError : Error {
  explicit IoError(std::string m) : Error(ErrorKind::Io, std::move(m)) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(std::string m) : Error(ErrorKind::Invalid, std::move(m)) {}
};

} // namespace pevmzi
