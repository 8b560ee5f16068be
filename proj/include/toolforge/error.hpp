#pragma once

#include <stdexcept>
#include <string>

namespace toolforge {

enum class ErrorKind {
  io,
  parse,
  schema,
  empty_cloud,
  degenerate_geometry,
  insufficient_data,
  insufficient_parts,
  no_plane_found,
  not_a_solution,
  invalid_argument,
};

/// All recoverable failures are reported through this type; the CLI maps
/// ErrorKind to process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::schema: return "schema";
    case ErrorKind::empty_cloud: return "empty_cloud";
    case ErrorKind::degenerate_geometry: return "degenerate_geometry";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::insufficient_parts: return "insufficient_parts";
    case ErrorKind::no_plane_found: return "no_plane_found";
    case ErrorKind::not_a_solution: return "not_a_solution";
    case ErrorKind::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

}  // namespace toolforge
