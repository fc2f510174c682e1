#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "pwlcycles/cycle_solver.hpp"
#include "pwlcycles/errors.hpp"
#include "pwlcycles/plrnn.hpp"

namespace pwl {

/// A malformed system document. line() is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(int line, std::string field, const std::string& what)
      : Error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// System documents are JSON objects with a "kind" tag:
///
///   {"kind": "canonical", "dim": m, "a": .., "d": .., "mu_hat": ..,
///    "b": [m], "e": [m], "A": [[m] x m], "h_Y": [m]}
///
///   {"kind": "plrnn", "dim": M, "A_diag": [M], "W": [[M] x M], "h": [M],
///    "relaxed_diagonal": false}
///
/// "dim" is the block dimension m for canonical systems and the state
/// dimension M for PLRNNs.
using SystemConfig = std::variant<CanonicalSystem, PLRNNSystem>;

SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::filesystem::path& path);

/// Emits a document parse_config reads back to an identical system.
std::string write_config(const SystemConfig& cfg);
void save_config(const std::filesystem::path& path, const SystemConfig& cfg);

}  // namespace pwl
