#pragma once

#include <stdexcept>
#include <string>

namespace transitopt {

/// Invalid argument, bad configuration, malformed file contents.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Data ingestion failure; the message names the offending record.
class IngestError : public InputError {
 public:
  explicit IngestError(const std::string& what) : InputError(what) {}
};

/// Ranking cannot proceed with the given alternatives matrix.
class RankingError : public InputError {
 public:
  explicit RankingError(const std::string& what) : InputError(what) {}
};

/// Numerical procedure failed (eigen decomposition, undefined statistic).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace transitopt
