#pragma once

#include <stdexcept>
#include <string>

namespace evascore {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Transport-level failure talking to a model endpoint; retried before it
// reaches the caller.
struct NetworkError : Error {
  using Error::Error;
};

// HTTP 429 from the endpoint. A NetworkError for retry purposes, kept as its
// own type so callers can tell the two apart after retries are exhausted.
struct RateLimited : NetworkError {
  using NetworkError::NetworkError;
};

// Replay backend has no recorded response for a request key.
struct FixtureMiss : Error {
  using Error::Error;
};

// Malformed input: model output that cannot be parsed, bad JSON lines, etc.
struct ParseError : Error {
  using Error::Error;
};

struct EmptyInput : Error {
  using Error::Error;
};

// Retrieval was asked to rank against a pool with no facts.
struct EmptyPool : Error {
  using Error::Error;
};

// Correlation input with fewer than two points or zero variance.
struct DegenerateInput : Error {
  using Error::Error;
};

// Every row of a score table was excluded.
struct NoValidRows : Error {
  using Error::Error;
};

}  // namespace evascore
