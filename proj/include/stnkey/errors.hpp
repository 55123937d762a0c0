#pragma once

#include <stdexcept>
#include <string>

namespace stnkey {

/// Parameters describe a run that cannot produce the requested quantity
/// (block sizes non-positive, key length not positive, ...).
struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// Authentication key pool too small to schedule even one refresh interval.
struct pool_exhausted_error : infeasible_error {
  explicit pool_exhausted_error(const std::string& what) : infeasible_error(what) {}
};

/// Exhaustive enumeration was requested for an instance above the guard size.
struct instance_too_large_error : std::runtime_error {
  explicit instance_too_large_error(const std::string& what) : std::runtime_error(what) {}
};

/// A desk-scale resource guard was violated (e.g. simulated signal count).
struct guard_error : std::runtime_error {
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// distill was called on a transcript that ended in an abort.
struct aborted_transcript_error : std::runtime_error {
  explicit aborted_transcript_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stnkey
