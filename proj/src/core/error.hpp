#pragma once

#include <stdexcept>
#include <string>

namespace bitorus {

// Error taxonomy shared by the C++ core and the C API status codes.
enum class Errc {
  invalid_argument,  // malformed input (bad order, bad grid, bad JSON shape)
  domain,            // evaluation outside the admissible domain (torus band, poles)
  not_in_px,         // measure outside the nonzero-mean class the pipeline needs
  window,            // window selection or denominator-margin failure
  no_convergence,    // Newton continuation failed to converge
  diagnostics,       // cross-engine consistency check failed beyond tolerance
  io,                // file or serialization failure
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace bitorus
