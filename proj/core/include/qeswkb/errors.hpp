#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qeswkb {

enum class ErrorKind {
  Domain,            // non-finite or out-of-domain argument
  Seed,              // SUSY seed non-positive where evaluated
  Unsupported,       // operation not defined for this variant / parameters
  Shape,             // potential does not have the required shape
  NodePlacement,     // potential not finite on a mesh node
  Convergence,       // refinement or iteration stagnated
  SpectrumExhausted, // more states requested than bound states exist
  NoClassicalRegion, // energy below the potential minimum
  MultiWell,         // energy inside the tunnelling range
  Accuracy,          // quadrature could not meet its tolerance
  Search,            // bracketing / root search failed
  AboveAsymptote,    // energy at or above the dissociation limit
  Range,             // overflow of an analytic factor
  NodelessViolation, // Darboux seed has a node
  ModelDomain,       // fit model evaluated outside its domain
  Parse,             // malformed configuration text or flags
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace qeswkb
