#include "qeswkb/errors.hpp"

namespace qeswkb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Seed: return "seed";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::NodePlacement: return "node_placement";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::SpectrumExhausted: return "spectrum_exhausted";
    case ErrorKind::NoClassicalRegion: return "no_classical_region";
    case ErrorKind::MultiWell: return "multi_well";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::Search: return "search";
    case ErrorKind::AboveAsymptote: return "above_asymptote";
    case ErrorKind::Range: return "range";
    case ErrorKind::NodelessViolation: return "nodeless_violation";
    case ErrorKind::ModelDomain: return "model_domain";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace qeswkb
