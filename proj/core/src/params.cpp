#include "ptkr/params.hpp"

#include <cmath>

#include "ptkr/errors.hpp"

namespace ptkr {

void check_lattice(const SimParams& p) {
  if (!std::isfinite(p.kick_strength)) throw ValidationError("kick_strength", "must be finite");
  if (!std::isfinite(p.lambda)) throw ValidationError("lambda", "must be finite");
  if (!std::isfinite(p.epsilon)) throw ValidationError("epsilon", "must be finite");
  if (!(p.hbar_eff > 0.0) || !std::isfinite(p.hbar_eff)) {
    throw ValidationError("hbar_eff", "must be positive and finite");
  }
  if (p.lattice_size < 8 || p.lattice_size % 2 != 0) {
    throw ValidationError("lattice_size", "must be even and >= 8");
  }
  if (p.n_kicks < 0) throw ValidationError("n_kicks", "must be nonnegative");
}

void validate(const SimParams& p) {
  check_lattice(p);
  if (p.lambda < 0.0) {
    throw ValidationError("lambda", "must be >= 0 (negative lambda is the parity image of +lambda)");
  }
  if (p.epsilon < 0.0) throw ValidationError("epsilon", "must be >= 0");
  if (p.n_kicks < 1) throw ValidationError("n_kicks", "must be >= 1");
}

}  // namespace ptkr
