#include "khmc/model.hpp"

#include <cmath>

namespace khmc {

double hamiltonian(const TargetPotential& target, const KineticEnergySpec& kin,
                   const PhasePoint& s) {
  if (s.dim() != target.dim() || s.dim() != kin.dim())
    throw std::invalid_argument("hamiltonian: dimension mismatch");
  const double h = target.evaluate(s.x) + kin.evaluate(s.p);
  if (!std::isfinite(h)) throw std::runtime_error("hamiltonian: non-finite value");
  return h;
}

}  // namespace khmc
