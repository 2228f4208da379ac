#pragma once

#include <map>
#include <vector>

#include "seqmeas/hilbert.hpp"

namespace seqmeas {

/// A projective measurement specified by a complete orthonormal eigenbasis
/// with a real eigenvalue per eigenstate. Repeated eigenvalues describe a
/// degenerate eigenspace; grouping uses exact equality of the supplied values
/// (eigenvalues act as labels here, not computed spectra).
class OrthonormalBasisMeasurement {
  public:
    OrthonormalBasisMeasurement(std::vector<StateVector> eigenstates,
                                std::vector<double> eigenvalues);

    [[nodiscard]] int dim() const { return static_cast<int>(eigenstates_.size()); }
    [[nodiscard]] const std::vector<StateVector> &eigenstates() const { return eigenstates_; }
    [[nodiscard]] const std::vector<double> &eigenvalues() const { return eigenvalues_; }
    [[nodiscard]] bool nondegenerate() const;

  private:
    std::vector<StateVector> eigenstates_;
    std::vector<double> eigenvalues_;
};

/// Born rule: P(ω) = Σ over eigenstates with eigenvalue ω of |⟨ω_i|ψ⟩|².
std::map<double, double> born_distribution(const StateVector &psi,
                                           const OrthonormalBasisMeasurement &m);

/// Projective collapse onto the eigenspace of `eigenvalue`, normalized.
/// Throws ImpossibleOutcomeError when that eigenvalue has (near-)zero
/// probability or does not appear in the measurement.
StateVector collapse_projective(const StateVector &psi, const OrthonormalBasisMeasurement &m,
                                double eigenvalue);

} // namespace seqmeas
