#pragma once

#include <map>
#include <vector>

#include "seqmeas/born.hpp"
#include "seqmeas/hilbert.hpp"

namespace seqmeas {

/// Resolution amplitudes Y indexed (reported value ā, true eigenvalue a):
/// the amplitude for the apparatus to report ā when the true value is a.
/// Every column must be normalized, Σ_ā |Y_{āa}|² = 1 within 1e-10.
class ResolutionMatrix {
  public:
    ResolutionMatrix(std::vector<double> true_values, std::vector<double> reported_values,
                     Eigen::MatrixXcd amplitudes);

    /// Unit diagonal: the precise-measurement limit (report ā = a, always).
    static ResolutionMatrix identity(const std::vector<double> &values);

    [[nodiscard]] const std::vector<double> &true_values() const { return true_values_; }
    [[nodiscard]] const std::vector<double> &reported_values() const { return reported_values_; }
    [[nodiscard]] const Eigen::MatrixXcd &amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex amplitude(int reported_idx, int true_idx) const {
        return amplitudes_(reported_idx, true_idx);
    }

  private:
    std::vector<double> true_values_;
    std::vector<double> reported_values_;
    Eigen::MatrixXcd amplitudes_; // rows: reported values, columns: true values
};

/// P(ā) = Σ_a |Y_{āa}|² |⟨a|ψ⟩|². Requires a nondegenerate basis whose
/// eigenvalue sequence matches Y's true values exactly.
std::map<double, double> imprecise_distribution(const StateVector &psi,
                                                const OrthonormalBasisMeasurement &basis,
                                                const ResolutionMatrix &y);

/// Post-measurement state Σ_a |a⟩ Y_{āa} ⟨a|ψ⟩ / √P(ā) after reporting ā.
StateVector imprecise_collapse(const StateVector &psi, const OrthonormalBasisMeasurement &basis,
                               const ResolutionMatrix &y, double reported);

/// Coarse-grained observable assembled from 0/1 resolution amplitudes where
/// each reported value covers a contiguous range of eigenvalues. `total` is
/// the plain sum of the per-report projectors; with partition amplitudes that
/// sum carries no eigenvalue weighting and collapses to the identity, which
/// `total_is_identity` records. The per-report projectors are also exposed.
struct ReducedOperator {
    Eigen::MatrixXcd total;
    std::vector<Eigen::MatrixXcd> projectors; // one per reported value, row order
    bool total_is_identity = false;
};

ReducedOperator reduced_operator(const OrthonormalBasisMeasurement &basis,
                                 const ResolutionMatrix &y);

/// Largest pairwise column overlap max_{a≠a′} |Σ_ā conj(Y_{āa}) Y_{āa′}|.
/// 0 for perfectly distinguishable true values, 1 for indistinguishable ones;
/// defined as 0 when there are fewer than two true values.
double orthogonality_metric(const ResolutionMatrix &y);

} // namespace seqmeas
