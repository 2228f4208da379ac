#include "seqmeas/born.hpp"

#include <cmath>
#include <set>
#include <string>

namespace seqmeas {

OrthonormalBasisMeasurement::OrthonormalBasisMeasurement(std::vector<StateVector> eigenstates,
                                                         std::vector<double> eigenvalues)
    : eigenstates_(std::move(eigenstates)), eigenvalues_(std::move(eigenvalues)) {
    if (eigenstates_.empty()) {
        throw ValidationError("measurement requires at least one eigenstate");
    }
    if (eigenstates_.size() != eigenvalues_.size()) {
        throw ValidationError("eigenstate and eigenvalue counts differ");
    }
    const int d = eigenstates_.front().dim();
    if (static_cast<int>(eigenstates_.size()) != d) {
        throw ValidationError("basis must span the space: expected " + std::to_string(d) +
                              " eigenstates, got " + std::to_string(eigenstates_.size()));
    }
    for (const auto &state : eigenstates_) {
        detail::require_same_dim(state.dim(), d, "OrthonormalBasisMeasurement");
    }
    for (std::size_t i = 0; i < eigenstates_.size(); ++i) {
        for (std::size_t j = i; j < eigenstates_.size(); ++j) {
            const Complex overlap = eigenstates_[i].amplitudes().dot(eigenstates_[j].amplitudes());
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > 1e-9) {
                throw ValidationError("eigenstates are not orthonormal (pair " + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            }
        }
    }
}

bool OrthonormalBasisMeasurement::nondegenerate() const {
    std::set<double> distinct(eigenvalues_.begin(), eigenvalues_.end());
    return distinct.size() == eigenvalues_.size();
}

std::map<double, double> born_distribution(const StateVector &psi,
                                           const OrthonormalBasisMeasurement &m) {
    detail::require_same_dim(psi.dim(), m.dim(), "born_distribution");
    std::map<double, double> probabilities;
    for (int i = 0; i < m.dim(); ++i) {
        const Complex amp = m.eigenstates()[i].amplitudes().dot(psi.amplitudes());
        probabilities[m.eigenvalues()[i]] += std::norm(amp);
    }
    return probabilities;
}

StateVector collapse_projective(const StateVector &psi, const OrthonormalBasisMeasurement &m,
                                double eigenvalue) {
    detail::require_same_dim(psi.dim(), m.dim(), "collapse_projective");
    Eigen::VectorXcd projected = Eigen::VectorXcd::Zero(psi.dim());
    double probability = 0.0;
    for (int i = 0; i < m.dim(); ++i) {
        if (m.eigenvalues()[i] != eigenvalue) {
            continue;
        }
        const Complex amp = m.eigenstates()[i].amplitudes().dot(psi.amplitudes());
        projected += amp * m.eigenstates()[i].amplitudes();
        probability += std::norm(amp);
    }
    if (probability <= kZeroTolerance) {
        throw ImpossibleOutcomeError("eigenvalue " + std::to_string(eigenvalue) +
                                     " has zero probability for this state");
    }
    return StateVector(std::move(projected));
}

} // namespace seqmeas
