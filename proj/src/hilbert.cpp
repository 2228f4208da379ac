#include "seqmeas/hilbert.hpp"

#include <cmath>
#include <string>

#include "seqmeas/rng.hpp"

namespace seqmeas {

namespace detail {

void require_same_dim(int a, int b, const char *context) {
    if (a != b) {
        throw DimensionMismatchError(std::string(context) + ": incompatible spaces (dim " +
                                     std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

} // namespace detail

StateVector::StateVector(Eigen::VectorXcd raw) : amps_(std::move(raw)) {
    if (amps_.size() < 1) {
        throw ValidationError("state vector requires dim >= 1");
    }
    const double norm = amps_.norm();
    if (norm <= kZeroTolerance) {
        throw NullVectorError("cannot normalize a null vector");
    }
    amps_ /= norm;
}

StateVector StateVector::from_amplitudes(const std::vector<Complex> &amps) {
    Eigen::VectorXcd raw(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        raw(static_cast<Eigen::Index>(i)) = amps[i];
    }
    return StateVector(std::move(raw));
}

Complex inner_product(const StateVector &u, const StateVector &v) {
    detail::require_same_dim(u.dim(), v.dim(), "inner_product");
    return u.amplitudes().dot(v.amplitudes());
}

Projection project_affirmative(const StateVector &psi, const StateVector &a) {
    detail::require_same_dim(psi.dim(), a.dim(), "project_affirmative");
    const Complex amp = a.amplitudes().dot(psi.amplitudes());
    const double p = std::min(std::norm(amp), 1.0);
    if (p <= kZeroTolerance) {
        return {0.0, std::nullopt};
    }
    return {p, phase_canonical(a)};
}

Projection project_null(const StateVector &psi, const StateVector &a) {
    detail::require_same_dim(psi.dim(), a.dim(), "project_null");
    const Complex amp = a.amplitudes().dot(psi.amplitudes());
    const double p = std::max(1.0 - std::norm(amp), 0.0);
    if (p <= kZeroTolerance) {
        return {0.0, std::nullopt};
    }
    Eigen::VectorXcd residual = psi.amplitudes() - amp * a.amplitudes();
    return {p, phase_canonical(StateVector(std::move(residual)))};
}

StateVector phase_canonical(const StateVector &v) {
    const Eigen::VectorXcd &amps = v.amplitudes();
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const double mag = std::abs(amps(i));
        if (mag > kPhaseAnchorMagnitude) {
            const Complex factor = std::conj(amps(i)) / mag;
            Eigen::VectorXcd rotated = amps * factor;
            rotated(i) = mag; // the anchor is real by construction; drop rounding residue
            return StateVector(std::move(rotated));
        }
    }
    // Unreachable for a normalized state: its largest amplitude is >= 1/sqrt(d).
    throw NullVectorError("phase_canonical: no significant amplitude");
}

bool phase_equal(const StateVector &u, const StateVector &v, double tol) {
    detail::require_same_dim(u.dim(), v.dim(), "phase_equal");
    return std::norm(u.amplitudes().dot(v.amplitudes())) >= 1.0 - tol;
}

HermitianOperator::HermitianOperator(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw ValidationError("Hermitian operator must be a square matrix of dim >= 1");
    }
    const double defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw ValidationError("matrix is not Hermitian (max |A - A†| = " + std::to_string(defect) + ")");
    }
}

StateVector evolve_unitary(const StateVector &psi, const HermitianOperator &h, double t) {
    detail::require_same_dim(psi.dim(), h.dim(), "evolve_unitary");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries());
    if (solver.info() != Eigen::Success) {
        throw ValidationError("eigendecomposition failed");
    }
    const Eigen::MatrixXcd &basis = solver.eigenvectors();
    Eigen::VectorXcd phases(psi.dim());
    for (int k = 0; k < psi.dim(); ++k) {
        phases(k) = std::exp(Complex(0.0, -solver.eigenvalues()(k) * t));
    }
    Eigen::VectorXcd evolved = basis * (phases.asDiagonal() * (basis.adjoint() * psi.amplitudes()));
    return StateVector(std::move(evolved));
}

StateVector random_state(int dim, std::mt19937_64 &rng) {
    if (dim < 1) {
        throw ValidationError("random_state requires dim >= 1");
    }
    Eigen::VectorXcd raw(dim);
    for (int i = 0; i < dim; ++i) {
        raw(i) = Complex(standard_normal(rng), standard_normal(rng));
    }
    return StateVector(std::move(raw));
}

StateVector random_state(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_state(dim, rng);
}

} // namespace seqmeas
