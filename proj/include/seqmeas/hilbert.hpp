#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "seqmeas/errors.hpp"

namespace seqmeas {

using Complex = std::complex<double>;

/// Norms below this are treated as exact zeros (branch pruning, null vectors).
inline constexpr double kZeroTolerance = 1e-12;

/// Default tolerance for equality up to a global phase.
inline constexpr double kPhaseTolerance = 1e-9;

/// Amplitudes below this magnitude are skipped when fixing the global phase.
inline constexpr double kPhaseAnchorMagnitude = 1e-9;

/// A normalized state in a finite-dimensional complex Hilbert space.
///
/// Construction normalizes the supplied amplitudes; a vector with norm below
/// kZeroTolerance is rejected with NullVectorError. Values are immutable after
/// construction and safe to share across threads.
class StateVector {
  public:
    /// Normalizes `raw` and takes ownership of it.
    explicit StateVector(Eigen::VectorXcd raw);

    static StateVector from_amplitudes(const std::vector<Complex> &amps);

    [[nodiscard]] int dim() const { return static_cast<int>(amps_.size()); }
    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const { return amps_; }
    [[nodiscard]] Complex amplitude(int i) const { return amps_(i); }

  private:
    Eigen::VectorXcd amps_;
};

/// ⟨u|v⟩, conjugate-linear in the first argument.
Complex inner_product(const StateVector &u, const StateVector &v);

/// Result of projecting a state onto a measurement state or its complement.
/// `collapsed` is empty when the branch has (near-)zero probability.
struct Projection {
    double probability = 0.0;
    std::optional<StateVector> collapsed;
};

/// Affirmative fork: probability |⟨a|ψ⟩|², post-state a (phase-canonical).
Projection project_affirmative(const StateVector &psi, const StateVector &a);

/// Null fork: probability 1 − |⟨a|ψ⟩|², post-state ∝ (I − |a⟩⟨a|)ψ.
Projection project_null(const StateVector &psi, const StateVector &a);

/// Rotates the global phase so the first amplitude with magnitude above
/// kPhaseAnchorMagnitude is real and positive.
StateVector phase_canonical(const StateVector &v);

/// True iff |⟨u|v⟩|² ≥ 1 − tol, i.e. u and v agree up to a global phase.
bool phase_equal(const StateVector &u, const StateVector &v, double tol = kPhaseTolerance);

/// A Hermitian matrix; rejects inputs whose anti-Hermitian part exceeds 1e-10.
class HermitianOperator {
  public:
    explicit HermitianOperator(Eigen::MatrixXcd entries);

    [[nodiscard]] int dim() const { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const Eigen::MatrixXcd &entries() const { return entries_; }

  private:
    Eigen::MatrixXcd entries_;
};

/// exp(−iHt)ψ via eigendecomposition of H, in units where ħ = 1.
StateVector evolve_unitary(const StateVector &psi, const HermitianOperator &h, double t);

/// Haar-uniform random state: normalized vector of iid standard complex
/// Gaussian amplitudes. Deterministic for a given engine state.
StateVector random_state(int dim, std::mt19937_64 &rng);

/// Convenience overload seeding a fresh engine.
StateVector random_state(int dim, std::uint64_t seed);

namespace detail {
/// Throws DimensionMismatchError unless both dimensions agree.
void require_same_dim(int a, int b, const char *context);
} // namespace detail

} // namespace seqmeas
