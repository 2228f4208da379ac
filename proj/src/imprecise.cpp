#include "seqmeas/imprecise.hpp"

#include <cmath>
#include <string>

namespace seqmeas {

namespace {

void require_alignment(const OrthonormalBasisMeasurement &basis, const ResolutionMatrix &y) {
    if (!basis.nondegenerate()) {
        throw ValidationError("imprecise measurement requires a nondegenerate basis");
    }
    if (basis.eigenvalues() != y.true_values()) {
        throw ValidationError("resolution-matrix true values do not match the basis eigenvalues");
    }
}

} // namespace

ResolutionMatrix::ResolutionMatrix(std::vector<double> true_values,
                                   std::vector<double> reported_values,
                                   Eigen::MatrixXcd amplitudes)
    : true_values_(std::move(true_values)), reported_values_(std::move(reported_values)),
      amplitudes_(std::move(amplitudes)) {
    if (true_values_.empty() || reported_values_.empty()) {
        throw ValidationError("resolution matrix requires at least one true and reported value");
    }
    if (amplitudes_.rows() != static_cast<Eigen::Index>(reported_values_.size()) ||
        amplitudes_.cols() != static_cast<Eigen::Index>(true_values_.size())) {
        throw ValidationError("resolution-matrix shape must be reported x true values");
    }
    for (Eigen::Index col = 0; col < amplitudes_.cols(); ++col) {
        const double column_norm_sq = amplitudes_.col(col).squaredNorm();
        if (std::abs(column_norm_sq - 1.0) > 1e-10) {
            throw ValidationError("resolution column for true value " +
                                  std::to_string(true_values_[static_cast<std::size_t>(col)]) +
                                  " is not normalized (sum of |Y|^2 = " +
                                  std::to_string(column_norm_sq) + ")");
        }
    }
}

ResolutionMatrix ResolutionMatrix::identity(const std::vector<double> &values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    return ResolutionMatrix(values, values, Eigen::MatrixXcd::Identity(n, n));
}

std::map<double, double> imprecise_distribution(const StateVector &psi,
                                                const OrthonormalBasisMeasurement &basis,
                                                const ResolutionMatrix &y) {
    detail::require_same_dim(psi.dim(), basis.dim(), "imprecise_distribution");
    require_alignment(basis, y);
    std::map<double, double> probabilities;
    for (std::size_t r = 0; r < y.reported_values().size(); ++r) {
        double p = 0.0;
        for (int a = 0; a < basis.dim(); ++a) {
            const Complex overlap = basis.eigenstates()[a].amplitudes().dot(psi.amplitudes());
            p += std::norm(y.amplitude(static_cast<int>(r), a)) * std::norm(overlap);
        }
        probabilities[y.reported_values()[r]] += p;
    }
    return probabilities;
}

StateVector imprecise_collapse(const StateVector &psi, const OrthonormalBasisMeasurement &basis,
                               const ResolutionMatrix &y, double reported) {
    detail::require_same_dim(psi.dim(), basis.dim(), "imprecise_collapse");
    require_alignment(basis, y);

    Eigen::VectorXcd post = Eigen::VectorXcd::Zero(psi.dim());
    double probability = 0.0;
    bool known = false;
    for (std::size_t r = 0; r < y.reported_values().size(); ++r) {
        if (y.reported_values()[r] != reported) {
            continue;
        }
        known = true;
        for (int a = 0; a < basis.dim(); ++a) {
            const Complex overlap = basis.eigenstates()[a].amplitudes().dot(psi.amplitudes());
            const Complex amp = y.amplitude(static_cast<int>(r), a);
            post += basis.eigenstates()[a].amplitudes() * (amp * overlap);
            probability += std::norm(amp) * std::norm(overlap);
        }
    }
    if (!known) {
        throw ImpossibleOutcomeError("value " + std::to_string(reported) +
                                     " is not among the resolution matrix's reported values");
    }
    if (probability <= kZeroTolerance) {
        throw ImpossibleOutcomeError("reported value " + std::to_string(reported) +
                                     " has zero probability for this state");
    }
    return StateVector(std::move(post));
}

ReducedOperator reduced_operator(const OrthonormalBasisMeasurement &basis,
                                 const ResolutionMatrix &y) {
    require_alignment(basis, y);
    const auto rows = static_cast<int>(y.reported_values().size());
    const int cols = basis.dim();

    // Entries must be exactly 0 or 1 and each row's ones must cover one
    // contiguous, non-overlapping range of true values.
    std::vector<int> owner(static_cast<std::size_t>(cols), -1);
    for (int r = 0; r < rows; ++r) {
        int first = -1;
        int last = -1;
        for (int a = 0; a < cols; ++a) {
            const Complex amp = y.amplitude(r, a);
            const bool is_zero = std::abs(amp) <= 1e-12;
            const bool is_one = std::abs(amp - Complex(1.0, 0.0)) <= 1e-12;
            if (!is_zero && !is_one) {
                throw ValidationError("reduced operator requires 0/1 resolution amplitudes");
            }
            if (is_one) {
                if (owner[static_cast<std::size_t>(a)] >= 0) {
                    throw ValidationError("reported-value ranges overlap on true value " +
                                          std::to_string(y.true_values()[static_cast<std::size_t>(a)]));
                }
                owner[static_cast<std::size_t>(a)] = r;
                if (first < 0) {
                    first = a;
                }
                last = a;
            }
        }
        if (first >= 0) {
            for (int a = first; a <= last; ++a) {
                if (owner[static_cast<std::size_t>(a)] != r) {
                    throw ValidationError("reported value " +
                                          std::to_string(y.reported_values()[static_cast<std::size_t>(r)]) +
                                          " does not cover a contiguous range of true values");
                }
            }
        }
    }

    ReducedOperator result;
    result.total = Eigen::MatrixXcd::Zero(cols, cols);
    result.projectors.reserve(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(cols, cols);
        for (int a = 0; a < cols; ++a) {
            if (std::abs(y.amplitude(r, a)) > 0.5) {
                const Eigen::VectorXcd &eig = basis.eigenstates()[a].amplitudes();
                projector += eig * eig.adjoint();
            }
        }
        result.total += projector;
        result.projectors.push_back(std::move(projector));
    }
    result.total_is_identity =
        (result.total - Eigen::MatrixXcd::Identity(cols, cols)).cwiseAbs().maxCoeff() <= 1e-10;
    return result;
}

double orthogonality_metric(const ResolutionMatrix &y) {
    const Eigen::Index cols = y.amplitudes().cols();
    if (cols < 2) {
        return 0.0;
    }
    double worst = 0.0;
    for (Eigen::Index a = 0; a < cols; ++a) {
        for (Eigen::Index b = a + 1; b < cols; ++b) {
            worst = std::max(worst, std::abs(y.amplitudes().col(a).dot(y.amplitudes().col(b))));
        }
    }
    return worst;
}

} // namespace seqmeas
