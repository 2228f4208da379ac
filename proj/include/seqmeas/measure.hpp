#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqmeas/hilbert.hpp"

namespace seqmeas {

/// An ordered, labeled set of measurement states. States may be nonorthogonal
/// and the same physical state may appear under several labels; only the
/// labels must be unique.
class MeasurementDevice {
  public:
    struct Entry {
        std::string label;
        StateVector state;
    };

    explicit MeasurementDevice(std::vector<Entry> states);

    [[nodiscard]] int dim() const { return states_.front().state.dim(); }
    [[nodiscard]] int size() const { return static_cast<int>(states_.size()); }
    [[nodiscard]] const std::vector<Entry> &states() const { return states_; }
    [[nodiscard]] const Entry &state(int i) const { return states_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] bool has_label(const std::string &label) const;

  private:
    std::vector<Entry> states_;
};

enum class SampleMode { kExact, kSampled };

/// One aggregated leaf class of the permutation tree: the set of labels that
/// returned affirmative, the (phase-canonical) final state, and the total
/// probability of reaching this class over all permutations.
struct Outcome {
    std::vector<std::string> affirmative_labels; // sorted ascending
    StateVector final_state;
    double probability = 0.0;
};

struct DistributionMetadata {
    int dim = 0;
    int device_size = 0;
    std::vector<std::string> device_labels; // in device order
    SampleMode mode = SampleMode::kExact;
    std::uint64_t samples = 0;              // 0 in exact mode
    std::optional<std::uint64_t> seed;      // set in sampled mode
};

/// The complete set of outcomes for one device and initial state. Outcomes
/// are sorted by descending probability, ties broken by their label sets, and
/// no two outcomes share both the same label set and phase-equal final states.
class OutcomeDistribution {
  public:
    OutcomeDistribution(DistributionMetadata metadata, std::vector<Outcome> outcomes);

    [[nodiscard]] const std::vector<Outcome> &outcomes() const { return outcomes_; }
    [[nodiscard]] const DistributionMetadata &metadata() const { return metadata_; }
    [[nodiscard]] double total_probability() const;

    /// The outcome matching (labels, phase-class of state), if present.
    [[nodiscard]] const Outcome *find(const std::vector<std::string> &labels,
                                      const StateVector &final_state,
                                      double tol = kPhaseTolerance) const;

  private:
    DistributionMetadata metadata_;
    std::vector<Outcome> outcomes_;
};

struct MeasureOptions {
    /// Cap on the device size for exact enumeration (n! · 2^n paths). The
    /// default keeps exact mode around ten million paths; raise it knowingly.
    int max_exact_states = 8;
    /// Worker threads; 0 means hardware concurrency. Results are independent
    /// of this value beyond 1e-12 (chunked deterministic reduction).
    int threads = 0;
    /// Branches with probability at or below this are treated as impossible.
    double zero_tolerance = kZeroTolerance;
};

/// Exact sequential measurement: enumerates every permutation of the device
/// states, walks the affirmative/null fork tree for each, weights every
/// permutation by 1/n!, prunes forks below kZeroTolerance, and aggregates
/// leaves by (affirmative label set, phase class of the final state).
OutcomeDistribution measure_exact(const StateVector &psi, const MeasurementDevice &device,
                                  const MeasureOptions &options = {});

/// Stochastic realization of the same procedure: each sample draws a uniform
/// random permutation and walks a single path, choosing each fork with its
/// branch probability. Reports empirical frequencies; deterministic per seed.
OutcomeDistribution measure_sampled(const StateVector &psi, const MeasurementDevice &device,
                                    std::uint64_t samples, std::uint64_t seed,
                                    const MeasureOptions &options = {});

/// Total probability of outcomes whose affirmative set contains `label`.
double marginal_probability(const OutcomeDistribution &dist, const std::string &label);

/// One root-to-leaf path of the permutation tree.
struct PathRecord {
    std::vector<std::string> permutation; // label visit order
    std::vector<bool> decisions;          // true = affirmative fork
    double probability = 0.0;             // includes the 1/n! permutation weight
    StateVector final_state;
};

/// All surviving paths, permutations in lexicographic label order.
std::vector<PathRecord> enumerate_paths(const StateVector &psi, const MeasurementDevice &device,
                                        const MeasureOptions &options = {});

/// Half the summed absolute probability differences between two distributions,
/// matching outcomes by label set and phase-equal final states.
double total_variation_distance(const OutcomeDistribution &a, const OutcomeDistribution &b);

} // namespace seqmeas
