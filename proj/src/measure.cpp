#include "seqmeas/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "seqmeas/rng.hpp"

namespace seqmeas {

namespace {

constexpr std::uint64_t kPermChunk = 512;     // permutations per exact-mode work unit
constexpr std::uint64_t kSampleBlock = 65536; // samples per sampled-mode work unit
constexpr double kCellSize = 5e-7;            // aggregation hash grid spacing
constexpr double kMergeWindow = 1e-4;         // consolidation scan window on Re(amp0)

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) {
        f *= static_cast<std::uint64_t>(k);
    }
    return f;
}

/// Device-state indices ordered by label; permutations are enumerated
/// lexicographically over this base so path traces are reproducible.
std::vector<int> label_sorted_indices(const MeasurementDevice &device) {
    std::vector<int> indices(static_cast<std::size_t>(device.size()));
    std::iota(indices.begin(), indices.end(), 0);
    std::sort(indices.begin(), indices.end(),
              [&](int a, int b) { return device.state(a).label < device.state(b).label; });
    return indices;
}

/// rank-th lexicographic permutation of {0, ..., n-1} (factoradic unranking).
std::vector<int> unrank_permutation(int n, std::uint64_t rank) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = n; i >= 1; --i) {
        const std::uint64_t f = factorial(i - 1);
        const auto j = static_cast<std::ptrdiff_t>(rank / f);
        rank %= f;
        out.push_back(pool[static_cast<std::size_t>(j)]);
        pool.erase(pool.begin() + j);
    }
    return out;
}

double overlap_sq(const Eigen::VectorXcd &u, const Eigen::VectorXcd &v) {
    return std::norm(u.dot(v));
}

/// In-place global-phase canonicalization of a normalized raw vector.
void canonicalize_raw(Eigen::VectorXcd &v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > kPhaseAnchorMagnitude) {
            v *= std::conj(v(i)) / mag;
            v(i) = mag; // the anchor is real by construction; drop rounding residue
            return;
        }
    }
}

/// Accumulates leaves into (affirmative mask, phase class) cells. Insertion
/// is hash-accelerated on a quantized grid; consolidate() then merges any
/// phase-equal stragglers that landed on different grid cells, so the final
/// entry set never holds two phase-equal states under the same mask.
class OutcomeAggregator {
  public:
    struct Entry {
        std::uint64_t mask = 0;
        Eigen::VectorXcd state; // phase-canonical
        double weight = 0.0;
        bool alive = true;
    };

    explicit OutcomeAggregator(double phase_tol) : tol_(phase_tol) {}

    void add(std::uint64_t mask, const Eigen::VectorXcd &canonical, double weight) {
        auto &bucket = index_[cell_key(mask, canonical)];
        for (const std::size_t idx : bucket) {
            Entry &entry = entries_[idx];
            if (entry.mask == mask && overlap_sq(entry.state, canonical) >= 1.0 - tol_) {
                entry.weight += weight;
                return;
            }
        }
        bucket.push_back(entries_.size());
        entries_.push_back(Entry{mask, canonical, weight, true});
    }

    void merge(const OutcomeAggregator &other) {
        for (const Entry &entry : other.entries_) {
            if (entry.alive) {
                add(entry.mask, entry.state, entry.weight);
            }
        }
    }

    /// Merges phase-equal same-mask entries across grid cells, always into the
    /// earlier-inserted entry, then drops the absorbed ones. Scan order is
    /// fixed by (Re amp0, insertion index), so the result is deterministic.
    std::vector<Entry> finish() {
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> groups;
        std::vector<std::uint64_t> group_order;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            auto [it, inserted] = groups.try_emplace(entries_[i].mask);
            if (inserted) {
                group_order.push_back(entries_[i].mask);
            }
            it->second.push_back(i);
        }
        for (const std::uint64_t mask : group_order) {
            auto &group = groups[mask];
            if (group.size() < 2) {
                continue;
            }
            auto re0 = [&](std::size_t idx) { return entries_[idx].state(0).real(); };
            std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
                const double ra = re0(a);
                const double rb = re0(b);
                return ra != rb ? ra < rb : a < b;
            });
            for (std::size_t i = 0; i < group.size(); ++i) {
                if (!entries_[group[i]].alive) {
                    continue;
                }
                for (std::size_t j = i + 1; j < group.size(); ++j) {
                    if (re0(group[j]) - re0(group[i]) > kMergeWindow) {
                        break;
                    }
                    if (!entries_[group[j]].alive) {
                        continue;
                    }
                    if (overlap_sq(entries_[group[i]].state, entries_[group[j]].state) >=
                        1.0 - tol_) {
                        const std::size_t dst = std::min(group[i], group[j]);
                        const std::size_t src = std::max(group[i], group[j]);
                        entries_[dst].weight += entries_[src].weight;
                        entries_[src].alive = false;
                        if (src == group[i]) {
                            break;
                        }
                    }
                }
            }
        }
        std::vector<Entry> out;
        out.reserve(entries_.size());
        for (Entry &entry : entries_) {
            if (entry.alive) {
                out.push_back(std::move(entry));
            }
        }
        return out;
    }

  private:
    std::uint64_t cell_key(std::uint64_t mask, const Eigen::VectorXcd &state) const {
        std::uint64_t h = 1469598103934665603ULL ^ mask;
        auto mix = [&h](std::uint64_t w) {
            h ^= w;
            h *= 1099511628211ULL;
        };
        for (Eigen::Index i = 0; i < state.size(); ++i) {
            mix(static_cast<std::uint64_t>(std::llround(state(i).real() / kCellSize)));
            mix(static_cast<std::uint64_t>(std::llround(state(i).imag() / kCellSize)));
        }
        return h;
    }

    double tol_;
    std::vector<Entry> entries_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

/// Depth-first fork walk for one permutation; affirmative fork first, then
/// null, so leaf emission order (and thus aggregation order) is fixed.
class ExactWalker {
  public:
    ExactWalker(const std::vector<Eigen::VectorXcd> &device_states, double leaf_weight,
                double zero_tol, OutcomeAggregator &agg)
        : device_states_(device_states), leaf_weight_(leaf_weight), zero_tol_(zero_tol), agg_(agg),
          scratch_(device_states.size(), Eigen::VectorXcd(device_states.front().size())),
          leaf_buffer_(device_states.front().size()) {}

    void run(const Eigen::VectorXcd &psi, const std::vector<int> &permutation) {
        permutation_ = &permutation;
        walk(psi, 0, 1.0, 0);
    }

  private:
    void walk(const Eigen::VectorXcd &state, std::size_t depth, double probability,
              std::uint64_t mask) {
        if (depth == permutation_->size()) {
            leaf_buffer_ = state;
            canonicalize_raw(leaf_buffer_);
            agg_.add(mask, leaf_buffer_, probability * leaf_weight_);
            return;
        }
        const int s = (*permutation_)[depth];
        const Eigen::VectorXcd &a = device_states_[static_cast<std::size_t>(s)];
        const Complex amp = a.dot(state);
        const double p_affirm = std::min(std::norm(amp), 1.0);
        const double p_null = std::max(1.0 - p_affirm, 0.0);
        if (p_affirm > zero_tol_) {
            walk(a, depth + 1, probability * p_affirm, mask | (1ULL << s));
        }
        if (p_null > zero_tol_) {
            Eigen::VectorXcd &residual = scratch_[depth];
            residual = state - amp * a;
            residual /= residual.norm();
            walk(residual, depth + 1, probability * p_null, mask);
        }
    }

    const std::vector<Eigen::VectorXcd> &device_states_;
    double leaf_weight_;
    double zero_tol_;
    OutcomeAggregator &agg_;
    const std::vector<int> *permutation_ = nullptr;
    std::vector<Eigen::VectorXcd> scratch_;
    Eigen::VectorXcd leaf_buffer_;
};

/// Runs `work(chunk_index, local_aggregator)` over all chunks, possibly in
/// parallel, and merges the per-chunk aggregates strictly in chunk order.
/// Chunk boundaries are fixed constants, so results are independent of the
/// thread count. Completed chunks are folded in as soon as their turn comes,
/// which bounds the number of unmerged aggregates held in memory.
template <typename ChunkFn>
OutcomeAggregator run_chunked(std::uint64_t chunk_count, int requested_threads, double phase_tol,
                              const ChunkFn &work) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) {
        hw = 1;
    }
    const auto threads = static_cast<std::uint64_t>(
        requested_threads > 0 ? static_cast<unsigned>(requested_threads) : hw);
    const std::uint64_t workers = std::min<std::uint64_t>(threads, chunk_count);

    OutcomeAggregator global(phase_tol);
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunk_count; ++c) {
            OutcomeAggregator local(phase_tol);
            work(c, local);
            global.merge(local);
        }
        return global;
    }

    std::vector<std::optional<OutcomeAggregator>> slots(chunk_count);
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t c = next.fetch_add(1); c < chunk_count; c = next.fetch_add(1)) {
                OutcomeAggregator local(phase_tol);
                work(c, local);
                {
                    std::lock_guard<std::mutex> guard(mutex);
                    slots[c] = std::move(local);
                }
                ready.notify_all();
            }
        });
    }
    for (std::uint64_t c = 0; c < chunk_count; ++c) {
        std::unique_lock<std::mutex> lock(mutex);
        ready.wait(lock, [&] { return slots[c].has_value(); });
        OutcomeAggregator local = std::move(*slots[c]);
        slots[c].reset();
        lock.unlock();
        global.merge(local);
    }
    for (auto &t : pool) {
        t.join();
    }
    return global;
}

std::vector<std::string> labels_from_mask(const MeasurementDevice &device, std::uint64_t mask) {
    std::vector<std::string> labels;
    for (int i = 0; i < device.size(); ++i) {
        if (mask & (1ULL << i)) {
            labels.push_back(device.state(i).label);
        }
    }
    std::sort(labels.begin(), labels.end());
    return labels;
}

OutcomeDistribution build_distribution(const MeasurementDevice &device,
                                       std::vector<OutcomeAggregator::Entry> entries,
                                       DistributionMetadata metadata, double weight_scale) {
    std::vector<Outcome> outcomes;
    outcomes.reserve(entries.size());
    for (auto &entry : entries) {
        outcomes.push_back(Outcome{labels_from_mask(device, entry.mask),
                                   StateVector(std::move(entry.state)),
                                   entry.weight * weight_scale});
    }
    return OutcomeDistribution(std::move(metadata), std::move(outcomes));
}

DistributionMetadata make_metadata(const MeasurementDevice &device, SampleMode mode,
                                   std::uint64_t samples, std::optional<std::uint64_t> seed) {
    DistributionMetadata meta;
    meta.dim = device.dim();
    meta.device_size = device.size();
    for (const auto &entry : device.states()) {
        meta.device_labels.push_back(entry.label);
    }
    meta.mode = mode;
    meta.samples = samples;
    meta.seed = seed;
    return meta;
}

std::vector<Eigen::VectorXcd> canonical_device_states(const MeasurementDevice &device) {
    std::vector<Eigen::VectorXcd> states;
    states.reserve(static_cast<std::size_t>(device.size()));
    for (const auto &entry : device.states()) {
        Eigen::VectorXcd amps = entry.state.amplitudes();
        canonicalize_raw(amps);
        states.push_back(std::move(amps));
    }
    return states;
}

} // namespace

MeasurementDevice::MeasurementDevice(std::vector<Entry> states) : states_(std::move(states)) {
    if (states_.empty()) {
        throw ValidationError("measurement device requires at least one state");
    }
    if (states_.size() > 64) {
        throw ValidationError("measurement device supports at most 64 states");
    }
    const int d = states_.front().state.dim();
    std::set<std::string> labels;
    for (const auto &entry : states_) {
        detail::require_same_dim(entry.state.dim(), d, "MeasurementDevice");
        if (!labels.insert(entry.label).second) {
            throw ValidationError("duplicate measurement-state label '" + entry.label + "'");
        }
    }
}

bool MeasurementDevice::has_label(const std::string &label) const {
    return std::any_of(states_.begin(), states_.end(),
                       [&](const Entry &entry) { return entry.label == label; });
}

OutcomeDistribution::OutcomeDistribution(DistributionMetadata metadata,
                                         std::vector<Outcome> outcomes)
    : metadata_(std::move(metadata)), outcomes_(std::move(outcomes)) {
    std::stable_sort(outcomes_.begin(), outcomes_.end(), [](const Outcome &a, const Outcome &b) {
        if (a.probability != b.probability) {
            return a.probability > b.probability;
        }
        return a.affirmative_labels < b.affirmative_labels;
    });
}

double OutcomeDistribution::total_probability() const {
    double total = 0.0;
    for (const auto &outcome : outcomes_) {
        total += outcome.probability;
    }
    return total;
}

const Outcome *OutcomeDistribution::find(const std::vector<std::string> &labels,
                                         const StateVector &final_state, double tol) const {
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    for (const auto &outcome : outcomes_) {
        if (outcome.affirmative_labels == sorted &&
            phase_equal(outcome.final_state, final_state, tol)) {
            return &outcome;
        }
    }
    return nullptr;
}

OutcomeDistribution measure_exact(const StateVector &psi, const MeasurementDevice &device,
                                  const MeasureOptions &options) {
    detail::require_same_dim(psi.dim(), device.dim(), "measure_exact");
    const int n = device.size();
    if (n > options.max_exact_states) {
        throw CapacityError("exact mode enumerates n!*2^n paths and is capped at " +
                            std::to_string(options.max_exact_states) + " states (device has " +
                            std::to_string(n) +
                            "); use measure_sampled or raise MeasureOptions::max_exact_states");
    }

    const std::vector<int> base = label_sorted_indices(device);
    const std::vector<Eigen::VectorXcd> device_states = canonical_device_states(device);
    const std::uint64_t permutations = factorial(n);
    const double leaf_weight = 1.0 / static_cast<double>(permutations);
    const std::uint64_t chunk_count = (permutations + kPermChunk - 1) / kPermChunk;

    const Eigen::VectorXcd &initial = psi.amplitudes();
    auto work = [&](std::uint64_t chunk, OutcomeAggregator &agg) {
        const std::uint64_t begin = chunk * kPermChunk;
        const std::uint64_t end = std::min(begin + kPermChunk, permutations);
        std::vector<int> ranks = unrank_permutation(n, begin);
        std::vector<int> permutation(static_cast<std::size_t>(n));
        ExactWalker walker(device_states, leaf_weight, options.zero_tolerance, agg);
        for (std::uint64_t r = begin; r < end; ++r) {
            for (int i = 0; i < n; ++i) {
                permutation[static_cast<std::size_t>(i)] =
                    base[static_cast<std::size_t>(ranks[static_cast<std::size_t>(i)])];
            }
            walker.run(initial, permutation);
            std::next_permutation(ranks.begin(), ranks.end());
        }
    };

    OutcomeAggregator global = run_chunked(chunk_count, options.threads, kPhaseTolerance, work);
    return build_distribution(device, global.finish(),
                              make_metadata(device, SampleMode::kExact, 0, std::nullopt), 1.0);
}

OutcomeDistribution measure_sampled(const StateVector &psi, const MeasurementDevice &device,
                                    std::uint64_t samples, std::uint64_t seed,
                                    const MeasureOptions &options) {
    detail::require_same_dim(psi.dim(), device.dim(), "measure_sampled");
    if (samples < 1) {
        throw ValidationError("measure_sampled requires samples >= 1");
    }
    const int n = device.size();
    const std::vector<Eigen::VectorXcd> device_states = canonical_device_states(device);
    const std::uint64_t block_count = (samples + kSampleBlock - 1) / kSampleBlock;

    const Eigen::VectorXcd &initial = psi.amplitudes();
    auto work = [&](std::uint64_t block, OutcomeAggregator &agg) {
        const std::uint64_t begin = block * kSampleBlock;
        const std::uint64_t end = std::min(begin + kSampleBlock, samples);
        std::mt19937_64 rng(derive_seed(seed, block));
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        Eigen::VectorXcd current(device.dim());
        Eigen::VectorXcd residual(device.dim());
        for (std::uint64_t s = begin; s < end; ++s) {
            shuffle_in_place(order, rng);
            const Eigen::VectorXcd *state = &initial;
            std::uint64_t mask = 0;
            for (int k = 0; k < n; ++k) {
                const int idx = order[static_cast<std::size_t>(k)];
                const Eigen::VectorXcd &a = device_states[static_cast<std::size_t>(idx)];
                const Complex amp = a.dot(*state);
                const double p_affirm = std::min(std::norm(amp), 1.0);
                bool affirmative;
                if (p_affirm <= options.zero_tolerance) {
                    affirmative = false;
                } else if (1.0 - p_affirm <= options.zero_tolerance) {
                    affirmative = true;
                } else {
                    affirmative = uniform_unit(rng) < p_affirm;
                }
                if (affirmative) {
                    mask |= 1ULL << idx;
                    state = &a;
                } else {
                    residual = *state - amp * a;
                    residual /= residual.norm();
                    current = residual;
                    state = &current;
                }
            }
            Eigen::VectorXcd leaf = *state;
            canonicalize_raw(leaf);
            agg.add(mask, leaf, 1.0);
        }
    };

    OutcomeAggregator global = run_chunked(block_count, options.threads, kPhaseTolerance, work);
    return build_distribution(device, global.finish(),
                              make_metadata(device, SampleMode::kSampled, samples, seed),
                              1.0 / static_cast<double>(samples));
}

double marginal_probability(const OutcomeDistribution &dist, const std::string &label) {
    const auto &labels = dist.metadata().device_labels;
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        throw ValidationError("unknown measurement-state label '" + label + "'");
    }
    double total = 0.0;
    for (const auto &outcome : dist.outcomes()) {
        if (std::binary_search(outcome.affirmative_labels.begin(),
                               outcome.affirmative_labels.end(), label)) {
            total += outcome.probability;
        }
    }
    return total;
}

std::vector<PathRecord> enumerate_paths(const StateVector &psi, const MeasurementDevice &device,
                                        const MeasureOptions &options) {
    detail::require_same_dim(psi.dim(), device.dim(), "enumerate_paths");
    const int n = device.size();
    if (n > options.max_exact_states) {
        throw CapacityError("path enumeration is capped at " +
                            std::to_string(options.max_exact_states) + " states");
    }
    const std::vector<int> base = label_sorted_indices(device);
    const std::uint64_t permutations = factorial(n);
    const double leaf_weight = 1.0 / static_cast<double>(permutations);

    std::vector<PathRecord> records;
    std::vector<int> ranks(static_cast<std::size_t>(n));
    std::iota(ranks.begin(), ranks.end(), 0);
    std::vector<bool> decisions;
    std::vector<int> permutation(static_cast<std::size_t>(n));

    // Plain recursive walk over the Projection primitives; affirmative first.
    std::function<void(const StateVector &, std::size_t, double)> walk =
        [&](const StateVector &state, std::size_t depth, double probability) {
            if (depth == static_cast<std::size_t>(n)) {
                std::vector<std::string> visit_order;
                for (const int idx : permutation) {
                    visit_order.push_back(device.state(idx).label);
                }
                records.push_back(PathRecord{std::move(visit_order), decisions,
                                             probability * leaf_weight, phase_canonical(state)});
                return;
            }
            const StateVector &a = device.state(permutation[depth]).state;
            const Projection affirm = project_affirmative(state, a);
            if (affirm.collapsed) {
                decisions.push_back(true);
                walk(*affirm.collapsed, depth + 1, probability * affirm.probability);
                decisions.pop_back();
            }
            const Projection null = project_null(state, a);
            if (null.collapsed) {
                decisions.push_back(false);
                walk(*null.collapsed, depth + 1, probability * null.probability);
                decisions.pop_back();
            }
        };

    for (std::uint64_t r = 0; r < permutations; ++r) {
        for (int i = 0; i < n; ++i) {
            permutation[static_cast<std::size_t>(i)] =
                base[static_cast<std::size_t>(ranks[static_cast<std::size_t>(i)])];
        }
        walk(psi, 0, 1.0);
        std::next_permutation(ranks.begin(), ranks.end());
    }
    return records;
}

double total_variation_distance(const OutcomeDistribution &a, const OutcomeDistribution &b) {
    std::vector<bool> matched(b.outcomes().size(), false);
    double sum = 0.0;
    for (const auto &oa : a.outcomes()) {
        bool found = false;
        for (std::size_t j = 0; j < b.outcomes().size(); ++j) {
            const auto &ob = b.outcomes()[j];
            if (!matched[j] && oa.affirmative_labels == ob.affirmative_labels &&
                phase_equal(oa.final_state, ob.final_state)) {
                sum += std::abs(oa.probability - ob.probability);
                matched[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            sum += oa.probability;
        }
    }
    for (std::size_t j = 0; j < b.outcomes().size(); ++j) {
        if (!matched[j]) {
            sum += b.outcomes()[j].probability;
        }
    }
    return 0.5 * sum;
}

} // namespace seqmeas
