#include "seqmeas/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace seqmeas {

namespace {

using Amplitudes = std::vector<Complex>;

Complex dot_conj(const Amplitudes &u, const Amplitudes &v) {
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) {
        sum += std::conj(u[i]) * v[i];
    }
    return sum;
}

double norm_of(const Amplitudes &v) {
    double sum = 0.0;
    for (const Complex &c : v) {
        sum += std::norm(c);
    }
    return std::sqrt(sum);
}

Amplitudes normalized(const Amplitudes &v) {
    const double n = norm_of(v);
    Amplitudes out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / n;
    }
    return out;
}

Amplitudes canonical(const Amplitudes &v) {
    for (const Complex &c : v) {
        if (std::abs(c) > 1e-9) {
            const Complex factor = std::conj(c) / std::abs(c);
            Amplitudes out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                out[i] = v[i] * factor;
            }
            return out;
        }
    }
    return v;
}

bool same_ray(const Amplitudes &u, const Amplitudes &v) {
    return std::norm(dot_conj(u, v)) >= 1.0 - 1e-9;
}

struct OracleLeaf {
    std::set<std::string> labels;
    Amplitudes state;
    double probability = 0.0;
};

struct OracleContext {
    std::vector<std::string> labels;
    std::vector<Amplitudes> states;
    std::vector<OracleLeaf> aggregated;

    void record(const std::set<std::string> &affirmative, const Amplitudes &state, double p) {
        const Amplitudes canon = canonical(state);
        for (OracleLeaf &leaf : aggregated) {
            if (leaf.labels == affirmative && same_ray(leaf.state, canon)) {
                leaf.probability += p;
                return;
            }
        }
        aggregated.push_back(OracleLeaf{affirmative, canon, p});
    }

    void fork(const std::vector<int> &order, std::size_t depth, const Amplitudes &state,
              std::set<std::string> affirmative, double probability) {
        if (depth == order.size()) {
            record(affirmative, state, probability);
            return;
        }
        const int idx = order[depth];
        const Amplitudes &a = states[static_cast<std::size_t>(idx)];
        const Complex amp = dot_conj(a, state);
        const double p_yes = std::norm(amp);
        const double p_no = 1.0 - p_yes;
        if (p_yes > 1e-12) {
            std::set<std::string> with = affirmative;
            with.insert(labels[static_cast<std::size_t>(idx)]);
            fork(order, depth + 1, a, std::move(with), probability * p_yes);
        }
        if (p_no > 1e-12) {
            Amplitudes rest(state.size());
            for (std::size_t i = 0; i < state.size(); ++i) {
                rest[i] = state[i] - amp * a[i];
            }
            fork(order, depth + 1, normalized(rest), affirmative, probability * p_no);
        }
    }
};

} // namespace

OutcomeDistribution brute_force_oracle(const StateVector &psi, const MeasurementDevice &device) {
    detail::require_same_dim(psi.dim(), device.dim(), "brute_force_oracle");
    const int n = device.size();
    if (n > 6) {
        throw CapacityError("brute_force_oracle is capped at 6 states");
    }

    OracleContext ctx;
    for (const auto &entry : device.states()) {
        ctx.labels.push_back(entry.label);
        Amplitudes amps(static_cast<std::size_t>(device.dim()));
        for (int i = 0; i < device.dim(); ++i) {
            amps[static_cast<std::size_t>(i)] = entry.state.amplitude(i);
        }
        ctx.states.push_back(std::move(amps));
    }
    Amplitudes initial(static_cast<std::size_t>(psi.dim()));
    for (int i = 0; i < psi.dim(); ++i) {
        initial[static_cast<std::size_t>(i)] = psi.amplitude(i);
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ctx.labels[static_cast<std::size_t>(a)] < ctx.labels[static_cast<std::size_t>(b)];
    });

    const double weight = [n] {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) {
            f *= k;
        }
        return 1.0 / f;
    }();

    do {
        ctx.fork(order, 0, initial, {}, weight);
    } while (std::next_permutation(order.begin(), order.end(), [&](int a, int b) {
        return ctx.labels[static_cast<std::size_t>(a)] < ctx.labels[static_cast<std::size_t>(b)];
    }));

    std::vector<Outcome> outcomes;
    outcomes.reserve(ctx.aggregated.size());
    for (const OracleLeaf &leaf : ctx.aggregated) {
        std::vector<Complex> amps(leaf.state.begin(), leaf.state.end());
        outcomes.push_back(Outcome{std::vector<std::string>(leaf.labels.begin(), leaf.labels.end()),
                                   StateVector::from_amplitudes(amps), leaf.probability});
    }

    DistributionMetadata meta;
    meta.dim = device.dim();
    meta.device_size = n;
    for (const auto &entry : device.states()) {
        meta.device_labels.push_back(entry.label);
    }
    meta.mode = SampleMode::kExact;
    return OutcomeDistribution(std::move(meta), std::move(outcomes));
}

} // namespace seqmeas
