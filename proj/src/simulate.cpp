#include "wrw/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wrw/rng.hpp"

namespace wrw::sim {

namespace {

using model::IncrementDistribution;
using model::WalkSpec;
using model::WeightFunction;

// Per-step data shared by all paths of one run. Exponential weights use the
// rescaled recursion W_n = e^{-beta} W_{n-1} + X_n with barrier c e^{-beta n},
// which never materializes e^{beta n}; all other kinds accumulate
// Z_n = sum sigma(k) X_k directly with compensated summation.
struct StepPlan {
    bool rescaled = false;
    double decay = 0.0;
    double barrier = 0.0;
    std::vector<double> step_barrier;  // rescaled: c e^{-beta n}
    std::vector<double> sigma;         // raw: sigma(1..N)
};

StepPlan make_plan(const WalkSpec& spec, std::uint64_t max_n) {
    StepPlan plan;
    plan.barrier = spec.barrier;
    if (spec.weight.kind() == WeightFunction::Kind::Exponential) {
        plan.rescaled = true;
        plan.decay = std::exp(-spec.weight.beta());
        plan.step_barrier.resize(max_n);
        for (std::uint64_t n = 1; n <= max_n; ++n)
            plan.step_barrier[n - 1] =
                spec.barrier * std::exp(-spec.weight.beta() * static_cast<double>(n));
    } else {
        plan.sigma.resize(max_n);
        for (std::uint64_t n = 1; n <= max_n; ++n)
            plan.sigma[n - 1] = spec.weight.sigma(n);
    }
    return plan;
}

// First n in [1, max_n] with Z_n > barrier, or max_n + 1 if the path survives.
std::uint64_t first_violation(StreamRng& rng, IncrementDistribution::Kind kind,
                              const StepPlan& plan, std::uint64_t max_n, bool early_exit) {
    std::uint64_t violation = max_n + 1;
    if (plan.rescaled) {
        double w = 0.0;
        for (std::uint64_t n = 1; n <= max_n; ++n) {
            w = plan.decay * w + rng.sample(kind);
            if (w > plan.step_barrier[n - 1]) {
                if (violation > max_n) violation = n;
                if (early_exit) break;
            }
        }
    } else {
        double z = 0.0, comp = 0.0;
        for (std::uint64_t n = 1; n <= max_n; ++n) {
            const double term = plan.sigma[n - 1] * rng.sample(kind) - comp;
            const double next = z + term;
            comp = (next - z) - term;
            z = next;
            if (z > plan.barrier) {
                if (violation > max_n) violation = n;
                if (early_exit) break;
            }
        }
    }
    return violation;
}

struct StreamSlice {
    std::uint64_t stream = 0;
    std::uint64_t begin = 0;  // global path index range [begin, end)
    std::uint64_t end = 0;
};

std::vector<StreamSlice> partition_paths(std::uint64_t paths, std::uint32_t stream_count) {
    std::vector<StreamSlice> slices(stream_count);
    const std::uint64_t base = paths / stream_count;
    const std::uint64_t extra = paths % stream_count;
    std::uint64_t at = 0;
    for (std::uint32_t s = 0; s < stream_count; ++s) {
        slices[s].stream = s;
        slices[s].begin = at;
        at += base + (s < extra ? 1 : 0);
        slices[s].end = at;
    }
    return slices;
}

// Runs fn(slice) over all slices on `threads` workers. Slices own disjoint
// output, so scheduling order cannot affect the merged result.
template <typename Fn>
void run_slices(const std::vector<StreamSlice>& slices, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(slices.size()));
    if (threads <= 1) {
        for (const auto& slice : slices) fn(slice);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= slices.size()) return;
                fn(slices[i]);
            }
        });
    for (auto& th : pool) th.join();
}

void validate_common(std::uint64_t paths, const RngStreamConfig& rng) {
    if (paths == 0) throw std::invalid_argument("simulate requires paths >= 1");
    if (rng.stream_count == 0) throw std::invalid_argument("stream_count must be >= 1");
}

SurvivalEstimate make_estimate(std::uint64_t survivors, std::uint64_t paths,
                               std::uint64_t horizon, std::uint64_t seed) {
    SurvivalEstimate est;
    est.paths = paths;
    est.survivors = survivors;
    est.horizon = horizon;
    est.seed = seed;
    est.p_hat = static_cast<double>(survivors) / static_cast<double>(paths);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(paths));
    return est;
}

}  // namespace

SurvivalEstimate simulate_survival(const WalkSpec& spec, std::uint64_t paths,
                                   const RngStreamConfig& rng, const SimulateOptions& opts) {
    validate_common(paths, rng);
    if (spec.horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    const StepPlan plan = make_plan(spec, spec.horizon);
    const auto slices = partition_paths(paths, rng.stream_count);

    std::vector<std::uint64_t> per_stream(slices.size(), 0);
    run_slices(slices, opts.threads, [&](const StreamSlice& slice) {
        std::uint64_t count = 0;
        for (std::uint64_t j = 0; j < slice.end - slice.begin; ++j) {
            StreamRng path_rng(rng.seed, (slice.stream << 32) | j);
            if (first_violation(path_rng, spec.dist.kind, plan, spec.horizon,
                                opts.early_exit) > spec.horizon)
                ++count;
        }
        per_stream[slice.stream] = count;
    });

    std::uint64_t survivors = 0;
    for (std::uint64_t c : per_stream) survivors += c;
    return make_estimate(survivors, paths, spec.horizon, rng.seed);
}

std::vector<SurvivalEstimate> survival_curve(const WalkSpec& base,
                                             std::span<const std::uint64_t> horizons,
                                             std::uint64_t paths, const RngStreamConfig& rng,
                                             const SimulateOptions& opts) {
    validate_common(paths, rng);
    if (horizons.empty()) throw std::invalid_argument("survival_curve requires horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] == 0) throw std::invalid_argument("horizons must be >= 1");
        if (i && horizons[i] <= horizons[i - 1])
            throw std::invalid_argument("horizons must be strictly increasing");
    }

    const std::uint64_t max_n = horizons.back();
    const StepPlan plan = make_plan(base, max_n);
    const auto slices = partition_paths(paths, rng.stream_count);

    // bucket[k] = #paths whose first violation kills horizons[k..]; the path
    // survives horizons[0..k-1]. Suffix sums give survivor counts.
    std::vector<std::vector<std::uint64_t>> buckets(slices.size());
    run_slices(slices, opts.threads, [&](const StreamSlice& slice) {
        std::vector<std::uint64_t> bucket(horizons.size() + 1, 0);
        for (std::uint64_t j = 0; j < slice.end - slice.begin; ++j) {
            StreamRng path_rng(rng.seed, (slice.stream << 32) | j);
            const std::uint64_t v =
                first_violation(path_rng, base.dist.kind, plan, max_n, opts.early_exit);
            const std::size_t k =
                std::lower_bound(horizons.begin(), horizons.end(), v) - horizons.begin();
            ++bucket[k];
        }
        buckets[slice.stream] = std::move(bucket);
    });

    std::vector<std::uint64_t> bucket(horizons.size() + 1, 0);
    for (const auto& b : buckets)
        for (std::size_t k = 0; k < b.size(); ++k) bucket[k] += b[k];

    std::vector<SurvivalEstimate> curve(horizons.size());
    std::uint64_t alive = bucket[horizons.size()];
    for (std::size_t i = horizons.size(); i-- > 0;) {
        curve[i] = make_estimate(alive, paths, horizons[i], rng.seed);
        alive += bucket[i];
    }
    return curve;
}

double enumerate_exact(const WalkSpec& spec) {
    if (!spec.dist.finite_support())
        throw std::invalid_argument("enumerate_exact requires a finite-support distribution");
    if (spec.horizon == 0 || spec.horizon > 25)
        throw std::invalid_argument("enumerate_exact requires 1 <= horizon <= 25");

    const auto atoms = spec.dist.atoms();
    std::vector<double> sigma(spec.horizon);
    for (std::uint64_t n = 1; n <= spec.horizon; ++n) sigma[n - 1] = spec.weight.sigma(n);

    double total = 0.0;
    // Iterative DFS; prunes any prefix already above the barrier.
    struct Frame {
        std::uint64_t depth;
        double partial;
        double prob;
        std::size_t atom;
    };
    std::vector<Frame> stack;
    stack.push_back({0, 0.0, 1.0, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.atom == atoms.size()) {
            stack.pop_back();
            continue;
        }
        const auto [value, prob] = atoms[f.atom++];
        const double z = f.partial + sigma[f.depth] * value;
        if (z > spec.barrier) continue;
        const double branch_prob = f.prob * prob;
        if (f.depth + 1 == spec.horizon)
            total += branch_prob;
        else
            stack.push_back({f.depth + 1, z, branch_prob, 0});
    }
    return total;
}

}  // namespace wrw::sim
