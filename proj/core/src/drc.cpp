#include "monotile/drc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monotile/errors.hpp"
#include "monotile/rng.hpp"

namespace monotile {

namespace {

constexpr std::uint64_t kExactCountCap = 1'000'000; // k-subsets enumerated exactly below this
constexpr int kSampleCount = 50'000;

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return v;
}

// Enumerate k-subsets of `vs`, calling f on each; f may stop by returning false.
template <class F>
void for_each_subset(const std::vector<int>& vs, int k, F f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    int n = static_cast<int>(vs.size());
    if (k > n) return;
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (;;) {
        for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = vs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        if (!f(pick)) return;
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

bool k_set_is_bad(const BipartiteGraph& h, const std::vector<int>& pick, double demand) {
    VertexSet acc = h.row(pick[0]);
    for (std::size_t i = 1; i < pick.size(); ++i) acc &= h.row(pick[static_cast<std::size_t>(i)]);
    return static_cast<double>(acc.count()) < demand;
}

} // namespace

double chernoff_lower_tail(double mu, double delta) {
    if (mu < 0.0) throw PreconditionError("chernoff_lower_tail: mu must be >= 0");
    if (delta <= 0.0 || delta >= 1.0)
        throw PreconditionError("chernoff_lower_tail: delta must be in (0, 1)");
    return std::exp(-mu * delta * delta / 2.0);
}

std::uint64_t count_bad_k_sets(const BipartiteGraph& h, const VertexSet& s, int k,
                               double gamma) {
    double demand = gamma * static_cast<double>(h.b_size());
    std::vector<int> vs = s.to_vector();
    std::uint64_t bad = 0;
    for_each_subset(vs, k, [&](const std::vector<int>& pick) {
        if (k_set_is_bad(h, pick, demand)) ++bad;
        return true;
    });
    return bad;
}

DrcResult dependent_random_choice(const BipartiteGraph& h, const DrcParams& p) {
    if (p.k < 1) throw PreconditionError("drc: k must be >= 1");
    if (p.t < 1) throw PreconditionError("drc: t must be >= 1");
    if (p.epsilon <= 0.0 || p.epsilon > 1.0) throw PreconditionError("drc: epsilon must be in (0, 1]");
    if (p.delta <= 0.0) throw PreconditionError("drc: delta must be > 0");
    if (h.a_size() == 0 || h.b_size() == 0) throw PreconditionError("drc: sides must be nonempty");
    if (p.check_density && h.density() < p.epsilon)
        throw PreconditionError("drc: density " + std::to_string(h.density()) +
                                " below epsilon " + std::to_string(p.epsilon));

    const double demand = p.gamma * static_cast<double>(h.b_size());
    const double size_bound = 0.5 * std::pow(p.epsilon, p.t) * static_cast<double>(h.a_size());

    SplitRng rng = SplitRng(p.seed).sub("drc");
    DrcResult best;
    for (int attempt = 0; attempt <= p.max_retries; ++attempt) {
        SplitRng draw = rng.sub("attempt", static_cast<std::uint64_t>(attempt));
        std::vector<int> ts(static_cast<std::size_t>(p.t));
        for (auto& v : ts) v = static_cast<int>(draw.below(static_cast<std::uint64_t>(h.b_size())));

        VertexSet s = VertexSet::full(h.a_size());
        for (int v : ts) s &= h.col(v);

        double sz = static_cast<double>(s.count());
        if (sz < size_bound || sz < 1.0) continue;

        double bad_bound = p.delta * std::pow(sz, p.k);
        std::vector<int> vs = s.to_vector();
        double total_subsets = binom(static_cast<int>(vs.size()), p.k);

        std::uint64_t bad = 0;
        CountMode mode = CountMode::exact;
        if (total_subsets <= static_cast<double>(kExactCountCap)) {
            bool over = false;
            for_each_subset(vs, p.k, [&](const std::vector<int>& pick) {
                if (k_set_is_bad(h, pick, demand)) {
                    ++bad;
                    if (static_cast<double>(bad) > bad_bound) { over = true; return false; }
                }
                return true;
            });
            if (over) continue;
        } else {
            // two-stage seeded estimate: sample, then confirm near the bound
            mode = CountMode::sampled;
            auto estimate = [&](int samples) {
                std::uint64_t hits = 0;
                std::vector<int> pick(static_cast<std::size_t>(p.k));
                SplitRng srng = draw.sub("count");
                for (int it = 0; it < samples; ++it) {
                    auto chosen = srng.sample_without_replacement(static_cast<int>(vs.size()), p.k);
                    for (int j = 0; j < p.k; ++j) pick[static_cast<std::size_t>(j)] = vs[static_cast<std::size_t>(chosen[static_cast<std::size_t>(j)])];
                    if (k_set_is_bad(h, pick, demand)) ++hits;
                }
                return static_cast<double>(hits) / static_cast<double>(samples);
            };
            double frac = estimate(kSampleCount);
            double est = frac * total_subsets;
            double sigma = std::sqrt(std::max(frac * (1.0 - frac), 1.0 / kSampleCount) /
                                     kSampleCount) * total_subsets;
            if (est + 2.0 * sigma > bad_bound) {
                double frac2 = estimate(4 * kSampleCount);
                est = frac2 * total_subsets;
                if (est > bad_bound) continue;
            }
            bad = static_cast<std::uint64_t>(est);
        }

        DrcResult res;
        res.s = s;
        res.bad_k_sets = bad;
        res.size_bound = size_bound;
        res.bad_bound = bad_bound;
        res.retries = attempt;
        res.witness_t = ts;
        res.count_mode = mode;
        res.chosen_t = p.t;

        // contract re-check on the witness before returning
        VertexSet recheck = VertexSet::full(h.a_size());
        for (int v : ts) recheck &= h.col(v);
        if (!(recheck == s)) continue;
        if (static_cast<double>(s.count()) < size_bound) continue;
        if (static_cast<double>(bad) > bad_bound) continue;
        return res;
    }
    throw RetryExhausted("dependent_random_choice: no sample met |S| >= " +
                             std::to_string(size_bound) + " with bad k-sets <= delta*|S|^k after " +
                             std::to_string(p.max_retries + 1) + " attempts",
                         p.max_retries);
}

DrcResult k_set_drc(const BipartiteGraph& h, int r, int k, double delta,
                    std::uint64_t seed, int max_retries, bool check_density) {
    if (r < 1) throw PreconditionError("k_set_drc: r must be >= 1");
    if (delta <= 0.0 || delta >= 0.5) throw PreconditionError("k_set_drc: delta must be in (0, 1/2)");
    // smallest t with 2^(t-1) > 1/delta; then 2^(t-2) <= 1/delta holds too
    int t = 2;
    while (std::pow(2.0, t - 1) <= 1.0 / delta) ++t;

    DrcParams p;
    p.k = k;
    p.t = t;
    p.epsilon = 1.0 / static_cast<double>(r);
    p.gamma = std::pow(1.0 / static_cast<double>(r), k) / 2.0;
    p.delta = delta;
    p.seed = seed;
    p.max_retries = max_retries;
    p.check_density = check_density;
    DrcResult res = dependent_random_choice(h, p);
    double target = 0.5 * std::pow(p.epsilon, t);
    int c = 1;
    while (std::pow(delta, c) > target && c < 64) ++c;
    res.computed_c = c;
    return res;
}

DrcResult pair_drc(const BipartiteGraph& h, double epsilon, double delta,
                   std::uint64_t seed, int max_retries, bool check_density) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw PreconditionError("pair_drc: epsilon must be in (0, 1)");
    if (delta < 2.0 * std::pow(epsilon, 4))
        throw PreconditionError("pair_drc: needs delta >= 2*epsilon^4");
    DrcParams p;
    p.k = 2;
    p.t = 4;
    p.epsilon = epsilon;
    p.gamma = std::pow(epsilon, 3);
    p.delta = delta;
    p.seed = seed;
    p.max_retries = max_retries;
    p.check_density = check_density;
    return dependent_random_choice(h, p);
}

} // namespace monotile
