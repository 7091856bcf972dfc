#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "monotile/coloured_graph.hpp"
#include "monotile/sequence.hpp"
#include "monotile/vertex_set.hpp"

namespace monotile {

// Down-closed hypergraph evaluated on demand: the vertex set is U inside a
// coloured host, and a set S (|S| <= delta) is an edge iff S has at least
// `threshold` common neighbours of `colour` inside V.  Down-closedness is
// structural (common neighbourhoods shrink as S grows).
//
// The delta-set census (total/bad counts plus an index of bad delta-sets used
// for richness queries) is built lazily: exact when C(|U|, delta) <= exact_cap,
// otherwise estimated from a seeded sample and flagged as such.
class DownClosedHypergraph {
public:
    DownClosedHypergraph(const ColouredCompleteGraph& g, const VertexSet& u, const VertexSet& v,
                         int colour, double threshold, int delta,
                         std::uint64_t exact_cap = 10'000'000, std::uint64_t seed = 0);

    int delta() const { return delta_; }
    int colour() const { return colour_; }
    double threshold() const { return threshold_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const std::vector<int>& vertices() const { return vertices_; }
    const VertexSet& vertex_set() const { return u_; }
    const VertexSet& v_side() const { return v_; }
    const ColouredCompleteGraph& host() const { return *g_; }

    // s: host ids inside U, |s| <= delta.
    bool edge(const std::vector<int>& s) const;

    struct DeltaStats {
        double total = 0.0;
        double bad = 0.0;
        bool exact = true;
    };
    const DeltaStats& delta_stats() const;

    // Number of delta-supersets of s (within U) that are NOT edges; exact in
    // exact mode, a seeded estimate otherwise.
    double bad_supersets(const std::vector<int>& s) const;
    bool counts_exact() const { return delta_stats().exact; }

    void set_query_log(bool on) { log_queries_ = on; }
    const std::vector<std::vector<int>>& query_log() const { return queries_; }

private:
    void build_census() const;

    const ColouredCompleteGraph* g_;
    VertexSet u_, v_;
    std::vector<int> vertices_;
    int colour_;
    double threshold_;
    int delta_;
    std::uint64_t exact_cap_;
    std::uint64_t seed_;

    mutable bool census_built_ = false;
    mutable DeltaStats stats_;
    mutable std::vector<std::vector<int>> bad_sets_;            // exact mode only
    mutable std::map<int, std::vector<int>> bad_bucket_;        // host id -> bad set ids
    mutable bool log_queries_ = false;
    mutable std::vector<std::vector<int>> queries_;
};

// Richness of a set s (|s| <= delta): s extends to strictly more than
// (1 - lambda^(delta-|s|)) * C(|U|-|s|, delta-|s|) delta-edges.  Memoized;
// single-owner use (no internal locking).
class RichSetOracle {
public:
    RichSetOracle(const DownClosedHypergraph& g, double lambda);

    struct Classification {
        bool rich = false;
        bool exact = true;
        double bad_supersets = 0.0;
        double allowance = 0.0; // lambda^(delta-q) * C(n-q, delta-q)
    };

    Classification classify(std::vector<int> s) const;
    bool is_rich(const std::vector<int>& s) const { return classify(s).rich; }
    double lambda() const { return lambda_; }
    const DownClosedHypergraph& hypergraph() const { return *g_; }

private:
    const DownClosedHypergraph* g_;
    double lambda_;
    mutable std::map<std::vector<int>, Classification> memo_;
};

struct HEmbedResult {
    bool ok = false;
    std::vector<int> map;              // H vertex -> host id in U
    std::vector<int> stuck_prefix;     // mapped prefix that admitted no rich extension
    std::uint64_t rich_queries = 0;
};

// Greedy randomized embedding of the multihypergraph h into g keeping every
// partial edge image rich.  Requires m <= n/2 and lambda < 1/(2*delta); with
// check_preconditions the delta-set census must show bad <= lambda^delta*total.
HEmbedResult embed_hypergraph(const DerivedMultiHypergraph& h, const DownClosedHypergraph& g,
                              double lambda, std::uint64_t seed,
                              bool check_preconditions = true);

// Same, but sharing a memoized oracle across calls (retry loops).
HEmbedResult embed_hypergraph(const DerivedMultiHypergraph& h, const RichSetOracle& oracle,
                              std::uint64_t seed, bool check_preconditions = true);

// Number of hyperedges of h whose image under `map` lies inside r (edges with
// repetition; the empty hyperedge always counts).
std::int64_t count_edges_in(const DerivedMultiHypergraph& h, const std::vector<int>& map,
                            const VertexSet& r);

struct CarefulEmbedResult {
    std::vector<int> map;
    std::vector<std::int64_t> constraint_counts;
    double demand = 0.0;      // e(H) / (delta^2 * (32 r)^delta)
    int attempts = 0;
    int satisfied = 0;        // constraints at or above the demand
};

// Las Vegas wrapper: resample embed_hypergraph until every constraint set
// R_i contains at least demand hyperedge images.  Throws RetryExhausted with
// the most starved constraint when the cap is hit.  The guarantee only covers
// up to exp(lambda m) constraints; with best_effort the retries instead keep
// the attempt satisfying the most constraints and return it with honest
// counts, so callers can disqualify the starved sets themselves.
CarefulEmbedResult embed_carefully(const DerivedMultiHypergraph& h, const DownClosedHypergraph& g,
                                   double lambda, int r, const std::vector<VertexSet>& constraints,
                                   std::uint64_t seed, int max_retries = 64,
                                   bool check_preconditions = true, bool best_effort = false);

} // namespace monotile
