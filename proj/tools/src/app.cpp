#include "app.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "monotile/coloured_graph.hpp"
#include "monotile/errors.hpp"
#include "monotile/exact_oracle.hpp"
#include "monotile/pipeline.hpp"
#include "monotile/rng.hpp"
#include "monotile/sequence.hpp"
#include "monotile/serialize.hpp"
#include "monotile/tiling.hpp"

namespace monotile::cli {

namespace {

// --out is used verbatim when it names a directory component; a bare file
// name lands in $MONOTILE_OUT_DIR when that is set.  Empty means stdout.
std::string resolve_out(const std::string& out) {
    if (out.empty()) return out;
    if (out.find('/') != std::string::npos) return out;
    const char* dir = std::getenv("MONOTILE_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return out;
    return (std::filesystem::path(dir) / out).string();
}

void write_artifact(const std::string& out, const std::string& bytes) {
    if (out.empty()) {
        std::cout << bytes;
        return;
    }
    std::string path = resolve_out(out);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open output file: " + path);
    f << bytes;
    if (!f) throw ParseError("failed writing output file: " + path);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

ColouredCompleteGraph load_graph(const std::string& path) {
    std::string text = slurp(path);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return graph_from_json(text);
    return graph_from_text(text);
}

SequenceSpec make_spec(const std::string& spec_str, int delta) {
    SequenceSpec spec = SequenceSpec::parse(spec_str);
    if (delta > 0) spec.delta = delta;
    return spec;
}

int parse_one_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " value: " + s);
    }
}

// "8" | "2,3" | "50..400" | "50..400..25".  An open range defaults to eight
// evenly spaced points so sweeps stay bounded.
std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        std::size_t dots = piece.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_one_int(piece, what));
            continue;
        }
        int lo = parse_one_int(piece.substr(0, dots), what);
        std::string rest = piece.substr(dots + 2);
        std::size_t dots2 = rest.find("..");
        int hi = parse_one_int(dots2 == std::string::npos ? rest : rest.substr(0, dots2), what);
        int step = dots2 == std::string::npos ? std::max(1, (hi - lo) / 7)
                                              : parse_one_int(rest.substr(dots2 + 2), what);
        if (step < 1) throw ParseError(std::string("bad ") + what + " range step in: " + piece);
        if (hi < lo) throw ParseError(std::string("bad ") + what + " range in: " + piece);
        for (int v = lo; v <= hi; v += step) out.push_back(v);
    }
    if (out.empty()) throw ParseError(std::string("empty ") + what + " list: " + text);
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void record(const std::string& cmd, std::uint64_t seed, double wall_ms,
            const std::string& out, const std::string& extra) {
    std::cerr << "[monotile] cmd=" << cmd << " seed=" << seed << " wall_ms=" << std::fixed
              << std::setprecision(1) << wall_ms << " out=" << (out.empty() ? "-" : out);
    if (!extra.empty()) std::cerr << ' ' << extra;
    std::cerr << '\n';
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

struct GenOpts {
    int n = 0;
    int r = 2;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string out;
};

int cmd_gen(const GenOpts& o) {
    Timer t;
    ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(o.n, o.r, o.seed);
    std::string bytes = o.format == "json" ? graph_to_json(g) : graph_to_text(g);
    write_artifact(o.out, bytes);
    record("gen", o.seed, t.ms(), o.out, "digest=" + hex_digest(g.digest()));
    return 0;
}

struct TileOpts {
    std::string in;
    int n = 0;
    int r = 2;
    std::string spec_str = "path";
    int delta = 0;
    std::string mode = "practical";
    std::uint64_t seed = 0;
    long long budget = 0;
    std::string out;
};

PipelineParams make_params(const std::string& mode, std::uint64_t seed, long long budget) {
    PipelineParams params;
    params.mode = mode == "faithful" ? PipelineMode::faithful : PipelineMode::practical;
    params.seed = seed;
    if (budget > 0) params.good.census_cap = budget;
    return params;
}

int cmd_tile(const TileOpts& o) {
    Timer t;
    ColouredCompleteGraph g;
    if (!o.in.empty()) {
        g = load_graph(o.in);
    } else {
        if (o.n < 1) throw ParseError("tile needs --in or --n >= 1");
        g = ColouredCompleteGraph::uniform_random(o.n, o.r, o.seed);
    }
    SequenceSpec spec = make_spec(o.spec_str, o.delta);
    TileResult res = tile(g, spec, make_params(o.mode, o.seed, o.budget));
    write_artifact(o.out, tiling_to_json(g.r(), res));
    record("tile", o.seed, t.ms(), o.out,
           "size=" + std::to_string(res.metrics.size) + " path=" + res.metrics.path);
    return 0;
}

struct VerifyOpts {
    std::string graph;
    std::string tiling;
};

int cmd_verify(const VerifyOpts& o) {
    Timer t;
    ColouredCompleteGraph g = load_graph(o.graph);
    ParsedTiling pt = tiling_from_json(slurp(o.tiling));
    std::vector<std::string> violations;
    if (pt.tiling.n != g.n())
        violations.push_back("tiling is over n=" + std::to_string(pt.tiling.n) +
                             " but colouring has n=" + std::to_string(g.n()));
    if (pt.r != g.r())
        violations.push_back("tiling claims r=" + std::to_string(pt.r) + " but colouring has r=" +
                             std::to_string(g.r()));
    if (pt.metrics_size != 0 && pt.metrics_size != pt.tiling.tiles.size())
        violations.push_back("metrics.size=" + std::to_string(pt.metrics_size) +
                             " does not match " + std::to_string(pt.tiling.tiles.size()) +
                             " tiles");
    if (violations.empty()) {
        VerifyReport rep = verify_tiling(g, pt.tiling.spec, pt.tiling);
        violations = rep.violations;
    }
    record("verify", 0, t.ms(), "", "violations=" + std::to_string(violations.size()));
    if (violations.empty()) {
        std::cout << "PASS: " << pt.tiling.tiles.size() << " tiles cover K_" << g.n() << '\n';
        return 0;
    }
    std::cout << "FAIL: " << violations.size() << " violation(s)\n";
    for (const std::string& v : violations) std::cout << "  - " << v << '\n';
    return 1;
}

struct OracleOpts {
    std::string in;
    int n = 0;
    int r = 2;
    std::string spec_str = "path";
    int delta = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    long long budget = 20'000'000;
    std::string out;
};

int cmd_oracle(const OracleOpts& o) {
    Timer t;
    SequenceSpec spec = make_spec(o.spec_str, o.delta);
    std::vector<SweepRow> rows;
    if (!o.in.empty()) {
        ColouredCompleteGraph g = load_graph(o.in);
        OracleResult res = exact_min_tiling(g, spec, o.budget);
        SweepRow row;
        row.instance = 0;
        row.digest = res.instance_digest;
        row.n = g.n();
        row.r = g.r();
        row.min_size = res.min_size;
        row.optimal = res.optimal;
        rows.push_back(row);
    } else {
        if (o.n < 1) throw ParseError("oracle needs --in or --n >= 1");
        rows = exact_sweep(o.n, o.r, spec, o.samples, o.seed, o.budget);
    }
    write_artifact(o.out, sweep_csv(rows, spec));
    record("oracle", o.seed, t.ms(), o.out, "rows=" + std::to_string(rows.size()));
    return 0;
}

struct BenchOpts {
    std::string n_list = "50..400";
    std::string r_list = "2";
    std::string delta_list = "2";
    std::string spec_list = "path";
    int seeds = 8;
    std::uint64_t seed = 0;
    std::string mode = "practical";
    long long budget = 0;
    int jobs = 0;
    std::string out;
};

struct BenchRow {
    std::string spec;
    int r = 0;
    int delta = 0;
    int n = 0;
    std::uint64_t seed = 0;
    std::size_t size = 0;
    double bound = 0.0;
    std::string path;
    double fit = 0.0;
};

int cmd_bench(const BenchOpts& o) {
    Timer t;
    if (o.seeds < 1) throw ParseError("--seeds must be >= 1");
    std::vector<int> ns = parse_int_list(o.n_list, "n");
    std::vector<int> rs = parse_int_list(o.r_list, "r");
    std::vector<int> deltas = parse_int_list(o.delta_list, "delta");
    std::vector<std::string> specs;
    {
        std::istringstream in(o.spec_list);
        std::string piece;
        while (std::getline(in, piece, ',')) specs.push_back(piece);
        if (specs.empty()) throw ParseError("empty --spec list");
    }

    struct Job {
        SequenceSpec spec;
        int r, n;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    SplitRng master(o.seed);
    for (const std::string& s : specs)
        for (int r : rs)
            for (int d : deltas)
                for (int n : ns)
                    for (int k = 0; k < o.seeds; ++k)
                        jobs.push_back(Job{make_spec(s, d), r, n,
                                           master.sub("bench", jobs.size()).seed()});

    std::vector<BenchRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            const Job& j = jobs[i];
            ColouredCompleteGraph g = ColouredCompleteGraph::uniform_random(j.n, j.r, j.seed);
            TileResult res = tile(g, j.spec, make_params(o.mode, j.seed, o.budget));
            BenchRow& row = rows[i];
            row.spec = j.spec.to_string();
            row.r = j.r;
            row.delta = j.spec.delta_bound();
            row.n = j.n;
            row.seed = j.seed;
            row.size = res.metrics.size;
            row.bound = res.metrics.greedy_bound;
            row.path = res.metrics.path;
        }
    };
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t pool = std::min<std::size_t>(o.jobs > 0 ? o.jobs : hw, std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();

    // Least-squares fit ln(size) = alpha + beta * delta, so the CSV carries a
    // per-row exponential-in-delta reference next to the greedy bound.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const BenchRow& row : rows) {
        if (row.size < 1) continue;
        double x = row.delta, y = std::log(static_cast<double>(row.size));
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++m;
    }
    double beta = 0, alpha = m > 0 ? sy / static_cast<double>(m) : 0;
    if (m > 0) {
        double var = sxx - sx * sx / static_cast<double>(m);
        if (var > 1e-12) {
            beta = (sxy - sx * sy / static_cast<double>(m)) / var;
            alpha = (sy - beta * sx) / static_cast<double>(m);
        }
    }
    for (BenchRow& row : rows) row.fit = std::exp(alpha + beta * row.delta);

    std::ostringstream csv;
    csv << "spec,r,delta,n,seed,size,greedy_bound,exp_fit,path\n";
    csv << std::fixed << std::setprecision(3);
    for (const BenchRow& row : rows)
        csv << row.spec << ',' << row.r << ',' << row.delta << ',' << row.n << ',' << row.seed
            << ',' << row.size << ',' << row.bound << ',' << row.fit << ',' << row.path << '\n';
    write_artifact(o.out, csv.str());
    record("bench", o.seed, t.ms(), o.out,
           "rows=" + std::to_string(rows.size()) + " workers=" + std::to_string(pool));
    return 0;
}

struct PlotOpts {
    std::string in;
    std::string out;
};

int cmd_plot_data(const PlotOpts& o) {
    Timer t;
    std::istringstream in(slurp(o.in));
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty bench CSV: " + o.in);
    std::vector<std::string> header = split_csv_line(line);
    auto col = [&](const char* name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ParseError(std::string("bench CSV missing column: ") + name);
    };
    std::size_t c_spec = col("spec"), c_r = col("r"), c_delta = col("delta"), c_n = col("n"),
                c_size = col("size"), c_bound = col("greedy_bound");

    struct Agg {
        std::size_t samples = 0;
        double sum_size = 0;
        std::size_t max_size = 0;
        double bound = 0;
    };
    std::map<std::tuple<std::string, int, int, int>, Agg> groups;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() < header.size())
            throw ParseError("bench CSV line " + std::to_string(lineno) + " has " +
                             std::to_string(f.size()) + " fields, expected " +
                             std::to_string(header.size()));
        auto key = std::make_tuple(f[c_spec], parse_one_int(f[c_r], "r"),
                                   parse_one_int(f[c_delta], "delta"),
                                   parse_one_int(f[c_n], "n"));
        Agg& a = groups[key];
        std::size_t size = static_cast<std::size_t>(parse_one_int(f[c_size], "size"));
        a.samples += 1;
        a.sum_size += static_cast<double>(size);
        a.max_size = std::max(a.max_size, size);
        try {
            a.bound = std::stod(f[c_bound]);
        } catch (const std::exception&) {
            throw ParseError("bad greedy_bound value: " + f[c_bound]);
        }
    }
    std::ostringstream csv;
    csv << "spec,r,delta,n,samples,mean_size,max_size,greedy_bound\n";
    csv << std::fixed << std::setprecision(3);
    for (const auto& [key, a] : groups)
        csv << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
            << std::get<3>(key) << ',' << a.samples << ','
            << a.sum_size / static_cast<double>(a.samples) << ',' << a.max_size << ',' << a.bound
            << '\n';
    write_artifact(o.out, csv.str());
    record("plot-data", 0, t.ms(), o.out, "groups=" + std::to_string(groups.size()));
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"monochromatic tilings of coloured complete graphs"};
    app.require_subcommand(1);

    GenOpts gen;
    CLI::App* cgen = app.add_subcommand("gen", "generate a seeded uniform colouring file");
    cgen->add_option("--n", gen.n, "number of vertices")->required()->check(CLI::PositiveNumber);
    cgen->add_option("--r", gen.r, "number of colours");
    cgen->add_option("--seed", gen.seed, "instance seed");
    cgen->add_option("--format", gen.format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    cgen->add_option("--out", gen.out, "output file (default stdout)");

    TileOpts tileo;
    CLI::App* ctile = app.add_subcommand("tile", "tile a colouring, emit Tiling JSON");
    ctile->add_option("--in", tileo.in, "colouring file (text or JSON)");
    ctile->add_option("--n", tileo.n, "generate K_n instead of --in");
    ctile->add_option("--r", tileo.r, "colours for generated instance");
    ctile->add_option("--spec", tileo.spec_str, "sequence spec, e.g. path or random:D=3");
    ctile->add_option("--delta", tileo.delta, "override spec degree bound");
    ctile->add_option("--mode", tileo.mode, "faithful | practical")
        ->check(CLI::IsMember({"faithful", "practical"}));
    ctile->add_option("--seed", tileo.seed, "pipeline (and generation) seed");
    ctile->add_option("--budget", tileo.budget, "census/search budget override");
    ctile->add_option("--out", tileo.out, "output file (default stdout)");

    VerifyOpts ver;
    CLI::App* cver = app.add_subcommand("verify", "check a tiling JSON against a colouring");
    cver->add_option("--graph", ver.graph, "colouring file")->required();
    cver->add_option("--tiling", ver.tiling, "tiling JSON file")->required();

    OracleOpts ora;
    CLI::App* cora = app.add_subcommand("oracle", "exact minimum tiling sizes, CSV");
    cora->add_option("--in", ora.in, "single colouring file");
    cora->add_option("--n", ora.n, "sweep order (enumerates all colourings when r=2, n<=6)");
    cora->add_option("--r", ora.r, "colours");
    cora->add_option("--spec", ora.spec_str, "sequence spec");
    cora->add_option("--delta", ora.delta, "override spec degree bound");
    cora->add_option("--samples", ora.samples, "sampled instances (required beyond enumeration)");
    cora->add_option("--seed", ora.seed, "sampling seed");
    cora->add_option("--budget", ora.budget, "search node budget");
    cora->add_option("--out", ora.out, "output file (default stdout)");

    BenchOpts ben;
    CLI::App* cben = app.add_subcommand("bench", "sweep tile() over n/r/delta/spec/seeds, CSV");
    cben->add_option("--n", ben.n_list, "n values: 64 | 2,3,5 | 50..400[..step]");
    cben->add_option("--r", ben.r_list, "r values (same list syntax)");
    cben->add_option("--delta", ben.delta_list, "degree bounds (same list syntax)");
    cben->add_option("--spec", ben.spec_list, "comma-separated sequence specs");
    cben->add_option("--seeds", ben.seeds, "instances per parameter point");
    cben->add_option("--seed", ben.seed, "master seed for the sweep");
    cben->add_option("--mode", ben.mode, "faithful | practical")
        ->check(CLI::IsMember({"faithful", "practical"}));
    cben->add_option("--budget", ben.budget, "census/search budget override");
    cben->add_option("--jobs", ben.jobs, "worker threads (default: hardware)");
    cben->add_option("--out", ben.out, "output file (default stdout)");

    PlotOpts plot;
    CLI::App* cplot = app.add_subcommand("plot-data", "aggregate a bench CSV into series");
    cplot->add_option("--in", plot.in, "bench CSV")->required();
    cplot->add_option("--out", plot.out, "output file (default stdout)");

    int rc = 0;
    cgen->callback([&] { rc = cmd_gen(gen); });
    ctile->callback([&] { rc = cmd_tile(tileo); });
    cver->callback([&] { rc = cmd_verify(ver); });
    cora->callback([&] { rc = cmd_oracle(ora); });
    cben->callback([&] { rc = cmd_bench(ben); });
    cplot->callback([&] { rc = cmd_plot_data(plot); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}

}  // namespace monotile::cli
