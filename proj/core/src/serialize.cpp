#include "monotile/serialize.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

#include "monotile/errors.hpp"

namespace monotile {

namespace {

using ordered_json = nlohmann::ordered_json;

int parse_int_token(std::istringstream& in, const char* what) {
    long long v = 0;
    if (!(in >> v)) throw ParseError(std::string("missing or malformed ") + what);
    if (v < 0 || v > 1'000'000'000) throw ParseError(std::string(what) + " out of range");
    return static_cast<int>(v);
}

ordered_json parse_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

int json_int(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ParseError(std::string("missing integer field \"") + key + "\"");
    return j[key].get<int>();
}

}  // namespace

std::string graph_to_text(const ColouredCompleteGraph& g) {
    std::ostringstream out;
    out << g.n() << ' ' << g.r() << '\n';
    const auto& colours = g.colour_data();
    std::size_t i = 0;
    for (int u = 0; u + 1 < g.n(); ++u) {
        for (int v = u + 1; v < g.n(); ++v, ++i) {
            out << static_cast<int>(colours[i]);
            out << (v + 1 == g.n() ? '\n' : ' ');
        }
    }
    return out.str();
}

ColouredCompleteGraph graph_from_text(const std::string& text) {
    std::istringstream in(text);
    int n = parse_int_token(in, "n");
    int r = parse_int_token(in, "r");
    if (r < 1) throw ParseError("r must be >= 1");
    std::size_t pairs = static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    std::vector<int> colours(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        long long c = 0;
        if (!(in >> c))
            throw ParseError("expected " + std::to_string(pairs) + " colour ids, got " +
                             std::to_string(i));
        if (c < 0 || c >= r)
            throw ParseError("colour id " + std::to_string(c) + " out of range [0, " +
                             std::to_string(r) + ")");
        colours[i] = static_cast<int>(c);
    }
    long long extra = 0;
    if (in >> extra) throw ParseError("trailing tokens after " + std::to_string(pairs) + " colour ids");
    return ColouredCompleteGraph(n, r, colours);
}

std::string graph_to_json(const ColouredCompleteGraph& g) {
    ordered_json j;
    j["n"] = g.n();
    j["r"] = g.r();
    std::vector<int> colours(g.colour_data().begin(), g.colour_data().end());
    j["colours"] = colours;
    return j.dump(2) + "\n";
}

ColouredCompleteGraph graph_from_json(const std::string& text) {
    ordered_json j = parse_json(text);
    int n = json_int(j, "n");
    int r = json_int(j, "r");
    if (n < 0) throw ParseError("n must be >= 0");
    if (r < 1) throw ParseError("r must be >= 1");
    if (!j.contains("colours") || !j["colours"].is_array())
        throw ParseError("missing array field \"colours\"");
    std::size_t pairs = static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    if (j["colours"].size() != pairs)
        throw ParseError("expected " + std::to_string(pairs) + " colour ids, got " +
                         std::to_string(j["colours"].size()));
    std::vector<int> colours;
    colours.reserve(pairs);
    for (const auto& c : j["colours"]) {
        if (!c.is_number_integer()) throw ParseError("colour ids must be integers");
        int v = c.get<int>();
        if (v < 0 || v >= r)
            throw ParseError("colour id " + std::to_string(v) + " out of range [0, " +
                             std::to_string(r) + ")");
        colours.push_back(v);
    }
    return ColouredCompleteGraph(n, r, colours);
}

std::string tiling_to_json(int r, const TileResult& result) {
    const Tiling& t = result.tiling;
    ordered_json j;
    j["n"] = t.n;
    j["r"] = r;
    j["spec"] = t.spec.to_string();
    ordered_json tiles = ordered_json::array();
    for (const Embedding& e : t.tiles) {
        ordered_json tile;
        tile["colour"] = e.colour;
        tile["order"] = e.order;
        tile["vertices"] = e.vertices;
        tiles.push_back(std::move(tile));
    }
    j["tiles"] = std::move(tiles);
    ordered_json m;
    m["size"] = result.metrics.size;
    m["stages"] = result.metrics.stages;
    m["seed"] = result.metrics.seed;
    m["params-digest"] = result.metrics.params_digest;
    m["path"] = result.metrics.path;
    j["metrics"] = std::move(m);
    return j.dump(2) + "\n";
}

ParsedTiling tiling_from_json(const std::string& text) {
    ordered_json j = parse_json(text);
    ParsedTiling out;
    out.tiling.n = json_int(j, "n");
    out.r = json_int(j, "r");
    if (out.tiling.n < 0) throw ParseError("n must be >= 0");
    if (out.r < 1) throw ParseError("r must be >= 1");
    if (!j.contains("spec") || !j["spec"].is_string())
        throw ParseError("missing string field \"spec\"");
    try {
        out.tiling.spec = SequenceSpec::parse(j["spec"].get<std::string>());
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("bad spec string: ") + e.what());
    }
    if (!j.contains("tiles") || !j["tiles"].is_array())
        throw ParseError("missing array field \"tiles\"");
    for (const auto& tile : j["tiles"]) {
        Embedding e;
        e.colour = json_int(tile, "colour");
        e.order = json_int(tile, "order");
        if (e.order < 1) throw ParseError("tile order must be >= 1");
        if (e.colour >= out.r || (e.colour < 0 && e.colour != kSingletonColour))
            throw ParseError("tile colour " + std::to_string(e.colour) + " out of range");
        if (!tile.contains("vertices") || !tile["vertices"].is_array())
            throw ParseError("tile missing array field \"vertices\"");
        for (const auto& v : tile["vertices"]) {
            if (!v.is_number_integer()) throw ParseError("tile vertices must be integers");
            int vv = v.get<int>();
            if (vv < 0 || vv >= out.tiling.n)
                throw ParseError("tile vertex " + std::to_string(vv) + " out of range [0, " +
                                 std::to_string(out.tiling.n) + ")");
            e.vertices.push_back(vv);
        }
        if (e.vertices.size() != static_cast<std::size_t>(e.order))
            throw ParseError("tile order " + std::to_string(e.order) + " does not match " +
                             std::to_string(e.vertices.size()) + " vertices");
        out.tiling.tiles.push_back(std::move(e));
    }
    if (j.contains("metrics") && j["metrics"].is_object() && j["metrics"].contains("size") &&
        j["metrics"]["size"].is_number_unsigned())
        out.metrics_size = j["metrics"]["size"].get<std::size_t>();
    return out;
}

std::string hex_digest(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf);
}

}  // namespace monotile
