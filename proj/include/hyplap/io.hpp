#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hyplap/errors.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/labels.hpp"
#include "hyplap/solver.hpp"

namespace hyplap {

/// Shortest round-trip decimal form; keeps every written file byte-stable
/// for equal inputs regardless of locale or stream state.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

inline std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) {
            ++pos;
        }
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\r') {
            ++pos;
        }
        if (pos > start) tokens.push_back(text.substr(start, pos - start));
    }
    return tokens;
}

inline std::vector<std::string_view> split_char(std::string_view text, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(text.substr(start)));
            return fields;
        }
        fields.push_back(trim(text.substr(start, pos - start)));
        start = pos + 1;
    }
}

template <typename T>
T parse_number(std::string_view token, const std::string& file, std::size_t line,
               const char* what) {
    T value{};
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end) {
        throw ParseError(file, line, std::string("expected ") + what + ", got '" +
                                         std::string(token) + "'");
    }
    return value;
}

struct LineReader {
    std::ifstream stream;
    std::string file;
    std::size_t line_number = 0;

    explicit LineReader(const std::string& path) : stream(path), file(path) {
        if (!stream) throw ParseError(path, 0, "cannot open file");
    }

    std::optional<std::string> next() {
        std::string line;
        if (!std::getline(stream, line)) return std::nullopt;
        ++line_number;
        return line;
    }
};

inline void check_stream(const std::ostream& out, const std::string& path) {
    if (!out) throw Error("cannot write '" + path + "'");
}

} // namespace detail

/// Raw content of one canonical layer file: declared node count plus
/// unvalidated hyperedges (validation happens in build_layer).
struct LayerFileData {
    std::size_t n = 0;
    std::vector<RawHyperedge> hyperedges;
};

/// Layer file grammar: first line `#nodes <n>`; afterwards each non-empty
/// line that does not start with `#` reads `<weight> <u1> ... <uk>`.
inline LayerFileData read_layer_file(const std::string& path) {
    detail::LineReader reader(path);
    const auto first = reader.next();
    if (!first) throw ParseError(path, 1, "missing '#nodes <n>' header");
    {
        const auto tokens = detail::split_whitespace(*first);
        if (tokens.size() != 2 || tokens[0] != "#nodes") {
            throw ParseError(path, 1, "first line must be '#nodes <n>'");
        }
        LayerFileData data;
        data.n = detail::parse_number<std::size_t>(tokens[1], path, 1, "node count");
        while (const auto line = reader.next()) {
            const auto text = detail::trim(*line);
            if (text.empty() || text.front() == '#') continue;
            const auto tokens2 = detail::split_whitespace(text);
            if (tokens2.size() < 2) {
                throw ParseError(path, reader.line_number,
                                 "expected '<weight> <u1> ... <uk>' with at least one node");
            }
            RawHyperedge edge;
            edge.first =
                detail::parse_number<double>(tokens2[0], path, reader.line_number, "edge weight");
            for (std::size_t k = 1; k < tokens2.size(); ++k) {
                edge.second.push_back(detail::parse_number<std::int64_t>(
                    tokens2[k], path, reader.line_number, "node id"));
            }
            data.hyperedges.push_back(std::move(edge));
        }
        return data;
    }
}

inline void write_layer_file(std::ostream& out, const Layer& layer, std::size_t n,
                             const std::vector<std::string>& comments = {}) {
    out << "#nodes " << n << "\n";
    for (const std::string& comment : comments) out << "# " << comment << "\n";
    for (const Hyperedge& edge : layer.hyperedges) {
        out << format_double(edge.weight);
        for (const std::size_t node : edge.nodes) out << ' ' << node;
        out << "\n";
    }
}

struct ManifestEntry {
    std::string path; // resolved against the manifest directory
    double lambda = 0.0;
};

/// Manifest grammar: one `<layer-file-path> <lambda>` per non-comment line.
inline std::vector<ManifestEntry> read_manifest(const std::string& path) {
    detail::LineReader reader(path);
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<ManifestEntry> entries;
    while (const auto line = reader.next()) {
        const auto text = detail::trim(*line);
        if (text.empty() || text.front() == '#') continue;
        const auto tokens = detail::split_whitespace(text);
        if (tokens.size() < 2) {
            throw ParseError(path, reader.line_number, "expected '<layer-file> <lambda>'");
        }
        ManifestEntry entry;
        entry.lambda = detail::parse_number<double>(tokens.back(), path, reader.line_number,
                                                    "layer weight lambda");
        const std::size_t path_end =
            static_cast<std::size_t>(tokens[tokens.size() - 2].data() + tokens[tokens.size() - 2].size() -
                                     text.data());
        std::filesystem::path layer_path(std::string(detail::trim(text.substr(0, path_end))));
        if (layer_path.is_relative()) layer_path = base / layer_path;
        entry.path = layer_path.lexically_normal().string();
        entries.push_back(std::move(entry));
    }
    if (entries.empty()) throw ParseError(path, reader.line_number, "manifest lists no layers");
    return entries;
}

struct LoadedGraph {
    MultilayerHypergraph graph;
    std::vector<double> lambdas;
    std::vector<std::string> warnings;
};

/// Read every layer named by a manifest. All layers must declare the same
/// node count.
inline LoadedGraph load_graph(const std::string& manifest_path) {
    LoadedGraph loaded;
    const auto entries = read_manifest(manifest_path);
    for (const ManifestEntry& entry : entries) {
        const LayerFileData data = read_layer_file(entry.path);
        if (loaded.lambdas.empty()) {
            loaded.graph.n = data.n;
        } else if (data.n != loaded.graph.n) {
            throw DimensionError("layer '" + entry.path + "' declares " + std::to_string(data.n) +
                                 " nodes but the first layer declared " +
                                 std::to_string(loaded.graph.n));
        }
        loaded.graph.layers.push_back(
            build_layer(data.hyperedges, data.n, &loaded.warnings));
        loaded.lambdas.push_back(entry.lambda);
    }
    return loaded;
}

/// Ground-truth CSV: `node_id,class_id` rows, optional header line, `#`
/// comments allowed. Nodes absent from the file stay unlabeled.
inline std::vector<int> read_labels_csv(const std::string& path, std::size_t n) {
    detail::LineReader reader(path);
    std::vector<int> labels(n, kUnknownClass);
    std::vector<char> seen(n, 0);
    while (const auto line = reader.next()) {
        const auto text = detail::trim(*line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = detail::split_char(text, ',');
        if (fields.size() != 2) {
            throw ParseError(path, reader.line_number, "expected 'node_id,class_id'");
        }
        if (fields[0] == "node_id") continue; // header row
        const auto node =
            detail::parse_number<std::int64_t>(fields[0], path, reader.line_number, "node id");
        const auto cls =
            detail::parse_number<int>(fields[1], path, reader.line_number, "class id");
        if (node < 0 || static_cast<std::size_t>(node) >= n) {
            throw ParseError(path, reader.line_number,
                             "node id " + std::to_string(node) + " outside [0, " +
                                 std::to_string(n) + ")");
        }
        if (seen[static_cast<std::size_t>(node)]) {
            throw ParseError(path, reader.line_number,
                             "duplicate row for node " + std::to_string(node));
        }
        seen[static_cast<std::size_t>(node)] = 1;
        labels[static_cast<std::size_t>(node)] = cls;
    }
    return labels;
}

inline void write_labels_csv(std::ostream& out, const std::vector<int>& labels,
                             const std::vector<std::string>& comments = {}) {
    for (const std::string& comment : comments) out << "# " << comment << "\n";
    out << "node_id,class_id\n";
    for (std::size_t u = 0; u < labels.size(); ++u) {
        out << u << ',' << labels[u] << "\n";
    }
}

/// Observed-set CSV: one node id per non-comment line (a header line
/// `node_id` is tolerated).
inline std::vector<std::size_t> read_observed_csv(const std::string& path) {
    detail::LineReader reader(path);
    std::vector<std::size_t> observed;
    while (const auto line = reader.next()) {
        const auto text = detail::trim(*line);
        if (text.empty() || text.front() == '#' || text == "node_id") continue;
        observed.push_back(
            detail::parse_number<std::size_t>(text, path, reader.line_number, "node id"));
    }
    return observed;
}

inline void write_observed_csv(std::ostream& out, const std::vector<std::size_t>& observed,
                               const std::vector<std::string>& comments = {}) {
    for (const std::string& comment : comments) out << "# " << comment << "\n";
    out << "node_id\n";
    for (const std::size_t u : observed) out << u << "\n";
}

/// Trace CSV: `# key=value` configuration lines, then the fixed column
/// header, then one row per checkpoint.
inline void write_trace_csv(std::ostream& out, const SolverTrace& trace,
                            const std::vector<std::string>& config = {}) {
    for (const std::string& entry : config) out << "# " << entry << "\n";
    out << "method,p,seed,flops,normalized_flops,objective,accuracy\n";
    for (const Checkpoint& point : trace.checkpoints) {
        out << method_name(trace.method) << ',' << format_double(trace.p) << ',' << trace.seed
            << ',' << point.flops << ',' << format_double(point.normalized_flops) << ','
            << format_double(point.objective) << ',' << format_double(point.accuracy) << "\n";
    }
}

/// What aggregation needs back from a trace file; `instance` comes from an
/// `# instance=<tag>` header line ("default" when absent).
struct TraceFileData {
    Method method = Method::gd;
    double p = 2.0;
    std::uint64_t seed = 0;
    std::string instance = "default";
    std::vector<Checkpoint> checkpoints;
};

inline TraceFileData read_trace_csv(const std::string& path) {
    detail::LineReader reader(path);
    TraceFileData data;
    bool saw_row = false;
    while (const auto line = reader.next()) {
        const auto text = detail::trim(*line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto body = detail::trim(text.substr(1));
            constexpr std::string_view key = "instance=";
            if (body.substr(0, key.size()) == key) {
                data.instance = std::string(detail::trim(body.substr(key.size())));
            }
            continue;
        }
        if (text.substr(0, 7) == "method,") continue; // column header
        const auto fields = detail::split_char(text, ',');
        if (fields.size() != 7) {
            throw ParseError(path, reader.line_number, "expected 7 comma-separated fields");
        }
        data.method = parse_method(std::string(fields[0]));
        data.p = detail::parse_number<double>(fields[1], path, reader.line_number, "p");
        data.seed =
            detail::parse_number<std::uint64_t>(fields[2], path, reader.line_number, "seed");
        Checkpoint point;
        point.flops =
            detail::parse_number<std::uint64_t>(fields[3], path, reader.line_number, "flops");
        point.normalized_flops = detail::parse_number<double>(fields[4], path, reader.line_number,
                                                              "normalized flops");
        point.objective =
            detail::parse_number<double>(fields[5], path, reader.line_number, "objective");
        point.accuracy =
            detail::parse_number<double>(fields[6], path, reader.line_number, "accuracy");
        data.checkpoints.push_back(point);
        saw_row = true;
    }
    if (!saw_row) throw ParseError(path, reader.line_number, "trace holds no checkpoints");
    return data;
}

inline void write_assignment_csv(std::ostream& out, const std::vector<int>& assignment,
                                 const std::vector<std::string>& comments = {}) {
    write_labels_csv(out, assignment, comments);
}

/// Open `path` for writing, run `body(stream)`, and fail loudly on errors.
template <typename Body>
void write_file(const std::string& path, Body&& body) {
    std::ofstream out(path);
    detail::check_stream(out, path);
    body(out);
    out.flush();
    detail::check_stream(out, path);
}

} // namespace hyplap
