#include "mrse/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_map>

namespace mrse {

namespace {

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',' || ch == '\t' || ch == ' ') {
            if (!current.empty()) {
                fields.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(ch);
        }
    }
    if (!current.empty())
        fields.push_back(std::move(current));
    return fields;
}

std::string strip_cr(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.pop_back();
    return line;
}

bool parse_weight(const std::string &token, double &out) {
    const char *begin = token.data();
    const char *end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Reads non-comment rows, reporting 1-based line numbers.
struct RowReader {
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;

    explicit RowReader(const std::string &p) : in(p), path(p) {
        if (!in)
            throw ParseError("cannot open file: " + p);
    }

    bool next(std::vector<std::string> &fields) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty() || line[0] == '#')
                continue;
            fields = split_fields(line);
            if (fields.empty())
                continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
    }
};

struct Interner {
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::string> names;

    std::uint32_t intern(const std::string &name) {
        auto [it, inserted] = index.emplace(name, static_cast<std::uint32_t>(names.size()));
        if (inserted)
            names.push_back(name);
        return it->second;
    }
};

std::string format_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

} // namespace

MultiRelationalGraph load_edge_list(const std::string &path, const EdgeListOptions &options) {
    RowReader reader(path);
    Interner nodes;
    Interner relations;
    std::vector<RelArc> arcs;

    std::vector<std::string> fields;
    bool first_row = true;
    while (reader.next(fields)) {
        if (first_row) {
            first_row = false;
            // optional header: the first data row may name the columns
            const std::string head = lower(fields[0]);
            if (head == "src" || head == "source") {
                if (fields.size() < 3 || fields.size() > 4 || lower(fields[1]) != "dst" ||
                    lower(fields[2]) != "rel" || (fields.size() == 4 && lower(fields[3]) != "weight"))
                    reader.fail("unknown header");
                continue;
            }
        }
        if (fields.size() < 3 || fields.size() > 4)
            reader.fail("expected columns src dst rel [weight], got " + std::to_string(fields.size()));
        double weight = 1.0;
        if (fields.size() == 4 && !parse_weight(fields[3], weight))
            reader.fail("malformed weight '" + fields[3] + "'");
        if (weight < 0.0)
            reader.fail("negative weight");
        const NodeIndex src = nodes.intern(fields[0]);
        const NodeIndex dst = nodes.intern(fields[1]);
        const RelIndex rel = relations.intern(fields[2]);
        if (options.undirected && src != dst) {
            // the same undirected edge may be listed in either orientation
            arcs.push_back({std::min(src, dst), std::max(src, dst), rel, weight});
        } else {
            arcs.push_back({src, dst, rel, weight});
        }
    }
    if (arcs.empty())
        throw ParseError(path + ": no arcs");
    if (options.undirected) {
        std::vector<RelArc> mirrored;
        mirrored.reserve(arcs.size() * 2);
        for (const auto &a : arcs) {
            mirrored.push_back(a);
            if (a.src != a.dst)
                mirrored.push_back({a.dst, a.src, a.rel, a.weight});
        }
        arcs = std::move(mirrored);
    }
    const std::size_t node_count = nodes.names.size();
    const std::size_t relation_count = relations.names.size();
    return MultiRelationalGraph(node_count, relation_count, std::move(arcs), !options.undirected,
                                std::move(nodes.names), std::move(relations.names));
}

void write_edge_list(const MultiRelationalGraph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open file for writing: " + path);
    std::vector<RelArc> arcs = g.arcs();
    std::sort(arcs.begin(), arcs.end(), [](const RelArc &a, const RelArc &b) {
        return std::make_tuple(a.rel, a.src, a.dst) < std::make_tuple(b.rel, b.src, b.dst);
    });
    for (const auto &a : arcs) {
        if (!g.directed() && a.src > a.dst)
            continue; // one row per undirected edge
        out << g.node_labels()[a.src] << '\t' << g.node_labels()[a.dst] << '\t'
            << g.relation_names()[a.rel] << '\t' << format_weight(a.weight) << '\n';
    }
    if (!out)
        throw ParseError("write failed: " + path);
}

NamedAssignment load_assignment(const std::string &path) {
    RowReader reader(path);
    NamedAssignment result;
    std::vector<std::string> fields;
    bool first_row = true;
    while (reader.next(fields)) {
        if (first_row) {
            first_row = false;
            const std::string head = lower(fields[0]);
            if (head == "node") {
                if (fields.size() != 2)
                    reader.fail("unknown header");
                continue;
            }
        }
        if (fields.size() != 2)
            reader.fail("expected columns node group, got " + std::to_string(fields.size()));
        result.nodes.push_back(fields[0]);
        result.groups.push_back(fields[1]);
    }
    if (result.nodes.empty())
        throw ParseError(path + ": no rows");
    return result;
}

namespace {

std::vector<std::uint32_t> align_groups(const NamedAssignment &rows,
                                        const std::vector<std::string> &node_labels,
                                        const std::string &path, std::size_t &group_count) {
    std::unordered_map<std::string, std::uint32_t> node_index;
    for (std::size_t i = 0; i < node_labels.size(); ++i)
        node_index.emplace(node_labels[i], static_cast<std::uint32_t>(i));

    constexpr std::uint32_t unset = 0xffffffffu;
    std::vector<std::uint32_t> group_of(node_labels.size(), unset);
    Interner groups;
    for (std::size_t i = 0; i < rows.nodes.size(); ++i) {
        auto it = node_index.find(rows.nodes[i]);
        if (it == node_index.end())
            throw ParseError(path + ": unknown node '" + rows.nodes[i] + "'");
        if (group_of[it->second] != unset)
            throw ParseError(path + ": node '" + rows.nodes[i] + "' assigned twice");
        group_of[it->second] = groups.intern(rows.groups[i]);
    }
    for (std::size_t v = 0; v < node_labels.size(); ++v)
        if (group_of[v] == unset)
            throw ParseError(path + ": node '" + node_labels[v] + "' missing");
    group_count = groups.names.size();
    return group_of;
}

} // namespace

GroundTruthLabels load_labels(const std::string &path, const std::vector<std::string> &node_labels) {
    GroundTruthLabels labels;
    labels.class_of = align_groups(load_assignment(path), node_labels, path, labels.class_count);
    return labels;
}

void write_labels(const GroundTruthLabels &labels, const std::vector<std::string> &node_labels,
                  const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open file for writing: " + path);
    for (std::size_t v = 0; v < labels.class_of.size(); ++v)
        out << node_labels[v] << '\t' << labels.class_of[v] << '\n';
    if (!out)
        throw ParseError("write failed: " + path);
}

Partition load_partition(const std::string &path, const std::vector<std::string> &node_labels) {
    std::size_t group_count = 0;
    const auto member_of = align_groups(load_assignment(path), node_labels, path, group_count);
    return Partition::from_membership(member_of);
}

void write_partition(const Partition &p, const std::vector<std::string> &node_labels, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open file for writing: " + path);
    const Partition canon = p.canonicalized();
    for (std::size_t c = 0; c < canon.communities.size(); ++c)
        for (NodeIndex v : canon.communities[c])
            out << node_labels.at(v) << '\t' << c << '\n';
    if (!out)
        throw ParseError("write failed: " + path);
}

} // namespace mrse
