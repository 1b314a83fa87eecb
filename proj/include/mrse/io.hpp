/*
 * io.hpp
 *
 * Text-file ingestion and export. Edge lists are UTF-8, tab- or
 * comma-separated, columns `src dst rel [weight]`, with `#` comment lines and
 * an optional header. Label files use `node class`, partition files
 * `node community`, under the same delimiter rules.
 */

#pragma once

#include <string>
#include <vector>

#include "mrse/graph.hpp"

namespace mrse {

struct EdgeListOptions {
    bool undirected = false; // mirror every arc
};

MultiRelationalGraph load_edge_list(const std::string &path, const EdgeListOptions &options = {});
void write_edge_list(const MultiRelationalGraph &g, const std::string &path);

/// Node-to-group file decoded as raw label pairs, before any graph alignment.
struct NamedAssignment {
    std::vector<std::string> nodes;
    std::vector<std::string> groups;
};

NamedAssignment load_assignment(const std::string &path);

GroundTruthLabels load_labels(const std::string &path, const std::vector<std::string> &node_labels);
void write_labels(const GroundTruthLabels &labels, const std::vector<std::string> &node_labels,
                  const std::string &path);

Partition load_partition(const std::string &path, const std::vector<std::string> &node_labels);
void write_partition(const Partition &p, const std::vector<std::string> &node_labels, const std::string &path);

} // namespace mrse
