#pragma once

// Plain-text graph files and JSON label models.
//
// Graph file:
//   n m L
//   u v            (m lines, 0-based endpoints)
//   label_index    (n lines)
//   spin           (n optional lines, +1 / -1)
// Tokens are whitespace separated; a file either has all n spins or none.
//
// Label model: {"labels": [...], "mu": [...], "nu": [...]}

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sidebp/graph.hpp"
#include "sidebp/label_model.hpp"

namespace sidebp::io {

void write_graph(std::ostream& out, const LabeledGraph& graph, bool include_spins = true);
LabeledGraph read_graph(std::istream& in);

void save_graph(const std::filesystem::path& path, const LabeledGraph& graph,
                bool include_spins = true);
LabeledGraph load_graph(const std::filesystem::path& path);

std::string label_model_to_json(const LabelModel& model);
LabelModel label_model_from_json(const std::string& text);
LabelModel load_label_model(const std::filesystem::path& path);

/// One +1/-1 per line.
std::vector<Spin> read_spins(std::istream& in);
std::vector<Spin> load_spins(const std::filesystem::path& path);

}  // namespace sidebp::io
