#include "sidebp/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sidebp/error.hpp"

namespace sidebp::io {
namespace {

template <typename T>
T read_token(std::istream& in, const char* what) {
  T value{};
  if (!(in >> value)) throw ValidationError(std::string("graph file: cannot read ") + what);
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

}  // namespace

void write_graph(std::ostream& out, const LabeledGraph& graph, bool include_spins) {
  out << graph.num_vertices() << ' ' << graph.num_edges() << ' ' << graph.num_labels() << '\n';
  for (const Edge& e : graph.edge_list()) out << e.u << ' ' << e.v << '\n';
  for (LabelId l : graph.labels()) out << l << '\n';
  if (include_spins && graph.has_spins()) {
    for (Spin s : graph.spins()) out << static_cast<int>(s) << '\n';
  }
}

LabeledGraph read_graph(std::istream& in) {
  const auto n = read_token<std::uint64_t>(in, "n");
  const auto m = read_token<std::uint64_t>(in, "m");
  const auto num_labels = read_token<std::uint64_t>(in, "L");
  if (n > std::numeric_limits<std::uint32_t>::max() / 2 || num_labels == 0 ||
      num_labels > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("graph file: header out of range");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    const auto u = read_token<std::uint64_t>(in, "edge endpoint");
    const auto v = read_token<std::uint64_t>(in, "edge endpoint");
    if (u >= n || v >= n) throw ValidationError("graph file: edge endpoint out of range");
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  std::vector<LabelId> labels(n);
  for (auto& l : labels) {
    const auto value = read_token<std::uint64_t>(in, "label");
    if (value >= num_labels) throw ValidationError("graph file: label index out of range");
    l = static_cast<LabelId>(value);
  }
  std::vector<Spin> spins;
  const auto to_spin = [](long long value) {
    if (value != 1 && value != -1) throw ValidationError("graph file: spins must be +1 or -1");
    return static_cast<Spin>(value);
  };
  long long first = 0;
  if (in >> first) {
    spins.reserve(n);
    spins.push_back(to_spin(first));
    for (std::uint64_t k = 1; k < n; ++k) spins.push_back(to_spin(read_token<long long>(in, "spin")));
    std::string trailing;
    if (in >> trailing) throw ValidationError("graph file: unexpected trailing data");
  }
  return LabeledGraph(static_cast<std::uint32_t>(n), edges, std::move(labels),
                      static_cast<std::uint32_t>(num_labels), std::move(spins));
}

void save_graph(const std::filesystem::path& path, const LabeledGraph& graph, bool include_spins) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_graph(out, graph, include_spins);
}

LabeledGraph load_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_graph(in);
}

std::string label_model_to_json(const LabelModel& model) {
  nlohmann::json doc = {{"labels", model.labels()}, {"mu", model.mu()}, {"nu", model.nu()}};
  return doc.dump(2);
}

LabelModel label_model_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    return LabelModel(doc.at("labels").get<std::vector<std::string>>(),
                      doc.at("mu").get<std::vector<double>>(),
                      doc.at("nu").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("label model JSON: ") + e.what());
  }
}

LabelModel load_label_model(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return label_model_from_json(buffer.str());
}

std::vector<Spin> read_spins(std::istream& in) {
  std::vector<Spin> spins;
  long long value = 0;
  while (in >> value) {
    if (value != 1 && value != -1) throw ValidationError("spin file: entries must be +1 or -1");
    spins.push_back(static_cast<Spin>(value));
  }
  if (!in.eof()) throw ValidationError("spin file: unreadable token");
  return spins;
}

std::vector<Spin> load_spins(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_spins(in);
}

}  // namespace sidebp::io
