#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "infonav/io.hpp"

namespace infonav::testing {

inline std::string data_path(const std::string& name) { return std::string(INFONAV_DATA_DIR) + "/" + name; }

inline Graph karate() { return load_edge_list(data_path("karate.tsv"), EdgeListFormat::tsv); }

/// Graph from labeled weighted edges; labels numbered in first-appearance order.
inline Graph make_graph(std::initializer_list<std::tuple<std::string, std::string, double>> edges) {
  std::vector<std::string> labels;
  auto intern = [&](const std::string& s) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == s) return static_cast<Index>(i);
    labels.push_back(s);
    return static_cast<Index>(labels.size() - 1);
  };
  std::vector<WeightedEdge<double>> list;
  for (const auto& [a, b, w] : edges) {
    const Index u = intern(a);
    const Index v = intern(b);
    list.push_back({u, v, w});
  }
  return Graph::from_edges(labels, list);
}

/// a - b - t, unit weights.
inline Graph path3() { return make_graph({{"a", "b", 1.0}, {"b", "t", 1.0}}); }

/// a - b - t - d - a, unit weights.
inline Graph cycle4() { return make_graph({{"a", "b", 1.0}, {"b", "t", 1.0}, {"t", "d", 1.0}, {"d", "a", 1.0}}); }

/// Triangle a, b, t with pendant c attached to a.
inline Graph triangle_pendant() {
  return make_graph({{"a", "b", 1.0}, {"a", "t", 1.0}, {"b", "t", 1.0}, {"c", "a", 1.0}});
}

inline std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

}  // namespace infonav::testing
