#ifndef PACKRIG_TESTS_GOLDEN_HPP
#define PACKRIG_TESTS_GOLDEN_HPP

#include <cmath>
#include <string>
#include <vector>

#include "packrig/packrig.hpp"

namespace packrig::testing {

struct GoldenRow {
  std::string label;
  std::vector<double> entries;
};

/** \brief The published 13x15 extended matrix of the four-disk flower, rows in printed order. */
inline std::vector<GoldenRow> flower_golden_rows() {
  const double s = std::sqrt(2.0);
  return {
      {"1-2", {0, 2, -2, 0, -2, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"2-3", {0, 0, 0, 2, 0, -2, -2, 0, -2, 0, 0, 0, 0, 0, 0}},
      {"3-4", {0, 0, 0, 0, 0, 0, 0, -2, -2, 0, 2, -2, 0, 0, 0}},
      {"1-4", {2, 0, -2, 0, 0, 0, 0, 0, 0, -2, 0, -2, 0, 0, 0}},
      {"1-5", {1, 1, -s, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -s}},
      {"2-5", {0, 0, 0, 1, -1, -s, 0, 0, 0, 0, 0, 0, -1, 1, -s}},
      {"3-5", {0, 0, 0, 0, 0, 0, -1, -1, -s, 0, 0, 0, 1, 1, -s}},
      {"4-5", {0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 1, -s, 1, -1, -s}},
      {"v1", {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"v2", {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"v3", {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
      {"v4", {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0}},
      {"v5", {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
  };
}

/** \brief Row of the extended matrix carrying a printed label ("u-v" edge or "vK" fixing row). */
inline int extended_row_of(const ExtendedRigidityMatrix& re, const PlanarEmbeddedGraph& graph,
                           const std::string& label) {
  if (label[0] == 'v') {
    const VertexId v = std::stoi(label.substr(1));
    for (std::size_t k = 0; k < re.fixed_vertices.size(); ++k)
      if (re.fixed_vertices[k] == v) return re.edge_rows + static_cast<int>(k);
    return -1;
  }
  const auto dash = label.find('-');
  return graph.edge_index(std::stoi(label.substr(0, dash)), std::stoi(label.substr(dash + 1)));
}

/** \brief Largest entry difference between the built and the printed matrix; +inf on shape mismatch. */
inline double flower_golden_deviation(const ExtendedRigidityMatrix& re, const PlanarEmbeddedGraph& graph) {
  const auto rows = flower_golden_rows();
  if (re.matrix.rows() != static_cast<Eigen::Index>(rows.size()) || re.matrix.cols() != 15) return INFINITY;
  double worst = 0.0;
  for (const auto& row : rows) {
    const int r = extended_row_of(re, graph, row.label);
    if (r < 0) return INFINITY;
    for (int c = 0; c < 15; ++c) worst = std::max(worst, std::abs(re.matrix(r, c) - row.entries[c]));
  }
  return worst;
}

}  // namespace packrig::testing

#endif  // PACKRIG_TESTS_GOLDEN_HPP
