// SPDX-License-Identifier: Apache-2.0
//
// Grouped CNF to generalized independent set: one vertex per (group,
// satisfying assignment of the group's variables), edges between vertices
// whose assignments conflict, and per-vertex codeword labels S_v.
#pragma once

#include "sharpgap/codec.hpp"
#include "sharpgap/reduce.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sharpgap {

using VarValue = std::pair<uint32_t, uint8_t>;

struct GisVertex {
  uint32_t group = 0;
  /// Full assignment of the group's variables, sorted by variable.
  std::vector<VarValue> assignment;
  /// Y-restricted part: (0-based codeword index, expected bit).
  std::vector<VarValue> s_pairs;
};

struct GisInstance {
  std::vector<GisVertex> vertices;
  /// Undirected edges (u < v), sorted and unique.
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  std::vector<std::vector<uint32_t>> adjacency;
  uint32_t y_width = 0;
  /// kappa: the group count, including groups with no vertex.
  uint32_t num_groups = 0;

  size_t num_vertices() const { return vertices.size(); }
  /// Rebuilds adjacency from edges.
  void index();
  /// Vertex ids per group.
  std::vector<std::vector<uint32_t>> group_members() const;
  /// Checks the clique-per-group property and edge sanity.
  void validate() const;
};

/// Per-vertex label: -1 unlabeled, 0 excluded, 1 forced.
using VertexLabeling = std::vector<int8_t>;

struct FglssOptions {
  uint32_t max_group_vars = 20;
  size_t max_vertices = size_t(1) << 22;
};

GisInstance fglss_build(const CnfInstance &f, const FglssOptions &opts = {});

/// pi_x: label 0 exactly when some (i, b) in S_v disagrees with ENC(x).
VertexLabeling derive_partial(const GisInstance &g, const LinearCode &code,
                              std::span<const uint8_t> x);
/// Labeling from an arbitrary Y partial assignment tau (value[i] for Y_{i+1}).
VertexLabeling derive_partial_tau(const GisInstance &g,
                                  const PartialAssignment &tau);

struct MisOptions {
  /// Graphs with at most this many candidate vertices use the bitmask search.
  uint32_t bitmask_limit = 30;
  /// Node limit for the group branch-and-bound; exceeding it is a budget error.
  uint64_t node_budget = 200'000'000;
  /// Force the group branch-and-bound even for small graphs.
  bool force_group_search = false;
  /// When the edges are exactly the conflicts between vertex assignments (as
  /// fglss_build produces), branch on variables instead of vertices.
  bool use_assignments = true;
};

struct MisResult {
  size_t size = 0;
  std::vector<uint32_t> vertices; // sorted
};

/// Maximum independent set containing every 1-labeled vertex and no
/// 0-labeled one. Throws Error(kInvalidArgument) when the 1-labels are not
/// independent, Error(kBudget) when the search exceeds its node budget.
MisResult max_independent_set(const GisInstance &g, const VertexLabeling &pi,
                              const MisOptions &opts = {});

/// Per group, the vertex agreeing with the full assignment z (value[v-1]).
std::vector<uint32_t> honest_assignment(const GisInstance &g,
                                        const CnfInstance &f,
                                        std::span<const uint8_t> z);

bool is_independent(const GisInstance &g, std::span<const uint32_t> set);

/// `p gis V E ywidth`, `c groups <kappa>`, `g v gid`, `a v var b`,
/// `s v i b`, `e u v` (0-based ids).
std::string format_gis(const GisInstance &g);
GisInstance parse_gis(const std::string &text);

} // namespace sharpgap
