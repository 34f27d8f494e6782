// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/fglss.hpp"
#include "sharpgap/error.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

using namespace sharpgap;

void GisInstance::index() {
  adjacency.assign(vertices.size(), {});
  for (auto [u, v] : edges) {
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  for (auto &a : adjacency)
    std::sort(a.begin(), a.end());
}

std::vector<std::vector<uint32_t>> GisInstance::group_members() const {
  std::vector<std::vector<uint32_t>> out(num_groups);
  for (uint32_t v = 0; v < vertices.size(); ++v)
    out[vertices[v].group].push_back(v);
  return out;
}

void GisInstance::validate() const {
  for (const auto &vx : vertices)
    if (vx.group >= num_groups)
      fail(ErrorCode::kStructural, "vertex group id beyond group count");
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (u >= v || v >= vertices.size())
      fail(ErrorCode::kStructural, "malformed edge");
    if (e > 0 && edges[e - 1] >= edges[e])
      fail(ErrorCode::kStructural, "edges not sorted and unique");
  }
  if (adjacency.size() != vertices.size())
    fail(ErrorCode::kStructural, "adjacency not indexed");
  for (const auto &members : group_members())
    for (size_t a = 0; a < members.size(); ++a)
      for (size_t b = a + 1; b < members.size(); ++b)
        if (!std::binary_search(adjacency[members[a]].begin(),
                                adjacency[members[a]].end(), members[b]))
          fail(ErrorCode::kStructural, "group is not a clique");
}

//===----------------------------------------------------------------------===//
// Construction
//===----------------------------------------------------------------------===//

GisInstance sharpgap::fglss_build(const CnfInstance &f,
                                  const FglssOptions &opts) {
  f.validate();
  GisInstance g;
  g.y_width = f.y_vars;
  g.num_groups = uint32_t(f.groups.size());
  // Per variable, the vertices assigning it 0 and 1.
  std::vector<std::vector<uint32_t>> by_value[2];
  by_value[0].resize(f.num_vars() + 1);
  by_value[1].resize(f.num_vars() + 1);

  for (uint32_t gid = 0; gid < f.groups.size(); ++gid) {
    std::vector<uint32_t> vars;
    for (uint32_t ci : f.groups[gid])
      for (int32_t lit : f.clauses[ci])
        vars.push_back(uint32_t(std::abs(lit)));
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > opts.max_group_vars)
      fail(ErrorCode::kBudget, "group " + std::to_string(gid) + " has " +
                                   std::to_string(vars.size()) +
                                   " variables, enumeration budget " +
                                   std::to_string(opts.max_group_vars));
    // Clauses as masks over the group's variable positions.
    std::vector<std::pair<uint32_t, uint32_t>> masks;
    for (uint32_t ci : f.groups[gid]) {
      uint32_t pos = 0, neg = 0;
      for (int32_t lit : f.clauses[ci]) {
        uint32_t p = uint32_t(
            std::lower_bound(vars.begin(), vars.end(), uint32_t(std::abs(lit))) -
            vars.begin());
        (lit > 0 ? pos : neg) |= 1u << p;
      }
      masks.emplace_back(pos, neg);
    }
    for (uint32_t a = 0; a < (1u << vars.size()); ++a) {
      bool ok = true;
      for (auto [pos, neg] : masks)
        if (!(a & pos) && !(~a & neg)) {
          ok = false;
          break;
        }
      if (!ok)
        continue;
      if (g.vertices.size() >= opts.max_vertices)
        fail(ErrorCode::kBudget, "vertex budget exceeded");
      uint32_t id = uint32_t(g.vertices.size());
      GisVertex vx;
      vx.group = gid;
      for (size_t p = 0; p < vars.size(); ++p) {
        uint8_t b = (a >> p) & 1;
        vx.assignment.emplace_back(vars[p], b);
        if (vars[p] <= f.y_vars)
          vx.s_pairs.emplace_back(vars[p] - 1, b);
        by_value[b][vars[p]].push_back(id);
      }
      g.vertices.push_back(std::move(vx));
    }
  }
  for (uint32_t v = 1; v <= f.num_vars(); ++v)
    for (uint32_t a : by_value[0][v])
      for (uint32_t b : by_value[1][v])
        g.edges.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.index();
  g.validate();
  return g;
}

VertexLabeling sharpgap::derive_partial(const GisInstance &g,
                                        const LinearCode &code,
                                        std::span<const uint8_t> x) {
  if (code.cn() != g.y_width)
    fail(ErrorCode::kStructural, "code length differs from the graph's |Y|");
  std::vector<uint8_t> y = encode(code, x);
  VertexLabeling pi(g.vertices.size(), -1);
  for (uint32_t v = 0; v < g.vertices.size(); ++v)
    for (auto [i, b] : g.vertices[v].s_pairs)
      if (y[i] != b) {
        pi[v] = 0;
        break;
      }
  return pi;
}

VertexLabeling sharpgap::derive_partial_tau(const GisInstance &g,
                                            const PartialAssignment &tau) {
  VertexLabeling pi(g.vertices.size(), -1);
  for (uint32_t v = 0; v < g.vertices.size(); ++v)
    for (auto [i, b] : g.vertices[v].s_pairs)
      if (i < tau.size() && tau[i] >= 0 && uint8_t(tau[i]) != b) {
        pi[v] = 0;
        break;
      }
  return pi;
}

bool sharpgap::is_independent(const GisInstance &g,
                              std::span<const uint32_t> set) {
  std::vector<uint8_t> in(g.vertices.size(), 0);
  for (uint32_t v : set) {
    if (v >= g.vertices.size() || in[v])
      return false;
    in[v] = 1;
  }
  for (auto [u, v] : g.edges)
    if (in[u] && in[v])
      return false;
  return true;
}

//===----------------------------------------------------------------------===//
// Maximum independent set
//===----------------------------------------------------------------------===//

namespace {

// Exact MIS on at most 64 vertices given as neighbor masks.
class BitmaskMis {
public:
  explicit BitmaskMis(std::vector<uint64_t> nbr) : nbr_(std::move(nbr)) {}

  uint64_t solve() {
    uint64_t all = nbr_.size() == 64 ? ~0ULL : (1ULL << nbr_.size()) - 1;
    best_ = 0;
    best_size_ = 0;
    search(all, 0, 0);
    return best_;
  }

private:
  void search(uint64_t cand, uint64_t chosen, int size) {
    if (size + std::popcount(cand) <= best_size_)
      return;
    if (!cand) {
      best_ = chosen;
      best_size_ = size;
      return;
    }
    // Branch on the lowest candidate with the most candidate neighbors;
    // a vertex with none is always taken.
    int pick = -1, pick_deg = -1;
    for (uint64_t c = cand; c;) {
      int v = std::countr_zero(c);
      c &= c - 1;
      int deg = std::popcount(nbr_[v] & cand);
      if (deg == 0) {
        search(cand & ~(1ULL << v), chosen | (1ULL << v), size + 1);
        return;
      }
      if (deg > pick_deg) {
        pick = v;
        pick_deg = deg;
      }
    }
    uint64_t bit = 1ULL << pick;
    search(cand & ~bit & ~nbr_[pick], chosen | bit, size + 1);
    search(cand & ~bit, chosen, size);
  }

  std::vector<uint64_t> nbr_;
  uint64_t best_ = 0;
  int best_size_ = 0;
};

// Exact MIS exploiting the group cliques: every independent set holds at
// most one vertex per group, so the problem is to skip as few groups as
// possible. Iterative deepening on the number of skipped groups.
class GroupMis {
public:
  GroupMis(const GisInstance &g, const std::vector<uint8_t> &usable,
           std::vector<uint8_t> decided, uint64_t node_budget)
      : g_(g), members_(g.group_members()), decided_(std::move(decided)),
        blocked_(g.vertices.size(), 0), avail_(g.num_groups, 0),
        usable_(usable), node_budget_(node_budget) {
    for (uint32_t gid = 0; gid < g.num_groups; ++gid)
      for (uint32_t v : members_[gid])
        avail_[gid] += usable_[v];
  }

  void block_neighbors(uint32_t v, int delta) {
    for (uint32_t w : g_.adjacency[v]) {
      if (!usable_[w])
        continue;
      if (delta > 0) {
        if (blocked_[w]++ == 0)
          --avail_[g_.vertices[w].group];
      } else {
        if (--blocked_[w] == 0)
          ++avail_[g_.vertices[w].group];
      }
    }
  }

  /// Minimum skips over undecided groups, with the chosen vertices.
  size_t solve(std::vector<uint32_t> &chosen) {
    size_t undecided = 0;
    for (uint8_t d : decided_)
      undecided += !d;
    for (size_t skips = 0; skips <= undecided; ++skips) {
      chosen_.clear();
      if (dfs(skips)) {
        chosen = chosen_;
        return skips;
      }
    }
    chosen.clear();
    return undecided;
  }

private:
  bool dfs(size_t skips_left) {
    if (++nodes_ > node_budget_)
      fail(ErrorCode::kBudget, "independent-set search exceeded node budget");
    uint32_t pick = UINT32_MAX, pick_avail = UINT32_MAX;
    size_t dead = 0;
    for (uint32_t gid = 0; gid < avail_.size(); ++gid) {
      if (decided_[gid])
        continue;
      if (avail_[gid] == 0)
        ++dead;
      if (avail_[gid] < pick_avail) {
        pick = gid;
        pick_avail = avail_[gid];
      }
    }
    if (pick == UINT32_MAX)
      return true;
    if (dead > skips_left)
      return false;
    decided_[pick] = 1;
    if (pick_avail > 0) {
      for (uint32_t v : members_[pick]) {
        if (!usable_[v] || blocked_[v])
          continue;
        block_neighbors(v, +1);
        chosen_.push_back(v);
        bool ok = dfs(skips_left);
        if (ok) {
          decided_[pick] = 0;
          block_neighbors(v, -1);
          return true;
        }
        chosen_.pop_back();
        block_neighbors(v, -1);
      }
    }
    bool ok = skips_left > 0 && dfs(skips_left - 1);
    decided_[pick] = 0;
    return ok;
  }

  const GisInstance &g_;
  std::vector<std::vector<uint32_t>> members_;
  std::vector<uint8_t> decided_;
  std::vector<uint32_t> blocked_;
  std::vector<uint32_t> avail_;
  const std::vector<uint8_t> &usable_;
  std::vector<uint32_t> chosen_;
  uint64_t node_budget_;
  uint64_t nodes_ = 0;
};

bool assignments_conflict(const GisVertex &a, const GisVertex &b) {
  auto i = a.assignment.begin(), j = b.assignment.begin();
  while (i != a.assignment.end() && j != b.assignment.end()) {
    if (i->first < j->first)
      ++i;
    else if (j->first < i->first)
      ++j;
    else if (i->second != j->second)
      return true;
    else
      ++i, ++j;
  }
  return false;
}

// True when, among candidates of different groups, adjacency is exactly
// assignment conflict.
bool edges_are_conflicts(const GisInstance &g,
                         const std::vector<uint32_t> &cand) {
  std::vector<uint32_t> stamp(g.vertices.size(), UINT32_MAX);
  for (size_t a = 0; a < cand.size(); ++a) {
    uint32_t u = cand[a];
    for (uint32_t w : g.adjacency[u])
      stamp[w] = u;
    for (size_t b = a + 1; b < cand.size(); ++b) {
      uint32_t v = cand[b];
      if (g.vertices[u].group == g.vertices[v].group)
        continue;
      if ((stamp[v] == u) != assignments_conflict(g.vertices[u], g.vertices[v]))
        return false;
    }
  }
  return true;
}

// Exact MIS for graphs whose edges are assignment conflicts: an independent
// set is a set of groups satisfied by one total assignment, so branch on
// variables. The bound counts groups that still have a consistent vertex.
// With no slack left every live group must be satisfied, and a group with a
// single consistent vertex fixes that vertex's variables.
class AssignmentMis {
public:
  AssignmentMis(const GisInstance &g, const std::vector<uint32_t> &cand,
                const std::vector<uint32_t> &forced, uint64_t node_budget)
      : node_budget_(node_budget) {
    std::map<uint32_t, uint32_t> dense;
    auto var_of = [&](uint32_t var) {
      auto [it, fresh] = dense.try_emplace(var, uint32_t(dense.size()));
      return it->second;
    };
    std::map<uint32_t, uint32_t> slot;
    for (uint32_t v : cand) {
      auto [it, fresh] = slot.try_emplace(g.vertices[v].group,
                                          uint32_t(groups_.size()));
      if (fresh)
        groups_.emplace_back();
      Lit lit{v, {}};
      for (auto [var, b] : g.vertices[v].assignment)
        lit.vals.push_back({var_of(var), b});
      groups_[it->second].push_back(std::move(lit));
    }
    val_.assign(dense.size(), -1);
    for (uint32_t v : forced)
      for (auto [var, b] : g.vertices[v].assignment) {
        auto it = dense.find(var);
        if (it != dense.end())
          val_[it->second] = int8_t(b);
      }
    cons_.assign(groups_.size(), 0);
    first_.assign(groups_.size(), 0);
  }

  std::vector<uint32_t> solve() {
    dfs();
    return best_set_;
  }

private:
  struct Lit {
    uint32_t vertex;
    std::vector<std::pair<uint32_t, uint8_t>> vals;
  };

  bool consistent(const Lit &l) const {
    for (auto [x, b] : l.vals)
      if (val_[x] >= 0 && val_[x] != b)
        return false;
    return true;
  }

  int64_t refresh() {
    int64_t bound = 0;
    for (size_t gi = 0; gi < groups_.size(); ++gi) {
      cons_[gi] = 0;
      for (size_t li = 0; li < groups_[gi].size(); ++li)
        if (consistent(groups_[gi][li]) && cons_[gi]++ == 0)
          first_[gi] = uint32_t(li);
      bound += cons_[gi] > 0;
    }
    return bound;
  }

  void assign(uint32_t x, uint8_t b) {
    val_[x] = int8_t(b);
    trail_.push_back(x);
  }

  void undo(size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  void dfs() {
    if (++nodes_ > node_budget_)
      fail(ErrorCode::kBudget, "independent-set search exceeded node budget");
    if (best_ == int64_t(groups_.size()))
      return;
    size_t mark = trail_.size();
    int64_t bound = refresh();
    while (bound == best_ + 1) {
      bool changed = false;
      for (size_t gi = 0; gi < groups_.size(); ++gi)
        if (cons_[gi] == 1)
          for (auto [x, b] : groups_[gi][first_[gi]].vals)
            if (val_[x] < 0) {
              assign(x, b);
              changed = true;
            }
      if (!changed)
        break;
      bound = refresh();
    }
    if (bound <= best_) {
      undo(mark);
      return;
    }
    // Branch inside the live group with the fewest consistent vertices.
    uint32_t pick_x = UINT32_MAX, pick_cons = UINT32_MAX;
    uint8_t pick_b = 0;
    for (size_t gi = 0; gi < groups_.size(); ++gi) {
      if (cons_[gi] == 0 || cons_[gi] >= pick_cons)
        continue;
      for (size_t li = first_[gi]; li < groups_[gi].size(); ++li) {
        const Lit &l = groups_[gi][li];
        if (!consistent(l))
          continue;
        auto open = std::find_if(l.vals.begin(), l.vals.end(),
                                 [&](auto p) { return val_[p.first] < 0; });
        if (open != l.vals.end()) {
          pick_x = open->first;
          pick_b = open->second;
          pick_cons = cons_[gi];
          break;
        }
      }
    }
    if (pick_x == UINT32_MAX) {
      // Every consistent vertex is fully assigned: the live groups are
      // satisfied together.
      best_ = bound;
      best_set_.clear();
      for (size_t gi = 0; gi < groups_.size(); ++gi)
        if (cons_[gi] > 0)
          best_set_.push_back(groups_[gi][first_[gi]].vertex);
      undo(mark);
      return;
    }
    for (uint8_t b : {pick_b, uint8_t(1 - pick_b)}) {
      size_t inner = trail_.size();
      assign(pick_x, b);
      dfs();
      undo(inner);
    }
    undo(mark);
  }

  std::vector<std::vector<Lit>> groups_;
  std::vector<int8_t> val_;
  std::vector<uint32_t> trail_;
  std::vector<uint32_t> cons_, first_;
  int64_t best_ = -1;
  std::vector<uint32_t> best_set_;
  uint64_t node_budget_;
  uint64_t nodes_ = 0;
};

} // namespace

MisResult sharpgap::max_independent_set(const GisInstance &g,
                                        const VertexLabeling &pi,
                                        const MisOptions &opts) {
  size_t nv = g.vertices.size();
  if (!pi.empty() && pi.size() != nv)
    fail(ErrorCode::kStructural, "labeling size differs from vertex count");
  if (g.adjacency.size() != nv)
    fail(ErrorCode::kStructural, "graph adjacency not indexed");
  auto label = [&](uint32_t v) -> int { return pi.empty() ? -1 : pi[v]; };

  std::vector<uint32_t> forced;
  for (uint32_t v = 0; v < nv; ++v)
    if (label(v) == 1)
      forced.push_back(v);
  if (!is_independent(g, forced))
    fail(ErrorCode::kInvalidArgument, "1-labeled vertices are not independent");

  std::vector<uint8_t> usable(nv, 0), hit(nv, 0);
  for (uint32_t v : forced)
    for (uint32_t w : g.adjacency[v])
      hit[w] = 1;
  for (uint32_t v = 0; v < nv; ++v)
    usable[v] = label(v) == -1 && !hit[v];

  MisResult res;
  res.vertices = forced;
  std::vector<uint32_t> cand;
  for (uint32_t v = 0; v < nv; ++v)
    if (usable[v])
      cand.push_back(v);

  if (cand.size() <= std::min<uint32_t>(opts.bitmask_limit, 64) &&
      !opts.force_group_search) {
    std::vector<uint64_t> nbr(cand.size(), 0);
    for (size_t a = 0; a < cand.size(); ++a)
      for (uint32_t w : g.adjacency[cand[a]]) {
        auto it = std::lower_bound(cand.begin(), cand.end(), w);
        if (it != cand.end() && *it == w)
          nbr[a] |= 1ULL << (it - cand.begin());
      }
    uint64_t best = BitmaskMis(std::move(nbr)).solve();
    for (uint64_t b = best; b; b &= b - 1)
      res.vertices.push_back(cand[std::countr_zero(b)]);
  } else if (opts.use_assignments && !opts.force_group_search &&
             edges_are_conflicts(g, cand)) {
    auto chosen = AssignmentMis(g, cand, forced, opts.node_budget).solve();
    res.vertices.insert(res.vertices.end(), chosen.begin(), chosen.end());
  } else {
    std::vector<uint8_t> decided(g.num_groups, 0);
    for (uint32_t v : forced)
      decided[g.vertices[v].group] = 1;
    std::vector<uint32_t> chosen;
    GroupMis(g, usable, decided, opts.node_budget).solve(chosen);
    res.vertices.insert(res.vertices.end(), chosen.begin(), chosen.end());
  }
  std::sort(res.vertices.begin(), res.vertices.end());
  res.size = res.vertices.size();
  return res;
}

std::vector<uint32_t> sharpgap::honest_assignment(const GisInstance &g,
                                                  const CnfInstance &f,
                                                  std::span<const uint8_t> z) {
  if (z.size() != f.num_vars())
    fail(ErrorCode::kStructural, "assignment width differs from variable count");
  if (f.groups.size() != g.num_groups)
    fail(ErrorCode::kStructural, "formula and graph disagree on group count");
  std::vector<uint32_t> pick(g.num_groups, UINT32_MAX);
  for (uint32_t v = 0; v < g.vertices.size(); ++v) {
    const GisVertex &vx = g.vertices[v];
    if (pick[vx.group] != UINT32_MAX)
      continue;
    bool match = true;
    for (auto [var, b] : vx.assignment)
      if ((z[var - 1] & 1) != b) {
        match = false;
        break;
      }
    if (match)
      pick[vx.group] = v;
  }
  for (uint32_t gid = 0; gid < g.num_groups; ++gid)
    if (pick[gid] == UINT32_MAX)
      fail(ErrorCode::kInvalidWitness,
           "assignment does not satisfy group " + std::to_string(gid));
  return pick;
}

//===----------------------------------------------------------------------===//
// Text format
//===----------------------------------------------------------------------===//

std::string sharpgap::format_gis(const GisInstance &g) {
  std::ostringstream os;
  os << "p gis " << g.vertices.size() << ' ' << g.edges.size() << ' '
     << g.y_width << '\n';
  os << "c groups " << g.num_groups << '\n';
  for (uint32_t v = 0; v < g.vertices.size(); ++v) {
    const GisVertex &vx = g.vertices[v];
    os << "g " << v << ' ' << vx.group << '\n';
    for (auto [var, b] : vx.assignment)
      os << "a " << v << ' ' << var << ' ' << int(b) << '\n';
    for (auto [i, b] : vx.s_pairs)
      os << "s " << v << ' ' << i << ' ' << int(b) << '\n';
  }
  for (auto [u, v] : g.edges)
    os << "e " << u << ' ' << v << '\n';
  return os.str();
}

GisInstance sharpgap::parse_gis(const std::string &text) {
  std::istringstream is(text);
  std::string line;
  size_t line_no = 0;
  auto bad = [&](const std::string &msg) {
    fail(ErrorCode::kParse, "gis line " + std::to_string(line_no) + ": " + msg);
  };
  GisInstance g;
  bool have_header = false, have_groups = false;
  uint64_t nv = 0, ne = 0;
  uint32_t max_gid = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag))
      continue;
    if (tag == "c") {
      std::string kind;
      if (ls >> kind && kind == "groups") {
        if (!(ls >> g.num_groups))
          bad("bad groups line");
        have_groups = true;
      }
      continue;
    }
    if (tag == "p") {
      std::string fmt;
      if (have_header || !(ls >> fmt >> nv >> ne >> g.y_width) || fmt != "gis")
        bad("expected 'p gis <V> <E> <ywidth>'");
      if (nv > (1u << 26) || ne > (1ull << 32))
        bad("instance too large");
      g.vertices.resize(nv);
      have_header = true;
      continue;
    }
    if (!have_header)
      bad("content before header");
    uint64_t a = 0, b = 0, c = 0;
    if (tag == "e") {
      if (!(ls >> a >> b) || a >= nv || b >= nv || a == b)
        bad("bad edge");
      g.edges.emplace_back(uint32_t(std::min(a, b)), uint32_t(std::max(a, b)));
    } else if (tag == "g") {
      if (!(ls >> a >> b) || a >= nv)
        bad("bad group tag");
      g.vertices[a].group = uint32_t(b);
      max_gid = std::max<uint32_t>(max_gid, uint32_t(b) + 1);
    } else if (tag == "s" || tag == "a") {
      if (!(ls >> a >> b >> c) || a >= nv || c > 1)
        bad("bad label line");
      if (tag == "s") {
        if (b >= g.y_width)
          bad("codeword index beyond ywidth");
        g.vertices[a].s_pairs.emplace_back(uint32_t(b), uint8_t(c));
      } else {
        g.vertices[a].assignment.emplace_back(uint32_t(b), uint8_t(c));
      }
    } else {
      bad("unknown line tag '" + tag + "'");
    }
  }
  if (!have_header)
    fail(ErrorCode::kParse, "gis: missing header");
  if (g.edges.size() != ne)
    fail(ErrorCode::kParse, "gis: edge count disagrees with header");
  if (!have_groups)
    g.num_groups = max_gid;
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  for (auto &vx : g.vertices) {
    std::sort(vx.assignment.begin(), vx.assignment.end());
    std::sort(vx.s_pairs.begin(), vx.s_pairs.end());
  }
  g.index();
  try {
    g.validate();
  } catch (const Error &e) {
    fail(ErrorCode::kParse, std::string("gis: ") + e.what());
  }
  return g;
}
