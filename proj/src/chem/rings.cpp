//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <utility>
#include <vector>

#include "nomenkit/chem/graph.h"

namespace nomenkit {
namespace {

using BitRow = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<int> sorted_atoms;
  std::vector<int> bonds;
  BitRow bits;
};

bool operator<(const Candidate &a, const Candidate &b) {
  if (a.sorted_atoms.size() != b.sorted_atoms.size()) {
    return a.sorted_atoms.size() < b.sorted_atoms.size();
  }
  return a.sorted_atoms < b.sorted_atoms;
}

std::vector<bool> find_cyclic_bonds(const MolecularGraph &g) {
  const int n = g.atom_count();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> cyclic(g.bond_count(), true);
  int timer = 0;
  struct Frame {
    int atom, parent_bond;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto incident = g.bonds_of(f.atom);
      if (f.next < incident.size()) {
        const int bi = incident[f.next++];
        if (bi == f.parent_bond) continue;
        const int to = g.bond(bi).other(f.atom);
        if (disc[to] >= 0) {
          low[f.atom] = std::min(low[f.atom], disc[to]);
        } else {
          disc[to] = low[to] = timer++;
          stack.push_back({to, bi, 0});
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          Frame &parent = stack.back();
          low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
          if (low[done.atom] > disc[parent.atom]) cyclic[done.parent_bond] = false;
        }
      }
    }
  }
  return cyclic;
}

// Orders the atoms of a simple cycle given by its bonds, starting from the
// lowest atom index.
std::vector<int> walk_cycle(const MolecularGraph &g, const std::vector<int> &bonds) {
  std::vector<int> atoms;
  int start = g.atom_count();
  for (int b : bonds) start = std::min({start, g.bond(b).begin, g.bond(b).end});
  std::vector<bool> used(bonds.size(), false);
  int current = start;
  atoms.push_back(start);
  for (std::size_t step = 1; step < bonds.size(); ++step) {
    // Prefer the lower-index neighbour on the first step for a stable order.
    int pick = -1;
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      if (used[k]) continue;
      const Bond &b = g.bond(bonds[k]);
      if (b.begin != current && b.end != current) continue;
      if (pick < 0 || b.other(current) < g.bond(bonds[pick]).other(current)) {
        pick = static_cast<int>(k);
      }
    }
    used[pick] = true;
    current = g.bond(bonds[pick]).other(current);
    atoms.push_back(current);
  }
  return atoms;
}

}  // namespace

MolecularGraph perceive_rings(MolecularGraph graph) {
  const MolecularGraph &g = graph;
  const int n = g.atom_count();
  const int m = g.bond_count();
  const std::vector<bool> cyclic = find_cyclic_bonds(g);

  for (Bond &b : graph.bonds_) b.in_ring = false;
  for (Atom &a : graph.atoms_) a.rings.clear();
  graph.rings_.clear();
  graph.ring_bonds_.clear();
  graph.ring_aromatic_.clear();

  int cyclic_edges = 0;
  std::vector<bool> cyclic_atom(n, false);
  for (int b = 0; b < m; ++b) {
    if (!cyclic[b]) continue;
    ++cyclic_edges;
    cyclic_atom[g.bond(b).begin] = cyclic_atom[g.bond(b).end] = true;
  }
  // Cyclomatic number of the cyclic subgraph.
  int cyclic_atoms = static_cast<int>(std::count(cyclic_atom.begin(), cyclic_atom.end(), true));
  int components = 0;
  {
    std::vector<bool> seen(n, false);
    for (int s = 0; s < n; ++s) {
      if (!cyclic_atom[s] || seen[s]) continue;
      ++components;
      std::vector<int> stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (int b : g.bonds_of(a)) {
          if (!cyclic[b]) continue;
          const int o = g.bond(b).other(a);
          if (!seen[o]) {
            seen[o] = true;
            stack.push_back(o);
          }
        }
      }
    }
  }
  const int ring_count = cyclic_edges - cyclic_atoms + components;

  if (ring_count > 0) {
    const std::size_t words = (static_cast<std::size_t>(m) + 63) / 64;
    std::vector<Candidate> candidates;
    std::set<std::vector<int>> seen_cycles;

    // Horton candidates from shortest-path trees rooted at every cyclic atom.
    std::vector<int> dist(n), parent_bond(n);
    for (int root = 0; root < n; ++root) {
      if (!cyclic_atom[root]) continue;
      std::fill(dist.begin(), dist.end(), -1);
      std::fill(parent_bond.begin(), parent_bond.end(), -1);
      std::deque<int> queue{root};
      dist[root] = 0;
      while (!queue.empty()) {
        const int a = queue.front();
        queue.pop_front();
        // Lowest-index neighbours first makes parent choice deterministic.
        std::vector<std::pair<int, int>> next;
        for (int b : g.bonds_of(a)) {
          if (cyclic[b]) next.push_back({g.bond(b).other(a), b});
        }
        std::sort(next.begin(), next.end());
        for (auto [o, b] : next) {
          if (dist[o] >= 0) continue;
          dist[o] = dist[a] + 1;
          parent_bond[o] = b;
          queue.push_back(o);
        }
      }
      auto path = [&](int a, std::vector<int> &atoms, std::vector<int> &bonds) {
        while (a != root) {
          atoms.push_back(a);
          const int b = parent_bond[a];
          bonds.push_back(b);
          a = g.bond(b).other(a);
        }
      };
      for (int b = 0; b < m; ++b) {
        if (!cyclic[b]) continue;
        const int x = g.bond(b).begin;
        const int y = g.bond(b).end;
        if (dist[x] < 0 || dist[y] < 0) continue;
        if (parent_bond[x] == b || parent_bond[y] == b) continue;
        std::vector<int> ax, bx, ay, by;
        path(x, ax, bx);
        path(y, ay, by);
        std::vector<int> sx(ax), sy(ay);
        std::sort(sx.begin(), sx.end());
        std::sort(sy.begin(), sy.end());
        std::vector<int> common;
        std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(), std::back_inserter(common));
        if (!common.empty()) continue;
        Candidate c;
        c.sorted_atoms = ax;
        c.sorted_atoms.insert(c.sorted_atoms.end(), ay.begin(), ay.end());
        c.sorted_atoms.push_back(root);
        std::sort(c.sorted_atoms.begin(), c.sorted_atoms.end());
        c.bonds = bx;
        c.bonds.insert(c.bonds.end(), by.begin(), by.end());
        c.bonds.push_back(b);
        std::sort(c.bonds.begin(), c.bonds.end());
        if (c.bonds.size() != c.sorted_atoms.size()) continue;
        if (!seen_cycles.insert(c.bonds).second) continue;
        c.bits.assign(words, 0);
        for (int cb : c.bonds) c.bits[cb / 64] |= std::uint64_t{1} << (cb % 64);
        candidates.push_back(std::move(c));
      }
    }
    std::sort(candidates.begin(), candidates.end());

    // Greedy selection of independent cycles by GF(2) elimination. A cycle
    // independent of all strictly shorter candidates is relevant; relevant
    // cycles not picked for the SSSR form the symmetric extras.
    std::vector<BitRow> basis;
    std::vector<int> pivots;
    auto reduce = [&](BitRow row) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const int p = pivots[k];
        if (row[p / 64] >> (p % 64) & 1) {
          for (std::size_t w = 0; w < words; ++w) row[w] ^= basis[k][w];
        }
      }
      return row;
    };
    auto pivot_of = [&](const BitRow &row) {
      for (std::size_t w = 0; w < words; ++w) {
        if (row[w] != 0) return static_cast<int>(w * 64) + __builtin_ctzll(row[w]);
      }
      return -1;
    };
    std::vector<const Candidate *> extras;
    std::size_t group_begin = 0;
    while (group_begin < candidates.size()) {
      const std::size_t size = candidates[group_begin].bonds.size();
      std::size_t group_end = group_begin;
      while (group_end < candidates.size() && candidates[group_end].bonds.size() == size) ++group_end;
      // Relevance is judged against shorter cycles only.
      const std::size_t shorter = basis.size();
      std::vector<bool> relevant(group_end - group_begin, false);
      for (std::size_t i = group_begin; i < group_end; ++i) {
        BitRow row = candidates[i].bits;
        for (std::size_t k = 0; k < shorter; ++k) {
          const int p = pivots[k];
          if (row[p / 64] >> (p % 64) & 1) {
            for (std::size_t w = 0; w < words; ++w) row[w] ^= basis[k][w];
          }
        }
        relevant[i - group_begin] = pivot_of(row) >= 0;
      }
      for (std::size_t i = group_begin; i < group_end; ++i) {
        if (!relevant[i - group_begin]) continue;
        const Candidate &c = candidates[i];
        BitRow row = reduce(c.bits);
        const int pivot = pivot_of(row);
        if (pivot < 0) {
          extras.push_back(&c);
          continue;
        }
        // Keep the basis reduced so later rows eliminate in one pass.
        for (std::size_t k = 0; k < basis.size(); ++k) {
          if (basis[k][pivot / 64] >> (pivot % 64) & 1) {
            for (std::size_t w = 0; w < words; ++w) basis[k][w] ^= row[w];
          }
        }
        basis.push_back(std::move(row));
        pivots.push_back(pivot);
        graph.rings_.push_back(walk_cycle(g, c.bonds));
        graph.ring_bonds_.push_back(c.bonds);
      }
      group_begin = group_end;
      if (static_cast<int>(graph.rings_.size()) == ring_count) break;
    }
    graph.sssr_size_ = graph.rings_.size();
    for (const Candidate *c : extras) {
      graph.rings_.push_back(walk_cycle(g, c->bonds));
      graph.ring_bonds_.push_back(c->bonds);
    }
  } else {
    graph.sssr_size_ = 0;
  }

  for (int r = 0; r < static_cast<int>(graph.rings_.size()); ++r) {
    for (int a : graph.rings_[r]) graph.atoms_[a].rings.push_back(r);
    for (int b : graph.ring_bonds_[r]) graph.bonds_[b].in_ring = true;
  }
  graph.ring_aromatic_.assign(graph.rings_.size(), 0);
  graph.rings_perceived_ = true;
  graph.aromaticity_perceived_ = false;
  return graph;
}

}  // namespace nomenkit
