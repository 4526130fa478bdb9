#ifndef TOPOREG_PERSISTENCE_HPP
#define TOPOREG_PERSISTENCE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

#include "toporeg/alpha.hpp"
#include "toporeg/errors.hpp"

namespace toporeg {

struct PersistencePair {
    int dimension = 0;
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();
    int birth_simplex = -1;
    int death_simplex = -1; // -1 when essential

    bool essential() const { return !std::isfinite(death); }
    double persistence() const { return death - birth; }
};

struct PersistenceDiagram {
    int dimension = 0;
    // Essential pairs first, then finite pairs by persistence descending;
    // ties broken by (birth asc, birth_simplex index asc).
    std::vector<PersistencePair> pairs;
};

struct PersistenceResult {
    std::vector<PersistenceDiagram> diagrams; // index = homology dimension
    // All pairings from the reduction, zero-persistence ones included; kept
    // for tie bookkeeping, not exposed in the diagrams.
    std::vector<PersistencePair> all_pairs;
    // For each cycle-creating edge simplex: the edge simplices of the cycle
    // chain at its insertion (the reduced column state).
    std::unordered_map<int, std::vector<int>> cycle_chains;
};

namespace detail {

inline std::vector<int> xor_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace detail

// Plain boundary-matrix column reduction over F2, columns in filtration
// order. Returns diagrams for dimensions 0..max_dim plus pairing metadata.
inline PersistenceResult compute_persistence(const Filtration& f, int max_dim = 1) {
    const std::size_t S = f.simplices.size();
    std::vector<int> pivot_owner(S, -1);          // row position -> column position
    std::vector<std::vector<int>> reduced(S);     // surviving columns (by position)
    std::vector<std::vector<int>> chain(S);       // edge columns: accumulated edge simplices
    std::vector<char> creator(S, 0);

    PersistenceResult res;
    res.diagrams.resize(max_dim + 1);
    for (int d = 0; d <= max_dim; ++d) res.diagrams[d].dimension = d;

    for (std::size_t pos = 0; pos < S; ++pos) {
        const std::size_t s = f.order[pos];
        const Simplex& sx = f.simplices[s];

        std::vector<int> col;
        if (sx.dimension == 1) {
            col = {static_cast<int>(f.rank[sx.vertices[0]]),
                   static_cast<int>(f.rank[sx.vertices[1]])};
            chain[pos] = {static_cast<int>(s)};
        } else if (sx.dimension == 2) {
            col = {static_cast<int>(f.rank[f.edge_index(sx.vertices[0], sx.vertices[1])]),
                   static_cast<int>(f.rank[f.edge_index(sx.vertices[0], sx.vertices[2])]),
                   static_cast<int>(f.rank[f.edge_index(sx.vertices[1], sx.vertices[2])])};
        }
        std::sort(col.begin(), col.end());

        while (!col.empty()) {
            int piv = col.back();
            int owner = pivot_owner[piv];
            if (owner < 0) break;
            col = detail::xor_sorted(col, reduced[owner]);
            if (sx.dimension == 1) chain[pos] = detail::xor_sorted(chain[pos], chain[owner]);
        }

        if (col.empty()) {
            creator[pos] = 1;
            if (sx.dimension == 1)
                res.cycle_chains.emplace(static_cast<int>(s), chain[pos]);
        } else {
            int piv = col.back();
            pivot_owner[piv] = static_cast<int>(pos);
            reduced[pos] = std::move(col);

            PersistencePair pair;
            pair.dimension = sx.dimension - 1;
            pair.birth_simplex = static_cast<int>(f.order[piv]);
            pair.death_simplex = static_cast<int>(s);
            pair.birth = f.values[pair.birth_simplex];
            pair.death = f.values[pair.death_simplex];
            res.all_pairs.push_back(pair);
            if (pair.dimension <= max_dim && pair.birth < pair.death)
                res.diagrams[pair.dimension].pairs.push_back(pair);
        }
    }

    // Creators never claimed as someone's pivot row are essential classes.
    for (std::size_t pos = 0; pos < S; ++pos) {
        if (!creator[pos] || pivot_owner[pos] >= 0) continue;
        const std::size_t s = f.order[pos];
        const Simplex& sx = f.simplices[s];
        if (sx.dimension > max_dim) continue;
        PersistencePair pair;
        pair.dimension = sx.dimension;
        pair.birth_simplex = static_cast<int>(s);
        pair.birth = f.values[s];
        res.all_pairs.push_back(pair);
        res.diagrams[pair.dimension].pairs.push_back(pair);
    }

    for (auto& dgm : res.diagrams) {
        std::sort(dgm.pairs.begin(), dgm.pairs.end(),
                  [](const PersistencePair& a, const PersistencePair& b) {
                      if (a.essential() != b.essential()) return a.essential();
                      if (!a.essential() && a.persistence() != b.persistence())
                          return a.persistence() > b.persistence();
                      if (a.birth != b.birth) return a.birth < b.birth;
                      return a.birth_simplex < b.birth_simplex;
                  });
    }
    return res;
}

// Number of pairs alive at time t: birth <= t < death.
inline int betti(const PersistenceDiagram& dgm, double t) {
    int count = 0;
    for (const auto& p : dgm.pairs)
        if (p.birth <= t && t < p.death) ++count;
    return count;
}

// Vertex loop of the cycle chain created by the birth edge of the given H1
// pair. The chain must form one simple closed loop.
inline std::vector<int> representative_cycle(const Filtration& f, const PersistenceResult& res,
                                             std::size_t pair_index = 0) {
    if (res.diagrams.size() < 2 || res.diagrams[1].pairs.empty())
        fail(ErrorCode::NoCycle, "diagram has no 1-dimensional pair");
    if (pair_index >= res.diagrams[1].pairs.size())
        fail(ErrorCode::NoCycle, "pair index out of range");
    const PersistencePair& pair = res.diagrams[1].pairs[pair_index];

    auto it = res.cycle_chains.find(pair.birth_simplex);
    if (it == res.cycle_chains.end())
        fail(ErrorCode::NoCycle, "no chain recorded for the birth simplex");
    const std::vector<int>& edges = it->second;

    std::map<int, std::vector<int>> adjacency;
    for (int e : edges) {
        const Simplex& sx = f.simplices[e];
        adjacency[sx.vertices[0]].push_back(sx.vertices[1]);
        adjacency[sx.vertices[1]].push_back(sx.vertices[0]);
    }
    for (auto& [v, nbrs] : adjacency) {
        if (nbrs.size() != 2) fail(ErrorCode::NotALoop, "chain vertex without degree 2");
        std::sort(nbrs.begin(), nbrs.end());
    }

    // Walk from the lowest vertex toward its lower-indexed neighbor.
    const int start = adjacency.begin()->first;
    std::vector<int> loop{start};
    int prev = -1, cur = start;
    while (true) {
        const auto& nbrs = adjacency[cur];
        int next = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
        if (next == start) break;
        loop.push_back(next);
        prev = cur;
        cur = next;
    }
    if (loop.size() != edges.size())
        fail(ErrorCode::NotALoop, "chain is a union of multiple loops");
    return loop;
}

} // namespace toporeg

#endif
