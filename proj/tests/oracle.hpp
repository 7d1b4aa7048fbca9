#pragma once

// Naive reference implementations used to cross-check the library. Subspaces
// are represented as explicit element sets (sorted vectors of element
// indices), built by breadth-first closure rather than echelon bases, so the
// only code shared with the library is the scalar arithmetic.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "isoindex/skewmap.hpp"

namespace oracle {

using isoindex::RingSpec;
using isoindex::Scalar;
using isoindex::SkewBilinearMap;
using isoindex::Vec;

using ElemSet = std::vector<std::uint64_t>;  // sorted element indices

inline std::uint64_t pow_u64(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

inline Vec vec_of_index(const RingSpec& ring, std::size_t n, std::uint64_t idx) {
    std::uint64_t q = ring.order();
    Vec v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(Scalar::from_index(ring, idx % q));
        idx /= q;
    }
    return v;
}

inline std::uint64_t index_of_vec(const Vec& v) {
    std::uint64_t q = v.empty() ? 1 : v[0].ring().order();
    std::uint64_t idx = 0;
    for (std::size_t i = v.size(); i-- > 0;) idx = idx * q + v[i].index();
    return idx;
}

// phi(x, y) computed entry by entry from the Gram matrices.
inline Vec eval_map(const SkewBilinearMap& phi, const Vec& x, const Vec& y) {
    Vec out;
    for (std::size_t t = 0; t < phi.dim_v(); ++t) {
        Scalar acc = Scalar::zero(phi.ring());
        for (std::size_t i = 0; i < phi.dim_l(); ++i)
            for (std::size_t j = 0; j < phi.dim_l(); ++j)
                acc = acc + x[i] * phi.gram(t).at(i, j) * y[j];
        out.push_back(acc);
    }
    return out;
}

inline bool eval_zero(const SkewBilinearMap& phi, const Vec& x, const Vec& y) {
    for (const Scalar& s : eval_map(phi, x, y))
        if (!s.is_zero()) return false;
    return true;
}

// Closure of a set of generators under addition and scaling, as an element
// set. Generators are element indices.
inline ElemSet span_of(const RingSpec& ring, std::size_t n,
                       const std::vector<std::uint64_t>& gens) {
    std::set<std::uint64_t> elems{0};
    std::uint64_t q = ring.order();
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::uint64_t> cur(elems.begin(), elems.end());
        for (std::uint64_t e : cur) {
            Vec ve = vec_of_index(ring, n, e);
            for (std::uint64_t g : gens) {
                Vec vg = vec_of_index(ring, n, g);
                for (std::uint64_t c = 0; c < q; ++c) {
                    Vec w = isoindex::vec_add(ve, isoindex::vec_scale(Scalar::from_index(ring, c), vg));
                    if (elems.insert(index_of_vec(w)).second) grew = true;
                }
            }
        }
    }
    return ElemSet(elems.begin(), elems.end());
}

// Every subspace of ring^n, as element sets. BFS: extend each known subspace
// by each vector outside it.
inline std::vector<ElemSet> all_subspaces(const RingSpec& ring, std::size_t n) {
    std::uint64_t total = pow_u64(ring.order(), n);
    std::set<ElemSet> seen;
    std::vector<ElemSet> frontier{ElemSet{0}};
    seen.insert(frontier[0]);
    while (!frontier.empty()) {
        std::vector<ElemSet> next;
        for (const ElemSet& s : frontier) {
            for (std::uint64_t v = 1; v < total; ++v) {
                if (std::binary_search(s.begin(), s.end(), v)) continue;
                std::vector<std::uint64_t> gens(s.begin(), s.end());
                gens.push_back(v);
                ElemSet bigger = span_of(ring, n, gens);
                if (seen.insert(bigger).second) next.push_back(bigger);
            }
        }
        frontier = std::move(next);
    }
    return std::vector<ElemSet>(seen.begin(), seen.end());
}

// Isotropic: phi vanishes on all pairs of elements, diagonal included.
inline bool set_isotropic(const SkewBilinearMap& phi, const ElemSet& s) {
    const RingSpec& ring = phi.ring();
    std::size_t n = phi.dim_l();
    for (std::uint64_t a : s)
        for (std::uint64_t b : s)
            if (!eval_zero(phi, vec_of_index(ring, n, a), vec_of_index(ring, n, b)))
                return false;
    return true;
}

inline std::size_t set_rank(const RingSpec& ring, const ElemSet& s) {
    std::uint64_t q = ring.order();
    std::size_t r = 0;
    std::uint64_t sz = s.size();
    while (sz > 1) {
        sz /= q;
        ++r;
    }
    return r;
}

// Rank set and isotropy index straight from the definitions: enumerate all
// subspaces, keep the isotropic ones, drop those properly contained in a
// bigger isotropic one.
struct RankSetResult {
    std::vector<std::size_t> ranks;  // sorted, deduplicated
    std::size_t h = 0;
    std::size_t maximal_count = 0;
};

inline RankSetResult rank_set(const SkewBilinearMap& phi) {
    const RingSpec& ring = phi.ring();
    std::size_t n = phi.dim_l();
    std::vector<ElemSet> iso;
    for (const ElemSet& s : all_subspaces(ring, n))
        if (set_isotropic(phi, s)) iso.push_back(s);
    std::set<std::size_t> ranks;
    RankSetResult out;
    for (const ElemSet& s : iso) {
        bool maximal = true;
        for (const ElemSet& t : iso) {
            if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) {
            ranks.insert(set_rank(ring, s));
            ++out.maximal_count;
        }
    }
    out.ranks.assign(ranks.begin(), ranks.end());
    out.h = out.ranks.empty() ? 0 : *ranks.rbegin();
    return out;
}

}  // namespace oracle
