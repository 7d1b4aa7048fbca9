#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isoindex/matrix.hpp"

namespace isoindex {

/// Enumeration guard tripped: the requested search exceeds the candidate
/// budget.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(std::uint64_t budget)
        : std::runtime_error("enumeration budget exceeded (" + std::to_string(budget) + ")"),
          budget(budget) {}
    std::uint64_t budget;
};

/// Skew-symmetric bilinear map phi: L x L -> V, stored as one n x n Gram
/// matrix per coordinate of V. In characteristic 2 the diagonal may be
/// nonzero (phi(x,x) != 0 is allowed there), so isotropy tests always include
/// the diagonal.
class SkewBilinearMap {
public:
    static SkewBilinearMap from_gram(RingSpec ring, std::size_t dim_l,
                                     std::vector<Matrix> gram);
    static SkewBilinearMap zero(const RingSpec& ring, std::size_t dim_l, std::size_t dim_v);
    /// Standard genus-g symplectic form on 2g generators, single codomain
    /// coordinate.
    static SkewBilinearMap symplectic(const RingSpec& ring, std::size_t genus);

    const RingSpec& ring() const { return ring_; }
    std::size_t dim_l() const { return dim_l_; }
    std::size_t dim_v() const { return gram_.size(); }
    const Matrix& gram(std::size_t t) const { return gram_[t]; }

    Vec evaluate(const Vec& x, const Vec& y) const;
    /// phi(v,v) = 0; trivial except in characteristic 2.
    bool diagonal_vanishes(const Vec& v) const;
    bool is_zero_map() const;

private:
    SkewBilinearMap(RingSpec ring, std::size_t dim_l, std::vector<Matrix> gram)
        : ring_(std::move(ring)), dim_l_(dim_l), gram_(std::move(gram)) {}
    RingSpec ring_;
    std::size_t dim_l_;
    std::vector<Matrix> gram_;
};

/// Submodule of L in canonical form: RREF basis rows, no zero rows.
/// Equality of subspaces is equality of canonical bases.
class Subspace {
public:
    static Subspace from_rows(const RingSpec& ring, std::size_t ambient_dim,
                              const std::vector<Vec>& rows);
    static Subspace zero(const RingSpec& ring, std::size_t ambient_dim);
    static Subspace full(const RingSpec& ring, std::size_t ambient_dim);

    const RingSpec& ring() const { return basis_.ring(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t rank() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& other) const;
    /// Reduce v against the basis (clear pivot coordinates).
    Vec reduce(const Vec& v) const;
    Subspace extended(const Vec& v) const;

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    /// Order by rank then entry indices; finite fields only.
    bool operator<(const Subspace& o) const;

private:
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// Finite set of ranks attained by maximal isotropic submodules. Invariant:
/// non-empty and either 0 is absent or the set is exactly {0}.
class RankSet {
public:
    explicit RankSet(std::vector<std::size_t> values);
    static RankSet singleton(std::size_t v) { return RankSet({v}); }

    const std::vector<std::size_t>& values() const { return values_; }
    std::size_t max() const { return values_.back(); }
    bool operator==(const RankSet& o) const { return values_ == o.values_; }
    bool operator!=(const RankSet& o) const { return !(*this == o); }
    std::string str() const;

private:
    std::vector<std::size_t> values_;
};

enum class IsotropyMethod { Bruteforce, SingleForm, Structural, BoundsGreedy };

struct IsotropyReport {
    std::size_t h_lower = 0;
    std::size_t h_upper = 0;
    std::optional<RankSet> rank_set;
    std::vector<Subspace> witnesses;
    IsotropyMethod method = IsotropyMethod::Bruteforce;
    bool exact() const { return h_lower == h_upper; }
};

struct Bounds {
    long lo = 0;
    long hi = 0;
    bool exception_applied = false;   // char 2, b1 = 1, k = 0: only hi holds
    bool radicand_negative = false;   // surjective bound undefined
};

// ---- operations on maps ----

/// ker phi = {l : phi(l, l') = 0 for all l'}, via the stacked Gram system.
/// Z maps are computed over Q.
Subspace kernel(const SkewBilinearMap& phi);

bool is_isotropic(const SkewBilinearMap& phi, const Subspace& h);

/// Solution space {v : phi(v, H) = 0} of the linear isotropy conditions.
Subspace orthogonal_space(const SkewBilinearMap& phi, const Subspace& h);

bool is_maximal_isotropic(const SkewBilinearMap& phi, const Subspace& h);

constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// All maximal isotropic subspaces over a finite field, canonical RREF,
/// sorted. DFS over RREF-canonical chains: each subspace is reached once,
/// by adding its echelon rows in pivot order.
std::vector<Subspace> enumerate_maximal_isotropic(const SkewBilinearMap& phi,
                                                  std::uint64_t budget = kDefaultBudget);

RankSet rank_set(const SkewBilinearMap& phi, std::uint64_t budget = kDefaultBudget);

IsotropyReport isotropy_index(const SkewBilinearMap& phi,
                              std::uint64_t budget = kDefaultBudget,
                              unsigned restarts = 32, std::uint64_t seed = 0);

/// Maximal isotropic witness grown from the kernel by random admissible
/// extensions; deterministic for a fixed seed.
Subspace greedy_maximal(const SkewBilinearMap& phi, std::uint64_t seed);

SkewBilinearMap direct_sum(const SkewBilinearMap& a, const SkewBilinearMap& b);

/// Kuenneth-style combination: direct sum plus the tensor block
/// phi(x,y) |-> x1 (x) y2 - y1 (x) x2 in the extra n1*n2 codomain
/// coordinates.
SkewBilinearMap product_map(const SkewBilinearMap& a, const SkewBilinearMap& b);

/// Element-wise sumset {a + b}.
RankSet rank_set_sum_law(const RankSet& s1, const RankSet& s2);

/// {1} u s1 u s2, degenerating to the other factor when one index is 0.
RankSet rank_set_product_law(const RankSet& s1, const RankSet& s2,
                             std::size_t h1, std::size_t h2);

/// Z->Q, Z->GF(p) (reduction), GF(p)->GF(p,k).
SkewBilinearMap extend_scalars(const SkewBilinearMap& phi, const RingSpec& target);

/// Betti-number bounds on the isotropy index; all comparisons in exact
/// integer arithmetic.
Bounds bounds(long b1, long b2, long k, bool char2, bool surjective);

/// Random antisymmetric Gram tensor over a finite field (char-2 diagonals
/// may be nonzero); deterministic for a fixed seed.
SkewBilinearMap random_skew_map(const RingSpec& ring, std::size_t dim_l,
                                std::size_t dim_v, std::uint64_t seed);

}  // namespace isoindex
