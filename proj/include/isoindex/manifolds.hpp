#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isoindex/skewmap.hpp"

namespace isoindex {

enum class AtomKind { Sphere, Surface, Torus, RP3, Heisenberg, KodairaThurston };
enum class NodeKind { Atom, ConnSum, Product };

/// Expression over model manifolds, closed under connected sum and direct
/// product. Torus(n) and the Kodaira-Thurston atom are kept in the tree as
/// written; evaluation normalizes them (T^n to a product of circles, KT to
/// Heisenberg x S^1).
struct ManifoldExpr {
    NodeKind node = NodeKind::Atom;
    AtomKind atom = AtomKind::Sphere;
    std::size_t param = 0;  // n for Sphere/Torus, g for Surface
    std::vector<ManifoldExpr> children;

    static ManifoldExpr sphere(std::size_t n);
    static ManifoldExpr surface(std::size_t g);
    static ManifoldExpr torus(std::size_t n);
    static ManifoldExpr rp3();
    static ManifoldExpr heisenberg();
    static ManifoldExpr kodaira_thurston();
    static ManifoldExpr conn_sum(std::vector<ManifoldExpr> children);
    static ManifoldExpr product(std::vector<ManifoldExpr> children);

    std::size_t dim() const;
    std::string str() const;
};

/// Position-annotated failure from the expression parser.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos(pos) {}
    std::size_t pos;
};

/// Grammar: S(n), Sg(g), T(n), RP3, Heis, KT; infix `x` (product) binds
/// tighter than `#` (connected sum); parentheses; whitespace ignored.
ManifoldExpr parse_expr(const std::string& text);

struct CohomologyModel {
    std::vector<std::size_t> betti;  // b_0 .. b_dim
    SkewBilinearMap phi;             // cup product on H^1, codomain rank b_2
};

struct EvalResult {
    std::size_t b1 = 0;
    RankSet rank_set{{0}};
    std::size_t h = 0;
    std::optional<std::size_t> corank;
    std::vector<std::string> exceptions_applied;
};

struct BoundsCheck {
    long lo = 0, hi = 0;
    std::size_t h = 0;
    bool exception = false;
    bool surjective = false;
    bool pass = false;
};

/// Cup-product model of a single atom over the given ring. Heisenberg (and
/// KT) are defined over Z/Q only.
CohomologyModel atom_model(AtomKind atom, std::size_t param, const RingSpec& ring);

/// Betti vector: atoms from the model table, connected sums add middle
/// degrees, products convolve.
std::vector<std::size_t> betti(const ManifoldExpr& expr, const RingSpec& ring);

/// Exact rank set and isotropy index by the connected-sum and product laws.
EvalResult eval_structural(const ManifoldExpr& expr, const RingSpec& ring);

/// Explicit Gram tensor with the formal codomain (direct-sum blocks plus
/// Kuenneth tensor blocks). Z compiles over Q.
SkewBilinearMap compile(const ManifoldExpr& expr, const RingSpec& ring);

/// Connected sum of T^{m_i} x S^{n-m_i} with balanced partition of b into h
/// parts; attains isotropy index h and first Betti number b over any ring of
/// characteristic != 2. (0,0) -> S^3; (0,1) -> RP3, valid over GF(2) only.
ManifoldExpr realize(std::size_t h, std::size_t b);

/// Dimension-3 realization over GF(2): h copies of S^1 x S^2 and b-h copies
/// of RP3.
ManifoldExpr realize_dim3_mod2(std::size_t h, std::size_t b);

/// Connected-sum-of-products expression whose rank set over characteristic
/// != 2 is exactly the given set (min >= 1); {0} is realized by S^3.
ManifoldExpr realize_rank_set(const RankSet& s);

/// Co-rank of the fundamental group: atom table, sums add, products take max.
std::size_t corank(const ManifoldExpr& expr);

/// Betti-number bounds applied with the true b2, k from the compiled kernel,
/// and surjectivity of the compiled cup product.
BoundsCheck bounds_check(const ManifoldExpr& expr, const RingSpec& ring);

}  // namespace isoindex
