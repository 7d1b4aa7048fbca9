#include "isoindex/ring.hpp"

#include <functional>
#include <sstream>

namespace isoindex {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Polynomials over GF(p) as coefficient vectors c0..cdeg, trailing nonzero.
using Poly = std::vector<std::uint32_t>;

Poly poly_trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
    a = poly_trim(std::move(a));
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        std::uint32_t lead = a.back();
        // m is monic is not assumed here; scale by inverse of m's lead.
        std::uint32_t ml = m.back();
        std::uint32_t inv = 1;
        for (std::uint32_t x = 1; x < p; ++x)
            if (x * ml % p == 1) { inv = x; break; }
        std::uint32_t c = lead * inv % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i)
            a[i + shift] = (a[i + shift] + p * p - c * m[i] % p) % p;
        a = poly_trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return r;
}

// All monic polynomials over GF(p) of exact degree d, for trial division.
void for_each_monic(std::uint32_t p, std::uint32_t d,
                    const std::function<bool(const Poly&)>& fn) {
    Poly c(d + 1, 0);
    c[d] = 1;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t t = idx;
        for (std::uint32_t i = 0; i < d; ++i) {
            c[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        if (!fn(c)) return;
    }
}

}  // namespace

bool poly_irreducible(const std::vector<std::uint32_t>& coeffs, std::uint32_t p) {
    Poly f = poly_trim(coeffs);
    if (f.size() < 2) return false;  // constants are not irreducible
    std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
    for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
        bool reducible = false;
        for_each_monic(p, d, [&](const Poly& g) {
            if (poly_mod(f, g, p).empty()) {
                reducible = true;
                return false;
            }
            return true;
        });
        if (reducible) return false;
    }
    return true;
}

RingSpec RingSpec::integers() {
    RingSpec r;
    r.kind_ = RingKind::Integers;
    return r;
}

RingSpec RingSpec::rationals() {
    RingSpec r;
    r.kind_ = RingKind::Rationals;
    return r;
}

RingSpec RingSpec::prime_field(std::uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("GF(p): p must be prime, got " + std::to_string(p));
    if (p > 97) throw std::invalid_argument("GF(p): p <= 97 required");
    RingSpec r;
    r.kind_ = RingKind::PrimeField;
    r.p_ = p;
    return r;
}

RingSpec RingSpec::ext_field(std::uint32_t p, std::uint32_t k,
                             const std::vector<std::uint32_t>& modulus) {
    if (!is_prime(p)) throw std::invalid_argument("GF(p,k): p must be prime");
    if (k < 2) throw std::invalid_argument("GF(p,k): k >= 2 required");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k; ++i) q *= p;
    if (q > 16) throw std::invalid_argument("GF(p,k): p^k <= 16 required");
    if (modulus.size() != k + 1 || modulus[k] != 1)
        throw std::invalid_argument("GF(p,k): modulus must be monic of degree k");
    for (auto c : modulus)
        if (c >= p) throw std::invalid_argument("GF(p,k): modulus coefficient out of range");
    if (!poly_irreducible(modulus, p))
        throw std::invalid_argument("GF(p,k): modulus is reducible over GF(p)");
    RingSpec r;
    r.kind_ = RingKind::ExtField;
    r.p_ = p;
    r.k_ = k;
    for (std::uint32_t i = 0; i <= k; ++i) r.modulus_[i] = modulus[i];
    return r;
}

RingSpec RingSpec::ext_field_default(std::uint32_t p, std::uint32_t k) {
    std::vector<std::uint32_t> m(k + 1, 0);
    m[k] = 1;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t t = idx;
        for (std::uint32_t i = 0; i < k; ++i) {
            m[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        if (poly_irreducible(m, p)) return ext_field(p, k, m);
    }
    throw std::logic_error("no irreducible modulus found");  // unreachable for valid p,k
}

std::uint64_t RingSpec::order() const {
    if (!is_finite()) throw std::logic_error("order(): infinite ring");
    if (kind_ == RingKind::PrimeField) return p_;
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k_; ++i) q *= p_;
    return q;
}

std::string RingSpec::name() const {
    switch (kind_) {
        case RingKind::Integers: return "Z";
        case RingKind::Rationals: return "Q";
        case RingKind::PrimeField: return "GF(" + std::to_string(p_) + ")";
        case RingKind::ExtField:
            return "GF(" + std::to_string(p_) + "," + std::to_string(k_) + ")";
    }
    return "?";
}

RingSpec RingSpec::parse(const std::string& text) {
    if (text == "Z") return integers();
    if (text == "Q") return rationals();
    if (text.rfind("GF(", 0) == 0 && text.back() == ')') {
        std::string body = text.substr(3, text.size() - 4);
        auto comma = body.find(',');
        try {
            if (comma == std::string::npos) {
                return prime_field(static_cast<std::uint32_t>(std::stoul(body)));
            }
            std::uint32_t p = static_cast<std::uint32_t>(std::stoul(body.substr(0, comma)));
            std::uint32_t k = static_cast<std::uint32_t>(std::stoul(body.substr(comma + 1)));
            return ext_field_default(p, k);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("bad ring spec: " + text);
        }
    }
    throw std::invalid_argument("bad ring spec: " + text +
                                " (expected Z, Q, GF(p), or GF(p,k))");
}

bool RingSpec::operator==(const RingSpec& other) const {
    return kind_ == other.kind_ && p_ == other.p_ && k_ == other.k_ &&
           modulus_ == other.modulus_;
}

// ---- Scalar ----

Scalar::Scalar(RingSpec ring, long v) : ring_(std::move(ring)) {
    switch (ring_.kind()) {
        case RingKind::Integers: value_ = BigInt(v); break;
        case RingKind::Rationals: value_ = BigRat(v); break;
        case RingKind::PrimeField: {
            long p = ring_.p();
            value_ = static_cast<std::uint32_t>(((v % p) + p) % p);
            break;
        }
        case RingKind::ExtField: {
            long p = ring_.p();
            std::array<std::uint32_t, 4> c{};
            c[0] = static_cast<std::uint32_t>(((v % p) + p) % p);
            value_ = c;
            break;
        }
    }
}

Scalar Scalar::from_int(const RingSpec& ring, const BigInt& v) {
    switch (ring.kind()) {
        case RingKind::Integers: {
            Scalar s(ring, 0);
            s.value_ = v;
            return s;
        }
        case RingKind::Rationals: {
            Scalar s(ring, 0);
            s.value_ = BigRat(v);
            return s;
        }
        case RingKind::PrimeField:
        case RingKind::ExtField: {
            BigInt r = v % ring.p();
            if (r < 0) r += ring.p();
            return Scalar(ring, static_cast<long>(r));
        }
    }
    throw std::logic_error("unreachable");
}

Scalar Scalar::from_rational(const BigRat& v) {
    Scalar s(RingSpec::rationals(), 0);
    s.value_ = v;
    return s;
}

Scalar Scalar::from_index(const RingSpec& ring, std::uint64_t i) {
    if (!ring.is_finite()) throw std::logic_error("from_index: finite field required");
    if (ring.kind() == RingKind::PrimeField) {
        Scalar s(ring, 0);
        s.value_ = static_cast<std::uint32_t>(i % ring.p());
        return s;
    }
    std::array<std::uint32_t, 4> c{};
    for (std::uint32_t d = 0; d < ring.k(); ++d) {
        c[d] = static_cast<std::uint32_t>(i % ring.p());
        i /= ring.p();
    }
    Scalar s(ring, 0);
    s.value_ = c;
    return s;
}

bool Scalar::is_zero() const {
    switch (ring_.kind()) {
        case RingKind::Integers: return std::get<BigInt>(value_) == 0;
        case RingKind::Rationals: return std::get<BigRat>(value_) == 0;
        case RingKind::PrimeField: return std::get<std::uint32_t>(value_) == 0;
        case RingKind::ExtField: {
            for (auto c : std::get<std::array<std::uint32_t, 4>>(value_))
                if (c != 0) return false;
            return true;
        }
    }
    return false;
}

void Scalar::check_same_ring(const Scalar& o) const {
    if (ring_ != o.ring_) throw std::invalid_argument("scalar ring mismatch");
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_ring(o);
    Scalar r(ring_, 0);
    switch (ring_.kind()) {
        case RingKind::Integers:
            r.value_ = BigInt(std::get<BigInt>(value_) + std::get<BigInt>(o.value_));
            break;
        case RingKind::Rationals:
            r.value_ = BigRat(std::get<BigRat>(value_) + std::get<BigRat>(o.value_));
            break;
        case RingKind::PrimeField:
            r.value_ = (std::get<std::uint32_t>(value_) + std::get<std::uint32_t>(o.value_)) % ring_.p();
            break;
        case RingKind::ExtField: {
            auto a = std::get<std::array<std::uint32_t, 4>>(value_);
            auto b = std::get<std::array<std::uint32_t, 4>>(o.value_);
            std::array<std::uint32_t, 4> c{};
            for (int i = 0; i < 4; ++i) c[i] = (a[i] + b[i]) % ring_.p();
            r.value_ = c;
            break;
        }
    }
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r(ring_, 0);
    switch (ring_.kind()) {
        case RingKind::Integers: r.value_ = BigInt(-std::get<BigInt>(value_)); break;
        case RingKind::Rationals: r.value_ = BigRat(-std::get<BigRat>(value_)); break;
        case RingKind::PrimeField:
            r.value_ = (ring_.p() - std::get<std::uint32_t>(value_)) % ring_.p();
            break;
        case RingKind::ExtField: {
            auto a = std::get<std::array<std::uint32_t, 4>>(value_);
            std::array<std::uint32_t, 4> c{};
            for (int i = 0; i < 4; ++i) c[i] = (ring_.p() - a[i]) % ring_.p();
            r.value_ = c;
            break;
        }
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_ring(o);
    Scalar r(ring_, 0);
    switch (ring_.kind()) {
        case RingKind::Integers:
            r.value_ = BigInt(std::get<BigInt>(value_) * std::get<BigInt>(o.value_));
            break;
        case RingKind::Rationals:
            r.value_ = BigRat(std::get<BigRat>(value_) * std::get<BigRat>(o.value_));
            break;
        case RingKind::PrimeField:
            r.value_ = std::get<std::uint32_t>(value_) * std::get<std::uint32_t>(o.value_) % ring_.p();
            break;
        case RingKind::ExtField: {
            auto a = std::get<std::array<std::uint32_t, 4>>(value_);
            auto b = std::get<std::array<std::uint32_t, 4>>(o.value_);
            const std::uint32_t p = ring_.p();
            const std::uint32_t k = ring_.k();
            std::array<std::uint32_t, 8> prod{};
            for (std::uint32_t i = 0; i < k; ++i)
                for (std::uint32_t j = 0; j < k; ++j)
                    prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            // reduce by the monic modulus
            for (int d = 2 * static_cast<int>(k) - 2; d >= static_cast<int>(k); --d) {
                std::uint32_t c = prod[d];
                if (c == 0) continue;
                prod[d] = 0;
                for (std::uint32_t i = 0; i < k; ++i) {
                    std::uint32_t sub = c * ring_.modulus()[i] % p;
                    prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
                }
            }
            std::array<std::uint32_t, 4> c{};
            for (std::uint32_t i = 0; i < k; ++i) c[i] = prod[i];
            r.value_ = c;
            break;
        }
    }
    return r;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    switch (ring_.kind()) {
        case RingKind::Integers: {
            const BigInt& v = std::get<BigInt>(value_);
            if (v == 1 || v == -1) return *this;
            throw std::domain_error("non-unit integer has no inverse");
        }
        case RingKind::Rationals: {
            Scalar r(ring_, 0);
            r.value_ = BigRat(BigRat(1) / std::get<BigRat>(value_));
            return r;
        }
        case RingKind::PrimeField: {
            std::uint32_t a = std::get<std::uint32_t>(value_);
            for (std::uint32_t x = 1; x < ring_.p(); ++x)
                if (a * x % ring_.p() == 1) {
                    Scalar r(ring_, 0);
                    r.value_ = x;
                    return r;
                }
            throw std::logic_error("unreachable");
        }
        case RingKind::ExtField: {
            // q <= 16: exhaustive search
            for (std::uint64_t i = 1; i < ring_.order(); ++i) {
                Scalar cand = from_index(ring_, i);
                if ((*this * cand).is_one()) return cand;
            }
            throw std::logic_error("unreachable");
        }
    }
    throw std::logic_error("unreachable");
}

bool Scalar::operator==(const Scalar& o) const {
    return ring_ == o.ring_ && value_ == o.value_;
}

std::uint64_t Scalar::index() const {
    if (ring_.kind() == RingKind::PrimeField) return std::get<std::uint32_t>(value_);
    if (ring_.kind() == RingKind::ExtField) {
        auto c = std::get<std::array<std::uint32_t, 4>>(value_);
        std::uint64_t idx = 0;
        for (int d = static_cast<int>(ring_.k()) - 1; d >= 0; --d)
            idx = idx * ring_.p() + c[d];
        return idx;
    }
    throw std::logic_error("index(): finite field required");
}

BigRat Scalar::rational() const {
    if (ring_.kind() == RingKind::Integers) return BigRat(std::get<BigInt>(value_));
    if (ring_.kind() == RingKind::Rationals) return std::get<BigRat>(value_);
    throw std::logic_error("rational(): Z or Q required");
}

std::string Scalar::str() const {
    switch (ring_.kind()) {
        case RingKind::Integers: return std::get<BigInt>(value_).str();
        case RingKind::Rationals: {
            const BigRat& v = std::get<BigRat>(value_);
            if (denominator(v) == 1) return numerator(v).str();
            return numerator(v).str() + "/" + denominator(v).str();
        }
        case RingKind::PrimeField:
        case RingKind::ExtField:
            return std::to_string(index());
    }
    return "?";
}

}  // namespace isoindex
