#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace isoindex {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class RingKind { Integers, Rationals, PrimeField, ExtField };

/// Coefficient domain: Z, Q, GF(p) with p <= 97, or GF(p^k) with p^k <= 16.
/// Extension fields carry an explicit monic irreducible modulus of degree k.
class RingSpec {
public:
    static RingSpec integers();
    static RingSpec rationals();
    static RingSpec prime_field(std::uint32_t p);
    static RingSpec ext_field(std::uint32_t p, std::uint32_t k,
                              const std::vector<std::uint32_t>& modulus);
    /// GF(p^k) with a default modulus found by exhaustive search.
    static RingSpec ext_field_default(std::uint32_t p, std::uint32_t k);

    RingKind kind() const { return kind_; }
    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    /// Modulus coefficients c0..ck, ck = 1. Empty for non-extension rings.
    const std::array<std::uint32_t, 5>& modulus() const { return modulus_; }

    bool is_field() const { return kind_ != RingKind::Integers; }
    bool is_finite() const {
        return kind_ == RingKind::PrimeField || kind_ == RingKind::ExtField;
    }
    /// 0 for Z/Q, p for finite fields.
    std::uint32_t characteristic() const { return is_finite() ? p_ : 0; }
    /// Number of elements; only valid for finite fields.
    std::uint64_t order() const;

    /// "Z", "Q", "GF(p)", "GF(p,k)".
    std::string name() const;
    static RingSpec parse(const std::string& text);

    bool operator==(const RingSpec& other) const;
    bool operator!=(const RingSpec& other) const { return !(*this == other); }

private:
    RingSpec() = default;
    RingKind kind_ = RingKind::Integers;
    std::uint32_t p_ = 0;
    std::uint32_t k_ = 0;
    std::array<std::uint32_t, 5> modulus_{};  // c0..c4, degree k_
};

bool is_prime(std::uint32_t n);
/// Irreducibility over GF(p) by trial division with all lower-degree monic
/// factors; coeffs are c0..cdeg with cdeg != 0.
bool poly_irreducible(const std::vector<std::uint32_t>& coeffs, std::uint32_t p);

/// Exact scalar in one of the supported rings. Rationals are kept in lowest
/// terms (cpp_rational normalizes); finite-field values are fully reduced.
class Scalar {
public:
    Scalar() : ring_(RingSpec::integers()), value_(BigInt(0)) {}
    Scalar(RingSpec ring, long v);
    static Scalar zero(const RingSpec& ring) { return Scalar(ring, 0); }
    static Scalar one(const RingSpec& ring) { return Scalar(ring, 1); }
    static Scalar from_int(const RingSpec& ring, const BigInt& v);
    static Scalar from_rational(const BigRat& v);
    /// Finite-field element with index i in 0..q-1 (base-p digits are the
    /// polynomial coefficients for extension fields).
    static Scalar from_index(const RingSpec& ring, std::uint64_t i);

    const RingSpec& ring() const { return ring_; }
    bool is_zero() const;
    bool is_one() const { return *this == one(ring_); }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    /// Multiplicative inverse; throws on zero or non-invertible integers.
    Scalar inverse() const;
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Index in 0..q-1 for finite-field values.
    std::uint64_t index() const;
    /// Underlying rational value for Z/Q scalars.
    BigRat rational() const;

    std::string str() const;

private:
    RingSpec ring_;
    // Integers -> BigInt; Rationals -> BigRat; PrimeField -> residue;
    // ExtField -> coefficient vector c0..c3 (length k).
    std::variant<BigInt, BigRat, std::uint32_t, std::array<std::uint32_t, 4>> value_;

    void check_same_ring(const Scalar& o) const;
};

}  // namespace isoindex
