#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace trank {

enum class FieldKind { prime, rationals };

/// The base field: GF(p) for a prime p < 2^16, or the rationals.
class Field {
  public:
    static Field prime(std::uint32_t p);
    static Field rationals() { return Field(FieldKind::rationals, 0); }

    FieldKind kind() const { return kind_; }
    bool is_prime() const { return kind_ == FieldKind::prime; }
    /// Characteristic of a prime field; 0 for the rationals.
    std::uint32_t modulus() const { return modulus_; }
    /// "GF(5)" or "Q".
    std::string name() const;

    bool operator==(const Field &) const = default;

  private:
    Field(FieldKind k, std::uint32_t m) : kind_(k), modulus_(m) {}

    FieldKind kind_;
    std::uint32_t modulus_;
};

/// Parses "gf5", "GF(5)", "q" or "Q".
Field parse_field(std::string_view text);

void require_same_field(const Field &a, const Field &b);

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator (GMP canonical form); prime-field values are residues in [0,p).
class Scalar {
  public:
    Scalar(Field f, long long value);
    Scalar(Field f, mpq_class value);

    static Scalar zero(Field f) { return Scalar(f, 0); }
    static Scalar one(Field f) { return Scalar(f, 1); }
    static Scalar from_residue(Field f, std::uint32_t r);
    /// "n/d", "n", "-n/d" for rationals; a decimal integer for prime fields.
    static Scalar parse(Field f, std::string_view text);

    const Field &field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    /// Residue in [0,p); prime fields only.
    std::uint32_t residue() const;
    /// Rational value; rationals only.
    const mpq_class &rational() const;

    Scalar operator+(const Scalar &o) const;
    Scalar operator-(const Scalar &o) const;
    Scalar operator*(const Scalar &o) const;
    Scalar operator/(const Scalar &o) const;
    Scalar operator-() const;
    Scalar &operator+=(const Scalar &o) { return *this = *this + o; }
    Scalar &operator-=(const Scalar &o) { return *this = *this - o; }
    Scalar &operator*=(const Scalar &o) { return *this = *this * o; }
    Scalar inverse() const;

    bool operator==(const Scalar &o) const;

    /// Integers print as "n", other rationals as "n/d".
    std::string to_string() const;

  private:
    Field field_;
    std::variant<std::uint32_t, mpq_class> value_;
};

} // namespace trank
