#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace trustlink::gf {

using Element = std::uint32_t;

/// GF(2^m) in polynomial basis, 3 <= m <= 18, with full exp/log tables.
/// Immutable after construction; safe for concurrent reads.
class Field {
  public:
    /// prim_poly is the reduction polynomial as a bit mask including the x^m
    /// term (e.g. x^3+x+1 -> 0b1011). Throws std::invalid_argument if m is out
    /// of range, the mask does not have degree m, or the polynomial is not
    /// primitive (detected by the alpha cycle closing early or late).
    Field(int m, std::uint32_t prim_poly);

    int m() const noexcept { return m_; }
    std::uint32_t prim_poly() const noexcept { return prim_poly_; }
    /// Number of field elements, 2^m.
    std::uint32_t size() const noexcept { return size_; }
    /// Multiplicative group order, 2^m - 1. Also the sentinel stored in the
    /// log table for element 0.
    std::uint32_t order() const noexcept { return size_ - 1; }

    static constexpr Element add(Element a, Element b) noexcept { return a ^ b; }

    Element mul(Element a, Element b) const noexcept {
        if (a == 0 || b == 0) return 0;
        std::uint32_t s = log_[a] + log_[b];
        const std::uint32_t n = order();
        if (s >= n) s -= n;
        return exp_[s];
    }

    /// Multiplicative inverse; throws std::domain_error on 0.
    Element inv(Element a) const;

    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    /// alpha^e for any integer exponent (reduced mod 2^m - 1).
    Element alpha_pow(std::int64_t e) const noexcept {
        const std::int64_t n = order();
        std::int64_t r = e % n;
        if (r < 0) r += n;
        return exp_[static_cast<std::size_t>(r)];
    }

    std::uint32_t log(Element a) const noexcept { return log_[a]; }
    Element exp(std::uint32_t i) const noexcept { return exp_[i]; }

    const std::vector<Element>& exp_table() const noexcept { return exp_; }
    const std::vector<std::uint32_t>& log_table() const noexcept { return log_; }

  private:
    int m_;
    std::uint32_t prim_poly_;
    std::uint32_t size_;
    std::vector<Element> exp_;        // exp_[i] = alpha^i, i in [0, 2^m); last entry wraps to 1
    std::vector<std::uint32_t> log_;  // log_[0] = order() sentinel
};

/// Known primitive trinomial x^18 + x^7 + 1 used as the GF(2^18) default.
inline constexpr std::uint32_t kPrimPoly18 = 0x40081;
inline constexpr std::uint32_t kPrimPoly3 = 0b1011;   // x^3 + x + 1
inline constexpr std::uint32_t kPrimPoly4 = 0b10011;  // x^4 + x + 1

std::shared_ptr<const Field> make_field(int m, std::uint32_t prim_poly);
std::shared_ptr<const Field> default_field_18();

/// Polynomial over GF(2^m), coefficients lowest degree first. The leading
/// coefficient is nonzero unless the polynomial is the zero polynomial
/// (empty coefficient vector after normalize()).
struct Poly {
    std::vector<Element> coeffs;

    Poly() = default;
    explicit Poly(std::vector<Element> c) : coeffs(std::move(c)) {}

    bool is_zero() const noexcept { return coeffs.empty(); }
    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

    void normalize() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
};

/// Horner evaluation of p at x.
Element poly_eval(const Field& f, const Poly& p, Element x) noexcept;

Poly poly_mul(const Field& f, const Poly& a, const Poly& b);

/// Remainder of a modulo b (b nonzero). Used by test oracles and generator
/// construction checks.
Poly poly_mod(const Field& f, const Poly& a, const Poly& b);

}  // namespace trustlink::gf
