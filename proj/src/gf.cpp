#include "trustlink/gf.hpp"

#include <stdexcept>

namespace trustlink::gf {

Field::Field(int m, std::uint32_t prim_poly) : m_(m), prim_poly_(prim_poly) {
    if (m < 3 || m > 18) throw std::invalid_argument("field degree m must be in 3..18");
    const std::uint32_t high_bit = 1u << m;
    if (prim_poly < high_bit || prim_poly >= (high_bit << 1))
        throw std::invalid_argument("reduction polynomial must have degree m");

    size_ = high_bit;
    exp_.assign(size_, 0);
    log_.assign(size_, order());  // log of 0 stays at the sentinel

    // Enumerate powers of alpha = x. A primitive polynomial yields every
    // nonzero element exactly once before the cycle closes at 2^m - 1.
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order(); ++i) {
        if (x == 1 && i != 0) throw std::invalid_argument("polynomial is not primitive (short alpha cycle)");
        exp_[i] = x;
        log_[x] = i;
        x <<= 1;
        if (x & high_bit) x ^= prim_poly;
    }
    if (x != 1) throw std::invalid_argument("polynomial is not primitive (cycle did not close)");
    exp_[order()] = 1;  // wraparound entry: alpha^(2^m-1) = 1
}

Element Field::inv(Element a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    const std::uint32_t n = order();
    std::uint32_t e = n - log_[a];
    if (e == n) e = 0;
    return exp_[e];
}

std::shared_ptr<const Field> make_field(int m, std::uint32_t prim_poly) {
    return std::make_shared<const Field>(m, prim_poly);
}

std::shared_ptr<const Field> default_field_18() {
    static const std::shared_ptr<const Field> f = make_field(18, kPrimPoly18);
    return f;
}

Element poly_eval(const Field& f, const Poly& p, Element x) noexcept {
    Element acc = 0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) acc = Field::add(f.mul(acc, x), p.coeffs[i]);
    return acc;
}

Poly poly_mul(const Field& f, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    Poly r;
    r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            r.coeffs[i + j] ^= f.mul(a.coeffs[i], b.coeffs[j]);
    }
    r.normalize();
    return r;
}

Poly poly_mod(const Field& f, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::invalid_argument("modulo by zero polynomial");
    Poly r = a;
    r.normalize();
    const int db = b.degree();
    const Element lead_inv = f.inv(b.coeffs.back());
    while (r.degree() >= db) {
        const int shift = r.degree() - db;
        const Element q = f.mul(r.coeffs.back(), lead_inv);
        for (int i = 0; i <= db; ++i) r.coeffs[shift + i] ^= f.mul(q, b.coeffs[i]);
        r.normalize();
    }
    return r;
}

}  // namespace trustlink::gf
