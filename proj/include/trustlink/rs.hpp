#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "trustlink/gf.hpp"

namespace trustlink::rs {

using Element = gf::Element;

struct DecodeOutcome {
    std::vector<Element> message;  // k symbols, valid when ok
    int errors_corrected = 0;
    bool ok = false;  // false = failure detected (inconsistent locator, bad magnitudes)
};

/// Monic generator polynomial with roots alpha^fcr .. alpha^(fcr+nroots-1),
/// coefficients lowest degree first. Standalone so degenerate parameter sets
/// (nroots = 1) remain inspectable; Code itself requires nroots >= 2.
gf::Poly generator_poly(const gf::Field& f, int nroots, int fcr);

/// Systematic Reed-Solomon code over GF(2^m) with nroots parity symbols and
/// generator roots alpha^fcr .. alpha^(fcr+nroots-1). Shortened codes are the
/// normal case here: n = k + nroots may be well below 2^m - 1.
///
/// The default profile matches the transmission chain: 1280 generator roots
/// over GF(2^18), k = 11520, n = 12800, correcting up to 640 symbol errors
/// per codeword.
class Code {
  public:
    Code(std::shared_ptr<const gf::Field> field, int nroots, int k, int fcr = 1);

    int n() const noexcept { return k_ + nroots_; }
    int k() const noexcept { return k_; }
    int nroots() const noexcept { return nroots_; }
    int t() const noexcept { return nroots_ / 2; }
    int fcr() const noexcept { return fcr_; }
    const gf::Field& field() const noexcept { return *field_; }
    std::shared_ptr<const gf::Field> field_ptr() const noexcept { return field_; }

    /// Monic generator polynomial, coefficients lowest degree first.
    const gf::Poly& generator() const noexcept { return generator_; }

    /// message -> n symbols, systematic layout (k message symbols, then
    /// nroots parity symbols). Throws std::invalid_argument on wrong length
    /// or out-of-range symbols.
    std::vector<Element> encode(std::span<const Element> message) const;

    /// Berlekamp-Massey + Chien + Forney hard-decision decoding of n received
    /// symbols. Corrects up to t() symbol errors; inconsistencies (locator
    /// degree mismatch, missing roots, nonzero post-correction syndromes)
    /// yield ok = false. Miscorrection beyond t() is possible per RS theory
    /// and is caught downstream by the envelope digest.
    DecodeOutcome decode(std::span<const Element> received) const;

  private:
    std::vector<std::uint32_t> syndromes(std::span<const Element> received) const;

    std::shared_ptr<const gf::Field> field_;
    int nroots_;
    int k_;
    int fcr_;
    gf::Poly generator_;
    std::vector<std::uint32_t> gen_log_;  // log-form coefficients 0..nroots-1 (monic top dropped)
};

inline constexpr int kDefaultNroots = 1280;
inline constexpr int kDefaultK = 11520;

/// RS(12800, 11520) over GF(2^18), the transmission-chain default.
std::shared_ptr<const Code> default_code();

}  // namespace trustlink::rs
