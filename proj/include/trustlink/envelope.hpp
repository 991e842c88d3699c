#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trustlink/rng.hpp"

namespace trustlink::envelope {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

struct KeyPair {
    Bytes pk;  // X25519 public key, 32 bytes
    Bytes sk;  // X25519 private key, 32 bytes
};

struct SessionKey {
    std::array<std::uint8_t, 16> key{};  // AES-128 session key
};

/// The sealed triple (c1, c2, h): encapsulated session key, AES-128-CBC bulk
/// ciphertext with its 16-byte IV prepended, and the truncated SHA3 digest of
/// the plaintext. c1 is empty when the session key is pre-shared.
struct SecureEnvelope {
    Bytes c1;
    Bytes c2;
    std::array<std::uint8_t, 16> h{};
};

enum class OpenStatus { success, retransmit_requested };

struct OpenOutcome {
    OpenStatus status = OpenStatus::retransmit_requested;
    Bytes message;  // present only on success
};

/// SHA3-256 (full 32-byte output).
std::array<std::uint8_t, 32> sha3_256(ByteView m);

/// SHA3-256 truncated to 128 bits; the envelope integrity digest.
std::array<std::uint8_t, 16> digest128(ByteView m);

/// Raw AES-128-CBC over whole blocks (no padding); input length must be a
/// multiple of 16. Exposed for test-vector checks.
Bytes aes128_cbc_encrypt_raw(const SessionKey& key, ByteView iv16, ByteView blocks);
Bytes aes128_cbc_decrypt_raw(const SessionKey& key, ByteView iv16, ByteView blocks);

// ECIES-style key encapsulation over X25519: c1 = ephemeral public key (32
// bytes) followed by the session key XOR-wrapped under a SHA3-derived KEK.
namespace kem {

KeyPair keygen(Rng& rng);
Bytes encapsulate(ByteView pk, const SessionKey& usekey, Rng& rng);
/// Empty optional on malformed input or a degenerate shared secret.
std::optional<SessionKey> decapsulate(ByteView sk, ByteView c1);

inline constexpr std::size_t kCapsuleSize = 48;

}  // namespace kem

/// Sender ciphertext generation: encapsulate the session key under pk (unless
/// pre-shared), AES-128-CBC the chunk-aligned plaintext under a fresh IV with
/// PKCS#7 padding, and bind the plaintext digest. Throws std::invalid_argument
/// on an empty message.
SecureEnvelope seal(ByteView m, const SessionKey& usekey, ByteView pk, Rng& rng,
                    bool pre_shared_key = false);

/// Receiver recovery: decapsulate (or use the pre-shared key), decrypt, and
/// accept only if the plaintext digest matches h; anything else requests
/// retransmission.
OpenOutcome open_envelope(const SecureEnvelope& c, ByteView sk,
                          const std::optional<SessionKey>& pre_shared = std::nullopt);

/// Wire format, byte exact:
///   "TSC1" | u32le len(c1) | c1 | u32le len(c2) | c2 | h (16 bytes)
Bytes serialize(const SecureEnvelope& e);

/// Parses an envelope from the front of `wire`; trailing bytes (transport
/// padding) are ignored. Empty optional on malformed framing.
std::optional<SecureEnvelope> parse(ByteView wire);

/// parse + open; malformed framing is treated as corruption and requests
/// retransmission.
OpenOutcome open_wire(ByteView wire, ByteView sk,
                      const std::optional<SessionKey>& pre_shared = std::nullopt);

inline constexpr std::array<std::uint8_t, 4> kWireMagic{'T', 'S', 'C', '1'};

}  // namespace trustlink::envelope
