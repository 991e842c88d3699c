#include "trustlink/envelope.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <memory>
#include <stdexcept>

#include "trustlink/bytes.hpp"

namespace trustlink::envelope {

namespace {

struct CtxFree {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxFree>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, CtxFree>;
using Pkey = std::unique_ptr<EVP_PKEY, CtxFree>;

[[noreturn]] void crypto_fail(const char* what) {
    throw std::runtime_error(std::string("openssl failure in ") + what);
}

Bytes cbc_run(const SessionKey& key, ByteView iv, ByteView in, bool encrypt) {
    if (iv.size() != 16) throw std::invalid_argument("IV must be 16 bytes");
    if (in.size() % 16 != 0) throw std::invalid_argument("input must be whole AES blocks");
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) crypto_fail("ctx alloc");
    if (EVP_CipherInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.key.data(), iv.data(),
                          encrypt ? 1 : 0) != 1)
        crypto_fail("cbc init");
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
    Bytes out(in.size());
    int len = 0;
    if (!in.empty() &&
        EVP_CipherUpdate(ctx.get(), out.data(), &len, in.data(), static_cast<int>(in.size())) != 1)
        crypto_fail("cbc update");
    int fin = 0;
    if (EVP_CipherFinal_ex(ctx.get(), out.data() + len, &fin) != 1) crypto_fail("cbc final");
    out.resize(static_cast<std::size_t>(len) + fin);
    return out;
}

Bytes pkcs7_pad(ByteView m) {
    const std::size_t pad = 16 - (m.size() % 16);
    Bytes out(m.begin(), m.end());
    out.insert(out.end(), pad, static_cast<std::uint8_t>(pad));
    return out;
}

std::optional<Bytes> pkcs7_unpad(Bytes m) {
    if (m.size() < 16 || m.size() % 16 != 0) return std::nullopt;
    const std::uint8_t pad = m.back();
    if (pad == 0 || pad > 16) return std::nullopt;
    const std::size_t keep = m.size() - pad;
    for (std::size_t i = keep; i < m.size(); ++i)
        if (m[i] != pad) return std::nullopt;
    m.resize(keep);
    return m;
}

Pkey raw_private(ByteView sk) {
    return Pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, sk.data(), sk.size()));
}

Pkey raw_public(ByteView pk) {
    return Pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr, pk.data(), pk.size()));
}

Bytes public_of(EVP_PKEY* key) {
    std::size_t len = 32;
    Bytes pk(len);
    if (EVP_PKEY_get_raw_public_key(key, pk.data(), &len) != 1 || len != 32)
        crypto_fail("raw public key");
    return pk;
}

std::optional<Bytes> x25519_shared(EVP_PKEY* mine, EVP_PKEY* peer) {
    PkeyCtx ctx(EVP_PKEY_CTX_new(mine, nullptr));
    if (!ctx) return std::nullopt;
    if (EVP_PKEY_derive_init(ctx.get()) != 1) return std::nullopt;
    if (EVP_PKEY_derive_set_peer(ctx.get(), peer) != 1) return std::nullopt;
    std::size_t len = 32;
    Bytes out(len);
    if (EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1) return std::nullopt;
    out.resize(len);
    return out;
}

// KEK = SHA3-256(shared || epk || pk); the wrap is a one-time XOR of the
// 16-byte session key with the leading KEK bytes.
std::array<std::uint8_t, 32> derive_kek(ByteView shared, ByteView epk, ByteView pk) {
    Bytes buf;
    buf.reserve(shared.size() + epk.size() + pk.size());
    buf.insert(buf.end(), shared.begin(), shared.end());
    buf.insert(buf.end(), epk.begin(), epk.end());
    buf.insert(buf.end(), pk.begin(), pk.end());
    return sha3_256(buf);
}

}  // namespace

std::array<std::uint8_t, 32> sha3_256(ByteView m) {
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(m.data(), m.size(), out.data(), &len, EVP_sha3_256(), nullptr) != 1 ||
        len != 32)
        crypto_fail("sha3-256");
    return out;
}

std::array<std::uint8_t, 16> digest128(ByteView m) {
    const auto full = sha3_256(m);
    std::array<std::uint8_t, 16> out{};
    std::memcpy(out.data(), full.data(), 16);
    return out;
}

Bytes aes128_cbc_encrypt_raw(const SessionKey& key, ByteView iv16, ByteView blocks) {
    return cbc_run(key, iv16, blocks, true);
}

Bytes aes128_cbc_decrypt_raw(const SessionKey& key, ByteView iv16, ByteView blocks) {
    return cbc_run(key, iv16, blocks, false);
}

namespace kem {

KeyPair keygen(Rng& rng) {
    Bytes sk(32);
    rng.fill_bytes(sk.data(), sk.size());
    Pkey key = raw_private(sk);
    if (!key) crypto_fail("x25519 private key");
    return KeyPair{public_of(key.get()), std::move(sk)};
}

Bytes encapsulate(ByteView pk, const SessionKey& usekey, Rng& rng) {
    if (pk.size() != 32) throw std::invalid_argument("public key must be 32 bytes");
    Bytes esk(32);
    rng.fill_bytes(esk.data(), esk.size());
    Pkey eph = raw_private(esk);
    Pkey peer = raw_public(pk);
    if (!eph || !peer) crypto_fail("x25519 key import");
    const Bytes epk = public_of(eph.get());
    auto shared = x25519_shared(eph.get(), peer.get());
    if (!shared) crypto_fail("x25519 derive");
    const auto kek = derive_kek(*shared, epk, pk);

    Bytes c1 = epk;
    for (int i = 0; i < 16; ++i) c1.push_back(usekey.key[i] ^ kek[i]);
    return c1;
}

std::optional<SessionKey> decapsulate(ByteView sk, ByteView c1) {
    if (sk.size() != 32 || c1.size() != kCapsuleSize) return std::nullopt;
    Pkey mine = raw_private(sk);
    if (!mine) return std::nullopt;
    Pkey peer = raw_public(c1.first(32));
    if (!peer) return std::nullopt;
    auto shared = x25519_shared(mine.get(), peer.get());
    if (!shared) return std::nullopt;  // degenerate point -> corrupted capsule
    const auto kek = derive_kek(*shared, c1.first(32), public_of(mine.get()));
    SessionKey key;
    for (int i = 0; i < 16; ++i) key.key[i] = c1[32 + i] ^ kek[i];
    return key;
}

}  // namespace kem

SecureEnvelope seal(ByteView m, const SessionKey& usekey, ByteView pk, Rng& rng,
                    bool pre_shared_key) {
    if (m.empty()) throw std::invalid_argument("cannot seal an empty message");
    SecureEnvelope e;
    if (!pre_shared_key) e.c1 = kem::encapsulate(pk, usekey, rng);

    Bytes iv(16);
    rng.fill_bytes(iv.data(), iv.size());
    const Bytes padded = pkcs7_pad(m);
    Bytes ct = aes128_cbc_encrypt_raw(usekey, iv, padded);
    e.c2 = std::move(iv);
    e.c2.insert(e.c2.end(), ct.begin(), ct.end());
    e.h = digest128(m);
    return e;
}

OpenOutcome open_envelope(const SecureEnvelope& c, ByteView sk,
                          const std::optional<SessionKey>& pre_shared) {
    OpenOutcome out;

    std::optional<SessionKey> key;
    if (c.c1.empty()) {
        key = pre_shared;
    } else {
        key = kem::decapsulate(sk, c.c1);
    }
    if (!key) return out;

    if (c.c2.size() < 32 || (c.c2.size() - 16) % 16 != 0) return out;
    const ByteView c2(c.c2);
    Bytes plain;
    try {
        plain = aes128_cbc_decrypt_raw(*key, c2.first(16), c2.subspan(16));
    } catch (const std::exception&) {
        return out;
    }
    auto unpadded = pkcs7_unpad(std::move(plain));
    if (!unpadded) return out;

    if (digest128(*unpadded) != c.h) return out;
    out.status = OpenStatus::success;
    out.message = std::move(*unpadded);
    return out;
}

Bytes serialize(const SecureEnvelope& e) {
    Bytes out(kWireMagic.begin(), kWireMagic.end());
    bytes::put_u32le(out, static_cast<std::uint32_t>(e.c1.size()));
    out.insert(out.end(), e.c1.begin(), e.c1.end());
    bytes::put_u32le(out, static_cast<std::uint32_t>(e.c2.size()));
    out.insert(out.end(), e.c2.begin(), e.c2.end());
    out.insert(out.end(), e.h.begin(), e.h.end());
    return out;
}

std::optional<SecureEnvelope> parse(ByteView wire) {
    try {
        bytes::Reader r(wire);
        r.expect(ByteView(kWireMagic.data(), kWireMagic.size()), "envelope");
        SecureEnvelope e;
        const std::uint32_t n1 = r.u32le();
        if (n1 > r.remaining()) return std::nullopt;
        auto c1 = r.take(n1);
        e.c1.assign(c1.begin(), c1.end());
        const std::uint32_t n2 = r.u32le();
        if (n2 > r.remaining()) return std::nullopt;
        auto c2 = r.take(n2);
        e.c2.assign(c2.begin(), c2.end());
        auto h = r.take(16);
        std::copy(h.begin(), h.end(), e.h.begin());
        if (e.c2.size() < 32 || (e.c2.size() - 16) % 16 != 0) return std::nullopt;
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

OpenOutcome open_wire(ByteView wire, ByteView sk, const std::optional<SessionKey>& pre_shared) {
    auto env = parse(wire);
    if (!env) return OpenOutcome{};  // malformed framing counts as corruption
    return open_envelope(*env, sk, pre_shared);
}

}  // namespace trustlink::envelope
