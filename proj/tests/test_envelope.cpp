#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "trustlink/envelope.hpp"
#include "trustlink/rng.hpp"

using namespace trustlink;
using envelope::Bytes;

namespace {

Bytes from_hex(const std::string& hex) {
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
    return out;
}

Bytes random_bytes(Rng& rng, std::size_t n) {
    Bytes out(n);
    rng.fill_bytes(out.data(), n);
    return out;
}

envelope::SessionKey random_key(Rng& rng) {
    envelope::SessionKey k;
    rng.fill_bytes(k.key.data(), k.key.size());
    return k;
}

}  // namespace

TEST_CASE("SHA3-256 matches FIPS-202 reference vectors") {
    const auto empty = envelope::sha3_256(Bytes{});
    CHECK(Bytes(empty.begin(), empty.end()) ==
          from_hex("a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a"));

    const std::string abc = "abc";
    const auto d_abc = envelope::sha3_256(
        envelope::ByteView(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()));
    CHECK(Bytes(d_abc.begin(), d_abc.end()) ==
          from_hex("3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532"));

    const auto h = envelope::digest128(Bytes{});
    CHECK(Bytes(h.begin(), h.end()) == from_hex("a7ffc6f8bf1ed76651c14756a061d662"));
}

TEST_CASE("digest128 avalanche: single-bit flips never collide in 1000 trials") {
    Rng rng(303);
    for (int trial = 0; trial < 1000; ++trial) {
        Bytes m = random_bytes(rng, 1 + rng.below(120));
        const auto d1 = envelope::digest128(m);
        const std::size_t bit = rng.below(m.size() * 8);
        m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        const auto d2 = envelope::digest128(m);
        REQUIRE(d1 != d2);
    }
    const Bytes m = random_bytes(rng, 64);
    CHECK(envelope::digest128(m) == envelope::digest128(m));
}

TEST_CASE("AES-128-CBC matches NIST SP 800-38A F.2.1/F.2.2") {
    envelope::SessionKey key;
    const Bytes kb = from_hex("2b7e151628aed2a6abf7158809cf4f3c");
    std::memcpy(key.key.data(), kb.data(), 16);
    const Bytes iv = from_hex("000102030405060708090a0b0c0d0e0f");
    const Bytes plain = from_hex(
        "6bc1bee22e409f96e93d7e117393172a"
        "ae2d8a571e03ac9c9eb76fac45af8e51"
        "30c81c46a35ce411e5fbc1191a0a52ef"
        "f69f2445df4f9b17ad2b417be66c3710");
    const Bytes cipher = from_hex(
        "7649abac8119b246cee98e9b12e9197d"
        "5086cb9b507219ee95db113a917678b2"
        "73bed6b8e3c1743b7116e69e22229516"
        "3ff1caa1681fac09120eca307586e1a7");

    CHECK(envelope::aes128_cbc_encrypt_raw(key, iv, plain) == cipher);
    CHECK(envelope::aes128_cbc_decrypt_raw(key, iv, cipher) == plain);
}

TEST_CASE("keygen is seed-deterministic") {
    Rng a1(1), a2(1), b(2);
    const auto k1 = envelope::kem::keygen(a1);
    const auto k2 = envelope::kem::keygen(a2);
    const auto k3 = envelope::kem::keygen(b);
    CHECK(k1.pk == k2.pk);
    CHECK(k1.sk == k2.sk);
    CHECK(k1.pk != k3.pk);
    CHECK(k1.pk.size() == 32);
    CHECK(k1.sk.size() == 32);
}

TEST_CASE("key encapsulation round-trips 100 random session keys") {
    Rng rng(17);
    const auto keys = envelope::kem::keygen(rng);
    for (int i = 0; i < 100; ++i) {
        const auto usekey = random_key(rng);
        const Bytes c1 = envelope::kem::encapsulate(keys.pk, usekey, rng);
        REQUIRE(c1.size() == envelope::kem::kCapsuleSize);
        const auto back = envelope::kem::decapsulate(keys.sk, c1);
        REQUIRE(back.has_value());
        CHECK(back->key == usekey.key);
    }
}

TEST_CASE("seal/open round trip") {
    Rng rng(23);
    const auto keys = envelope::kem::keygen(rng);
    for (std::size_t len : {1u, 15u, 16u, 17u, 32u, 333u, 4096u}) {
        const Bytes m = random_bytes(rng, len);
        const auto usekey = random_key(rng);
        const auto env = envelope::seal(m, usekey, keys.pk, rng);
        const auto out = envelope::open_envelope(env, keys.sk);
        REQUIRE(out.status == envelope::OpenStatus::success);
        CHECK(out.message == m);
    }
}

TEST_CASE("fresh IV per seal, stable digest") {
    Rng rng(29);
    const auto keys = envelope::kem::keygen(rng);
    const Bytes m = random_bytes(rng, 64);
    const auto usekey = random_key(rng);
    const auto e1 = envelope::seal(m, usekey, keys.pk, rng);
    const auto e2 = envelope::seal(m, usekey, keys.pk, rng);
    CHECK(e1.c2 != e2.c2);
    CHECK(e1.h == e2.h);
}

TEST_CASE("PKCS#7 block arithmetic: 32-byte message gives 16 + 48 bytes of c2") {
    Rng rng(31);
    const auto keys = envelope::kem::keygen(rng);
    const auto env = envelope::seal(random_bytes(rng, 32), random_key(rng), keys.pk, rng);
    CHECK(env.c2.size() == 16 + 48);
}

TEST_CASE("sealing an empty message is rejected") {
    Rng rng(37);
    const auto keys = envelope::kem::keygen(rng);
    CHECK_THROWS_AS(envelope::seal(Bytes{}, random_key(rng), keys.pk, rng),
                    std::invalid_argument);
}

TEST_CASE("wire format round trip and malformed input") {
    Rng rng(41);
    const auto keys = envelope::kem::keygen(rng);
    const Bytes m = random_bytes(rng, 100);
    const auto env = envelope::seal(m, random_key(rng), keys.pk, rng);
    const Bytes wire = envelope::serialize(env);

    const auto parsed = envelope::parse(wire);
    REQUIRE(parsed.has_value());
    CHECK(parsed->c1 == env.c1);
    CHECK(parsed->c2 == env.c2);
    CHECK(parsed->h == env.h);

    Bytes bad_magic = wire;
    bad_magic[0] = 'X';
    CHECK(!envelope::parse(bad_magic).has_value());

    Bytes truncated(wire.begin(), wire.begin() + 10);
    CHECK(!envelope::parse(truncated).has_value());

    // trailing transport padding is tolerated
    Bytes padded = wire;
    padded.resize(wire.size() + 13, 0);
    CHECK(envelope::parse(padded).has_value());
    CHECK(envelope::open_wire(padded, keys.sk).status == envelope::OpenStatus::success);
}

TEST_CASE("every single-bit tamper requests retransmission") {
    Rng rng(43);
    const auto keys = envelope::kem::keygen(rng);
    const Bytes m = random_bytes(rng, 200);
    const auto env = envelope::seal(m, random_key(rng), keys.pk, rng);
    const Bytes wire = envelope::serialize(env);

    int accepted = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Bytes bad = wire;
        const std::size_t bit = rng.below(bad.size() * 8);
        bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        const auto out = envelope::open_wire(bad, keys.sk);
        if (out.status == envelope::OpenStatus::success) ++accepted;
    }
    CHECK(accepted == 0);
}

TEST_CASE("wrong private key is rejected") {
    Rng rng(47);
    const auto good = envelope::kem::keygen(rng);
    const Bytes m = random_bytes(rng, 50);
    for (int trial = 0; trial < 100; ++trial) {
        const auto env = envelope::seal(m, random_key(rng), good.pk, rng);
        const auto wrong = envelope::kem::keygen(rng);
        const auto out = envelope::open_envelope(env, wrong.sk);
        REQUIRE(out.status == envelope::OpenStatus::retransmit_requested);
    }
}

TEST_CASE("pre-shared session key mode skips the capsule") {
    Rng rng(53);
    const Bytes m = random_bytes(rng, 80);
    const auto usekey = random_key(rng);
    const auto env = envelope::seal(m, usekey, {}, rng, /*pre_shared_key=*/true);
    CHECK(env.c1.empty());

    const auto ok = envelope::open_envelope(env, {}, usekey);
    REQUIRE(ok.status == envelope::OpenStatus::success);
    CHECK(ok.message == m);

    const auto other = random_key(rng);
    CHECK(envelope::open_envelope(env, {}, other).status ==
          envelope::OpenStatus::retransmit_requested);
    // no pre-shared key available at all
    CHECK(envelope::open_envelope(env, {}, std::nullopt).status ==
          envelope::OpenStatus::retransmit_requested);
}
