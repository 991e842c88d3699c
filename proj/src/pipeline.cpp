#include "trustlink/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace trustlink::pipeline {

namespace {

constexpr std::uint64_t kKeyStream = 0x4b455947ull;  // receiver keypair
constexpr std::uint64_t kMessageStreamBase = 10;     // per-message session key / seal rng
constexpr std::uint64_t kAttemptStreamBase = 1000;   // per-attempt channel rng

std::vector<std::uint8_t> symbols_to_bits(std::span<const rs::Element> symbols) {
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * framing::kSymbolBits);
    for (rs::Element s : symbols)
        for (int b = framing::kSymbolBits - 1; b >= 0; --b)
            bits.push_back(static_cast<std::uint8_t>((s >> b) & 1));
    return bits;
}

std::vector<rs::Element> bits_to_symbols(std::span<const std::uint8_t> bits) {
    std::vector<rs::Element> symbols(bits.size() / framing::kSymbolBits);
    std::size_t i = 0;
    for (rs::Element& s : symbols) {
        rs::Element v = 0;
        for (int b = 0; b < framing::kSymbolBits; ++b) v = (v << 1) | (bits[i++] & 1);
        s = v;
    }
    return symbols;
}

std::vector<std::uint8_t> bytes_to_bits(envelope::ByteView bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t v : bytes)
        for (int b = 7; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    return bits;
}

framing::Bytes bits_to_bytes(std::span<const std::uint8_t> bits) {
    framing::Bytes out(bits.size() / 8);
    std::size_t i = 0;
    for (std::uint8_t& v : out) {
        std::uint8_t acc = 0;
        for (int b = 0; b < 8; ++b) acc = static_cast<std::uint8_t>((acc << 1) | (bits[i++] & 1));
        v = acc;
    }
    return out;
}

phy::Complex qpsk_point(std::uint32_t two_bits) {
    constexpr double a = 0.70710678118654752440;
    return {(two_bits & 2) ? -a : a, (two_bits & 1) ? -a : a};
}

// Round-robin split of one modulated symbol sequence across nstreams rows;
// tail positions beyond the message get unit-energy filler from rng.
phy::CMatrix split_streams(const Eigen::RowVectorXcd& symbols, int nstreams, std::size_t rows_len,
                           Rng& rng) {
    phy::CMatrix out(nstreams, static_cast<Eigen::Index>(rows_len));
    const auto total = static_cast<std::size_t>(symbols.size());
    for (std::size_t i = 0; i < total; ++i)
        out(static_cast<int>(i % nstreams), static_cast<Eigen::Index>(i / nstreams)) =
            symbols(static_cast<Eigen::Index>(i));
    for (int j = 0; j < nstreams; ++j) {
        const std::size_t len = (total - j + nstreams - 1) / nstreams;
        for (std::size_t pos = len; pos < rows_len; ++pos)
            out(j, static_cast<Eigen::Index>(pos)) =
                qpsk_point(static_cast<std::uint32_t>(rng.below(4)));
    }
    return out;
}

std::size_t stream_rows_len(std::size_t symbol_count, int nstreams) {
    return (symbol_count + nstreams - 1) / static_cast<std::size_t>(nstreams);
}

// Inverse of the round-robin split at the bit level: message bit i lives in
// symbol i/2 on stream (i/2 % ns) at column (i/2 / ns).
std::vector<std::uint8_t> weave_bits(const phy::DetectedBlock& det, int base_stream, int nstreams,
                                     std::size_t nbits) {
    std::vector<std::uint8_t> bits(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
        const std::size_t si = i / 2;
        const auto& stream_bits =
            det.bits[static_cast<std::size_t>(base_stream) + si % nstreams];
        bits[i] = stream_bits[2 * (si / nstreams) + (i % 2)];
    }
    return bits;
}

struct PlanState {
    EncodedMessage enc;
    Eigen::RowVectorXcd symbols;  // modulated once; retransmissions resend the same frame
    int nstreams = 1;
    bool accepted = false;
    envelope::Bytes recovered;
};

// Joint transmission of all still-pending messages over one block-fading
// realization, then per-message detection and decoding.
void run_attempt(std::vector<PlanState*>& pending, const LinkConfig& cfg, const rs::Code* code,
                 envelope::ByteView sk, const std::vector<envelope::SessionKey>& usekeys,
                 const std::vector<std::size_t>& usekey_index, Rng& rng, LinkReport& rep) {
    int total_streams = 0;
    std::size_t max_len = 0;
    for (const PlanState* p : pending) {
        total_streams += p->nstreams;
        max_len = std::max(
            max_len, stream_rows_len(static_cast<std::size_t>(p->symbols.size()), p->nstreams));
    }

    phy::CMatrix x(total_streams, static_cast<Eigen::Index>(max_len));
    int base = 0;
    for (const PlanState* p : pending) {
        x.middleRows(base, p->nstreams) = split_streams(p->symbols, p->nstreams, max_len, rng);
        base += p->nstreams;
    }

    const int m_rx = cfg.resolved_rx_antennas(total_streams);
    phy::ChannelRealization ch =
        phy::sample_channel(cfg.channel, m_rx, total_streams, cfg.snr_db, rng, cfg.rician_k);
    const phy::CMatrix y = phy::transmit(ch, x, rng);
    const phy::DetectedBlock det = phy::zf_lmmse_detect(ch, y);

    base = 0;
    for (std::size_t pi = 0; pi < pending.size(); ++pi) {
        PlanState* p = pending[pi];
        const std::vector<std::uint8_t> bits =
            weave_bits(det, base, p->nstreams, p->enc.bits.size());

        std::uint64_t errs = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) errs += bits[i] != p->enc.bits[i];
        rep.pre_rs_bit_errors += errs;
        rep.pre_rs_bits += bits.size();

        std::optional<envelope::SessionKey> psk;
        if (cfg.pre_shared_key) psk = usekeys[usekey_index[pi]];
        DecodeResult dec = decode_message(bits, cfg, sk, psk, code, &p->enc);
        rep.post_rs_symbol_errors += dec.post_rs_symbol_errors;
        if (dec.outcome.status == envelope::OpenStatus::success) {
            p->accepted = true;
            p->recovered = std::move(dec.outcome.message);
        }
        base += p->nstreams;
    }
}

double tensor_mse(const framing::FeatureTensor& a, const framing::FeatureTensor& b) {
    if (a.data.size() != b.data.size() || a.data.empty()) return -1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(a.data.size());
}

}  // namespace

int LinkConfig::resolved_rx_antennas(int active_streams) const noexcept {
    if (channel == phy::ChannelModel::awgn) return active_streams;  // identity channel
    int m = rx_antennas > 0 ? rx_antennas : (mode == LinkMode::multiuser ? 4 : 1);
    return std::max(m, active_streams);
}

std::uint32_t LinkConfig::resolved_chunk_bytes() const noexcept {
    return chunk_bytes ? chunk_bytes : default_chunk_bytes(rs, pre_shared_key);
}

std::uint32_t default_chunk_bytes(const RsProfile& rs, bool pre_shared_key) {
    const std::size_t capsule = pre_shared_key ? 0 : envelope::kem::kCapsuleSize;
    const std::size_t overhead = 12 + capsule + 16 + 16 + 16 + framing::kManifestSize;
    const std::size_t payload = rs.payload_bytes();
    if (payload <= overhead + 16) return 16;
    return static_cast<std::uint32_t>(payload - overhead);
}

void LinkReport::absorb(const LinkReport& o) {
    frames_sent += o.frames_sent;
    frames_accepted += o.frames_accepted;
    retransmissions += o.retransmissions;
    pre_rs_bit_errors += o.pre_rs_bit_errors;
    pre_rs_bits += o.pre_rs_bits;
    post_rs_symbol_errors += o.post_rs_symbol_errors;
    undetected_errors += o.undetected_errors;
    feature_mse_sum += o.feature_mse_sum;
    mse_samples += o.mse_samples;
}

std::shared_ptr<const rs::Code> make_code(const RsProfile& p) {
    if (p.m == 18 && p.prim_poly == gf::kPrimPoly18 && p.nroots == rs::kDefaultNroots &&
        p.k == rs::kDefaultK && p.fcr == 1)
        return rs::default_code();
    return std::make_shared<const rs::Code>(gf::make_field(p.m, p.prim_poly), p.nroots, p.k, p.fcr);
}

EncodedMessage encode_message(const framing::FeatureTensor& t, const envelope::SessionKey& usekey,
                              envelope::ByteView pk, const LinkConfig& cfg, Rng& rng,
                              const rs::Code* code) {
    const framing::Bytes payload = framing::serialize_features(t);
    auto [chunks, manifest] = framing::chunk_payload(payload, cfg.resolved_chunk_bytes());

    EncodedMessage out;
    out.sealed_plaintext = framing::serialize_manifest(manifest);
    for (const framing::Bytes& c : chunks)
        out.sealed_plaintext.insert(out.sealed_plaintext.end(), c.begin(), c.end());

    const envelope::SecureEnvelope env =
        envelope::seal(out.sealed_plaintext, usekey, pk, rng, cfg.pre_shared_key);
    const envelope::Bytes wire = envelope::serialize(env);
    out.wire_len = wire.size();

    if (cfg.rs_enabled) {
        framing::SymbolBlock block = framing::pack_symbols(wire);
        const int k = code->k();
        const int ncw = static_cast<int>((block.symbols.size() + k - 1) / k);
        block.symbols.resize(static_cast<std::size_t>(ncw) * k, 0);
        out.payload_symbols = block.symbols;
        out.codewords = ncw;
        out.bits.reserve(static_cast<std::size_t>(ncw) * code->n() * framing::kSymbolBits);
        for (int i = 0; i < ncw; ++i) {
            const auto cw = code->encode(
                std::span<const rs::Element>(block.symbols).subspan(static_cast<std::size_t>(i) * k, k));
            const auto bits = symbols_to_bits(cw);
            out.bits.insert(out.bits.end(), bits.begin(), bits.end());
        }
    } else {
        out.bits = bytes_to_bits(wire);
    }
    return out;
}

DecodeResult decode_message(std::span<const std::uint8_t> bits, const LinkConfig& cfg,
                            envelope::ByteView sk, const std::optional<envelope::SessionKey>& psk,
                            const rs::Code* code, const EncodedMessage* truth) {
    DecodeResult res;
    framing::Bytes wire;
    if (cfg.rs_enabled) {
        const std::size_t cw_bits = static_cast<std::size_t>(code->n()) * framing::kSymbolBits;
        if (bits.empty() || bits.size() % cw_bits != 0) {
            res.rs_failure = true;
            return res;
        }
        const std::vector<rs::Element> symbols = bits_to_symbols(bits);
        const std::size_t ncw = symbols.size() / static_cast<std::size_t>(code->n());
        std::vector<rs::Element> message;
        message.reserve(ncw * code->k());
        bool all_ok = true;
        for (std::size_t i = 0; i < ncw; ++i) {
            const auto received =
                std::span<const rs::Element>(symbols).subspan(i * code->n(), code->n());
            rs::DecodeOutcome dec = code->decode(received);
            if (dec.ok) {
                res.errors_corrected += dec.errors_corrected;
                message.insert(message.end(), dec.message.begin(), dec.message.end());
            } else {
                all_ok = false;
                message.insert(message.end(), received.begin(), received.begin() + code->k());
            }
        }
        if (truth != nullptr && truth->payload_symbols.size() == message.size()) {
            for (std::size_t i = 0; i < message.size(); ++i)
                res.post_rs_symbol_errors += message[i] != truth->payload_symbols[i];
        }
        if (!all_ok) {
            res.rs_failure = true;  // failed codeword: request retransmission
            return res;
        }
        const std::size_t byte_len = message.size() * framing::kSymbolBits / 8;
        wire = framing::unpack_symbols(message, byte_len);
    } else {
        wire = bits_to_bytes(bits);
    }
    res.outcome = envelope::open_wire(wire, sk, psk);
    return res;
}

TxFrame transmit_message(const framing::FeatureTensor& t, const envelope::SessionKey& usekey,
                         envelope::ByteView pk, const LinkConfig& cfg, Rng& rng,
                         const rs::Code* code, int nstreams) {
    if (nstreams < 1) throw std::invalid_argument("need at least one transmit stream");
    TxFrame tx;
    tx.enc = encode_message(t, usekey, pk, cfg, rng, code);
    tx.nstreams = nstreams;
    const Eigen::RowVectorXcd symbols = phy::modulate(tx.enc.bits, cfg.modulation);
    tx.streams = split_streams(
        symbols, nstreams, stream_rows_len(static_cast<std::size_t>(symbols.size()), nstreams),
        rng);
    return tx;
}

DecodeResult receive_message(const phy::ChannelRealization& ch, const phy::CMatrix& y,
                             const TxFrame& tx, const LinkConfig& cfg, envelope::ByteView sk,
                             const std::optional<envelope::SessionKey>& psk,
                             const rs::Code* code) {
    if (ch.tx_streams() != tx.nstreams)
        throw std::invalid_argument("channel stream count does not match the frame");
    const phy::DetectedBlock det = phy::zf_lmmse_detect(ch, y);
    const std::vector<std::uint8_t> bits = weave_bits(det, 0, tx.nstreams, tx.enc.bits.size());
    DecodeResult res = decode_message(bits, cfg, sk, psk, code, &tx.enc);
    for (std::size_t i = 0; i < bits.size(); ++i)
        res.pre_rs_bit_errors += bits[i] != tx.enc.bits[i];
    res.pre_rs_bits = bits.size();
    return res;
}

LinkReport run_frame(const LinkConfig& cfg, std::uint64_t frame_index,
                     const framing::FeatureTensor* audio, const framing::FeatureTensor* video,
                     const rs::Code* code) {
    const std::uint64_t frame_seed = derive_seed(cfg.master_seed, frame_index);
    Rng key_rng = Rng::derived(cfg.master_seed, kKeyStream);
    const envelope::KeyPair keys = envelope::kem::keygen(key_rng);

    std::vector<const framing::FeatureTensor*> tensors;
    tensors.push_back(audio);
    if (cfg.mode == LinkMode::multiuser) {
        if (video == nullptr) throw std::invalid_argument("multiuser mode needs a video payload");
        tensors.push_back(video);
    }

    std::vector<PlanState> plans(tensors.size());
    std::vector<envelope::SessionKey> usekeys(tensors.size());
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        Rng msg_rng = Rng::derived(frame_seed, kMessageStreamBase + 2 * i);
        msg_rng.fill_bytes(usekeys[i].key.data(), usekeys[i].key.size());
        Rng seal_rng = Rng::derived(frame_seed, kMessageStreamBase + 2 * i + 1);
        plans[i].enc = encode_message(*tensors[i], usekeys[i], keys.pk, cfg, seal_rng, code);
        plans[i].symbols = phy::modulate(plans[i].enc.bits, cfg.modulation);
        plans[i].nstreams = (cfg.mode == LinkMode::multiuser && i == 1) ? 2 : 1;
    }

    LinkReport rep;
    rep.frames_sent = 1;
    for (int attempt = 0; attempt <= cfg.max_retransmissions; ++attempt) {
        std::vector<PlanState*> pending;
        std::vector<std::size_t> key_index;
        for (std::size_t i = 0; i < plans.size(); ++i)
            if (!plans[i].accepted) {
                pending.push_back(&plans[i]);
                key_index.push_back(i);
            }
        if (pending.empty()) break;
        if (attempt > 0) rep.retransmissions += pending.size();

        Rng attempt_rng = Rng::derived(frame_seed, kAttemptStreamBase + attempt);
        run_attempt(pending, cfg, code, keys.sk, usekeys, key_index, attempt_rng, rep);

        for (std::size_t pi = 0; pi < pending.size(); ++pi) {
            PlanState* p = pending[pi];
            if (!p->accepted) continue;
            if (p->recovered != p->enc.sealed_plaintext) {
                ++rep.undetected_errors;
                continue;
            }
            try {
                const framing::ChunkManifest manifest = framing::parse_manifest(p->recovered);
                envelope::ByteView body(p->recovered);
                body = body.subspan(framing::kManifestSize);
                std::vector<framing::Bytes> chunks(manifest.chunk_count);
                for (std::uint32_t ci = 0; ci < manifest.chunk_count; ++ci)
                    chunks[ci].assign(
                        body.begin() + static_cast<std::ptrdiff_t>(ci) * manifest.chunk_bytes,
                        body.begin() + static_cast<std::ptrdiff_t>(ci + 1) * manifest.chunk_bytes);
                const framing::Bytes payload = framing::merge_chunks(chunks, manifest);
                const framing::FeatureTensor got = framing::deserialize_features(payload);
                const double mse = tensor_mse(*tensors[key_index[pi]], got);
                if (mse < 0.0) {
                    ++rep.undetected_errors;
                } else {
                    rep.feature_mse_sum += mse;
                    ++rep.mse_samples;
                }
            } catch (const std::exception&) {
                ++rep.undetected_errors;
            }
        }
    }

    bool all = true;
    for (const PlanState& p : plans) all = all && p.accepted;
    rep.frames_accepted = all ? 1 : 0;
    rep.success = all;
    return rep;
}

LinkReport run_link(const framing::FeatureTensor& t, const LinkConfig& cfg) {
    if (cfg.mode != LinkMode::siso)
        throw std::invalid_argument("single-payload run_link requires siso mode");
    const auto code = make_code(cfg.rs);
    return run_frame(cfg, 0, &t, nullptr, code.get());
}

LinkReport run_link(const framing::FeatureTensor& audio, const framing::FeatureTensor& video,
                    const LinkConfig& cfg) {
    if (cfg.mode != LinkMode::multiuser)
        throw std::invalid_argument("paired run_link requires multiuser mode");
    const auto code = make_code(cfg.rs);
    return run_frame(cfg, 0, &audio, &video, code.get());
}

}  // namespace trustlink::pipeline
