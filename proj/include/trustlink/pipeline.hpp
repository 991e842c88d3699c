#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "trustlink/envelope.hpp"
#include "trustlink/framing.hpp"
#include "trustlink/phy.hpp"
#include "trustlink/rng.hpp"
#include "trustlink/rs.hpp"

namespace trustlink::pipeline {

enum class LinkMode { siso, multiuser };

struct RsProfile {
    int m = 18;
    std::uint32_t prim_poly = gf::kPrimPoly18;
    int nroots = rs::kDefaultNroots;
    int k = rs::kDefaultK;
    int fcr = 1;

    int n() const noexcept { return k + nroots; }
    /// Whole bytes carried by the k message symbols of one codeword.
    std::size_t payload_bytes() const noexcept {
        return static_cast<std::size_t>(k) * framing::kSymbolBits / 8;
    }
};

struct LinkConfig {
    phy::ChannelModel channel = phy::ChannelModel::awgn;
    double rician_k = 3.0;
    double snr_db = 30.0;
    LinkMode mode = LinkMode::siso;
    int rx_antennas = 0;  // 0 -> 1 for siso, 4 for multiuser; awgn always uses one per stream
    phy::Modulation modulation = phy::Modulation::qpsk;
    bool rs_enabled = true;
    RsProfile rs;
    std::uint32_t chunk_bytes = 0;  // 0 -> derived so one chunk fills one codeword
    int max_retransmissions = 2;
    bool pre_shared_key = false;
    std::uint64_t master_seed = 0;
    std::vector<std::uint32_t> feature_dims = {16, 128};

    int resolved_rx_antennas(int active_streams) const noexcept;
    std::uint32_t resolved_chunk_bytes() const noexcept;
};

/// Envelope + framing overhead budgeted when deriving the default chunk size:
/// wire header/digest, key capsule, IV, worst-case PKCS#7 pad, and the inline
/// chunk manifest.
std::uint32_t default_chunk_bytes(const RsProfile& rs, bool pre_shared_key);

struct LinkReport {
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_accepted = 0;
    std::uint64_t retransmissions = 0;
    std::uint64_t pre_rs_bit_errors = 0;
    std::uint64_t pre_rs_bits = 0;
    std::uint64_t post_rs_symbol_errors = 0;
    std::uint64_t undetected_errors = 0;
    double feature_mse_sum = 0.0;
    std::uint64_t mse_samples = 0;
    bool success = false;

    double pre_rs_ber() const noexcept {
        return pre_rs_bits ? static_cast<double>(pre_rs_bit_errors) / static_cast<double>(pre_rs_bits) : 0.0;
    }
    double feature_mse() const noexcept {
        return mse_samples ? feature_mse_sum / static_cast<double>(mse_samples) : 0.0;
    }
    void absorb(const LinkReport& other);
};

/// One message after the full sender chain: serialize -> chunk -> seal ->
/// pack to 18-bit symbols -> RS encode per codeword (skipped when RS is off)
/// -> channel bit stream.
struct EncodedMessage {
    std::vector<std::uint8_t> bits;              // bit stream handed to the modulator
    std::size_t wire_len = 0;                    // serialized envelope length
    int codewords = 0;                           // 0 when RS is off
    std::vector<rs::Element> payload_symbols;    // padded message symbols (RS mode, for metrics)
    framing::Bytes sealed_plaintext;             // manifest || chunk stream (truth for checks)
};

EncodedMessage encode_message(const framing::FeatureTensor& t, const envelope::SessionKey& usekey,
                              envelope::ByteView pk, const LinkConfig& cfg, Rng& rng,
                              const rs::Code* code);

struct DecodeResult {
    envelope::OpenOutcome outcome;
    bool rs_failure = false;
    std::uint64_t post_rs_symbol_errors = 0;
    int errors_corrected = 0;
    std::uint64_t pre_rs_bit_errors = 0;  // filled by receive_message
    std::uint64_t pre_rs_bits = 0;
};

/// Receiver chain from demodulated hard bits: RS decode per codeword -> parse
/// envelope -> open. RS failure or digest mismatch requests retransmission.
/// `truth` (when given) is used only for error accounting.
DecodeResult decode_message(std::span<const std::uint8_t> bits, const LinkConfig& cfg,
                            envelope::ByteView sk, const std::optional<envelope::SessionKey>& psk,
                            const rs::Code* code, const EncodedMessage* truth = nullptr);

/// One message prepared for the air: encoded bits modulated to QPSK and
/// round-robin split across nstreams transmit streams. Streams are padded to
/// a common length with unit-energy filler symbols drawn from rng.
struct TxFrame {
    EncodedMessage enc;
    phy::CMatrix streams;  // nstreams x T
    int nstreams = 1;
};

TxFrame transmit_message(const framing::FeatureTensor& t, const envelope::SessionKey& usekey,
                         envelope::ByteView pk, const LinkConfig& cfg, Rng& rng,
                         const rs::Code* code, int nstreams = 1);

/// Per-link receiver: ZF-LMMSE detection of the received block, stream demap
/// back into the message bit stream, then decode_message. Framing metadata
/// (bit count, stream split) comes from the sender's TxFrame; the enclosed
/// bits also serve as ground truth for the error counters.
DecodeResult receive_message(const phy::ChannelRealization& ch, const phy::CMatrix& y,
                             const TxFrame& tx, const LinkConfig& cfg, envelope::ByteView sk,
                             const std::optional<envelope::SessionKey>& psk,
                             const rs::Code* code);

std::shared_ptr<const rs::Code> make_code(const RsProfile& profile);

/// Single-message link with ARQ (siso mode).
LinkReport run_link(const framing::FeatureTensor& t, const LinkConfig& cfg);

/// Joint multiuser frame: the audio payload on one stream, the video payload
/// split over two, detected jointly at the receiver.
LinkReport run_link(const framing::FeatureTensor& audio, const framing::FeatureTensor& video,
                    const LinkConfig& cfg);

/// Shared-frame worker used by the harness: runs the configured mode for the
/// given frame index with all randomness derived from (master_seed, frame).
LinkReport run_frame(const LinkConfig& cfg, std::uint64_t frame_index,
                     const framing::FeatureTensor* audio, const framing::FeatureTensor* video,
                     const rs::Code* code);

}  // namespace trustlink::pipeline
