#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trustlink/rng.hpp"

namespace trustlink::phy {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

enum class ChannelModel { awgn, rayleigh, rician };

const char* to_string(ChannelModel m) noexcept;
ChannelModel channel_from_string(const std::string& s);

/// Modulation scheme seam; QPSK is the only member today, higher orders slot
/// in here without touching the chain.
enum class Modulation { qpsk };

/// One block-fading realization: H stays constant for the frame, the noise is
/// drawn per symbol time. signal_var is the per-stream symbol energy (1.0 for
/// the unit-energy constellations here) and noise_var the per-receive-antenna
/// complex noise variance.
struct ChannelRealization {
    ChannelModel model = ChannelModel::awgn;
    double rician_k = 3.0;  // linear LOS/scatter power ratio (rician only)
    CMatrix H;              // M x Nt
    double noise_var = 0.0;
    double signal_var = 1.0;

    int rx_antennas() const noexcept { return static_cast<int>(H.rows()); }
    int tx_streams() const noexcept { return static_cast<int>(H.cols()); }
};

struct DetectedBlock {
    CMatrix estimates;                           // Nt x T, output of the linear detector
    std::vector<std::vector<std::uint8_t>> bits; // per-stream hard decisions, 2 per symbol
};

/// Gray-mapped QPSK on (±1±j)/√2 with unit average energy. An odd trailing
/// bit is padded with 0; callers track the true bit count.
Eigen::RowVectorXcd modulate_qpsk(std::span<const std::uint8_t> bits);

/// Nearest-point hard decision, ties resolved toward bits 00.
std::vector<std::uint8_t> demodulate_qpsk(const Eigen::RowVectorXcd& symbols);

Eigen::RowVectorXcd modulate(std::span<const std::uint8_t> bits, Modulation scheme);
std::vector<std::uint8_t> demodulate(const Eigen::RowVectorXcd& symbols, Modulation scheme);

/// Draws H per model and sets noise_var = signal_var * 10^(-snr_db/10).
/// AWGN requires m_rx == n_tx (identity channel); fading models require
/// m_rx >= n_tx ("rician_k" is the linear K factor).
ChannelRealization sample_channel(ChannelModel model, int m_rx, int n_tx, double snr_db,
                                  Rng& rng, double rician_k = 3.0);

/// Y = H X + N with N drawn CN(0, noise_var) per receive antenna and symbol.
CMatrix transmit(const ChannelRealization& ch, const CMatrix& x, Rng& rng);

/// ZF-LMMSE estimate X̂ = (H^H H + (σn²/σx²) I)^{-1} H^H Y followed by hard
/// demodulation per stream. Throws std::domain_error when σn² = 0 and H is
/// not square invertible.
DetectedBlock zf_lmmse_detect(const ChannelRealization& ch, const CMatrix& y);

}  // namespace trustlink::phy
