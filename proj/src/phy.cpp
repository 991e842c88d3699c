#include "trustlink/phy.hpp"

#include <cmath>
#include <stdexcept>

namespace trustlink::phy {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

const char* to_string(ChannelModel m) noexcept {
    switch (m) {
        case ChannelModel::awgn: return "awgn";
        case ChannelModel::rayleigh: return "rayleigh";
        case ChannelModel::rician: return "rician";
    }
    return "?";
}

ChannelModel channel_from_string(const std::string& s) {
    if (s == "awgn") return ChannelModel::awgn;
    if (s == "rayleigh") return ChannelModel::rayleigh;
    if (s == "rician") return ChannelModel::rician;
    throw std::invalid_argument("unknown channel model: " + s);
}

Eigen::RowVectorXcd modulate_qpsk(std::span<const std::uint8_t> bits) {
    const std::size_t nsym = (bits.size() + 1) / 2;
    Eigen::RowVectorXcd out(nsym);
    for (std::size_t i = 0; i < nsym; ++i) {
        const int b0 = bits[2 * i] ? 1 : 0;
        const int b1 = (2 * i + 1 < bits.size() && bits[2 * i + 1]) ? 1 : 0;
        out(static_cast<Eigen::Index>(i)) =
            Complex((1 - 2 * b0) * kInvSqrt2, (1 - 2 * b1) * kInvSqrt2);
    }
    return out;
}

std::vector<std::uint8_t> demodulate_qpsk(const Eigen::RowVectorXcd& symbols) {
    std::vector<std::uint8_t> bits(2 * symbols.size());
    for (Eigen::Index i = 0; i < symbols.size(); ++i) {
        bits[2 * i] = symbols(i).real() >= 0.0 ? 0 : 1;
        bits[2 * i + 1] = symbols(i).imag() >= 0.0 ? 0 : 1;
    }
    return bits;
}

Eigen::RowVectorXcd modulate(std::span<const std::uint8_t> bits, Modulation scheme) {
    switch (scheme) {
        case Modulation::qpsk: return modulate_qpsk(bits);
    }
    throw std::invalid_argument("unknown modulation scheme");
}

std::vector<std::uint8_t> demodulate(const Eigen::RowVectorXcd& symbols, Modulation scheme) {
    switch (scheme) {
        case Modulation::qpsk: return demodulate_qpsk(symbols);
    }
    throw std::invalid_argument("unknown modulation scheme");
}

ChannelRealization sample_channel(ChannelModel model, int m_rx, int n_tx, double snr_db,
                                  Rng& rng, double rician_k) {
    if (n_tx < 1 || m_rx < n_tx)
        throw std::invalid_argument("need rx antennas >= tx streams >= 1");

    ChannelRealization ch;
    ch.model = model;
    ch.rician_k = rician_k;
    ch.signal_var = 1.0;
    ch.noise_var = ch.signal_var * std::pow(10.0, -snr_db / 10.0);

    switch (model) {
        case ChannelModel::awgn:
            if (m_rx != n_tx)
                throw std::invalid_argument("awgn channel requires rx antennas == tx streams");
            ch.H = CMatrix::Identity(m_rx, n_tx);
            break;
        case ChannelModel::rayleigh:
            ch.H.resize(m_rx, n_tx);
            for (int c = 0; c < n_tx; ++c)
                for (int r = 0; r < m_rx; ++r)
                    ch.H(r, c) = Complex(rng.gaussian() * kInvSqrt2, rng.gaussian() * kInvSqrt2);
            break;
        case ChannelModel::rician: {
            if (rician_k < 0.0) throw std::invalid_argument("rician K must be >= 0");
            const double los = std::sqrt(rician_k / (rician_k + 1.0));
            const double scatter = std::sqrt(1.0 / (rician_k + 1.0));
            ch.H.resize(m_rx, n_tx);
            for (int c = 0; c < n_tx; ++c)
                for (int r = 0; r < m_rx; ++r)
                    ch.H(r, c) = Complex(los, 0.0) +
                                 scatter * Complex(rng.gaussian() * kInvSqrt2,
                                                   rng.gaussian() * kInvSqrt2);
            break;
        }
    }
    return ch;
}

CMatrix transmit(const ChannelRealization& ch, const CMatrix& x, Rng& rng) {
    if (x.rows() != ch.H.cols()) throw std::invalid_argument("stream count does not match channel");
    CMatrix y = ch.H * x;
    if (ch.noise_var > 0.0) {
        const double sigma = std::sqrt(ch.noise_var) * kInvSqrt2;
        for (Eigen::Index c = 0; c < y.cols(); ++c)
            for (Eigen::Index r = 0; r < y.rows(); ++r)
                y(r, c) += Complex(sigma * rng.gaussian(), sigma * rng.gaussian());
    }
    return y;
}

DetectedBlock zf_lmmse_detect(const ChannelRealization& ch, const CMatrix& y) {
    if (y.rows() != ch.H.rows()) throw std::invalid_argument("antenna count does not match channel");
    const Eigen::Index nt = ch.H.cols();

    DetectedBlock det;
    if (ch.noise_var <= 0.0) {
        // Zero-forcing limit: requires a square invertible channel.
        if (ch.H.rows() != ch.H.cols())
            throw std::domain_error("noiseless detection needs a square channel matrix");
        Eigen::FullPivLU<CMatrix> lu(ch.H);
        if (!lu.isInvertible()) throw std::domain_error("singular channel matrix at zero noise");
        det.estimates = lu.solve(y);
    } else {
        const double ratio = ch.noise_var / ch.signal_var;
        CMatrix gram = ch.H.adjoint() * ch.H;
        gram += ratio * CMatrix::Identity(nt, nt);
        det.estimates = gram.ldlt().solve(ch.H.adjoint() * y);
    }

    det.bits.resize(static_cast<std::size_t>(nt));
    for (Eigen::Index s = 0; s < nt; ++s)
        det.bits[static_cast<std::size_t>(s)] = demodulate_qpsk(det.estimates.row(s));
    return det;
}

}  // namespace trustlink::phy
