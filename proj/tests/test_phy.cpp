#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trustlink/phy.hpp"
#include "trustlink/rng.hpp"

using namespace trustlink;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

oracles::CMat to_oracle(const phy::CMatrix& m) {
    oracles::CMat out = oracles::CMat::zeros(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out.at(r, c) = m(r, c);
    return out;
}

double rel_err(const phy::CMatrix& got, const oracles::CMat& want) {
    double num = 0, den = 0;
    for (int r = 0; r < want.rows; ++r)
        for (int c = 0; c < want.cols; ++c) {
            num += std::norm(got(r, c) - want.at(r, c));
            den += std::norm(want.at(r, c));
        }
    return std::sqrt(num / den);
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    return bits;
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("QPSK gray mapping") {
    const std::vector<std::uint8_t> bits{0, 0, 0, 1, 1, 0, 1, 1};
    const auto symbols = phy::modulate_qpsk(bits);
    REQUIRE(symbols.size() == 4);
    CHECK(symbols(0) == phy::Complex(kInvSqrt2, kInvSqrt2));
    CHECK(symbols(1) == phy::Complex(kInvSqrt2, -kInvSqrt2));
    CHECK(symbols(2) == phy::Complex(-kInvSqrt2, kInvSqrt2));
    CHECK(symbols(3) == phy::Complex(-kInvSqrt2, -kInvSqrt2));
    CHECK(phy::demodulate_qpsk(symbols) == bits);
}

TEST_CASE("hard decisions: nearest point and the documented tie rule") {
    Eigen::RowVectorXcd pts(3);
    pts << phy::Complex(0.9, 0.1), phy::Complex(0.0, 0.0), phy::Complex(-0.2, 0.4);
    const auto bits = phy::demodulate_qpsk(pts);
    CHECK(bits == std::vector<std::uint8_t>{0, 0, 0, 0, 1, 0});  // tie breaks toward 00
}

TEST_CASE("QPSK round trip and unit average energy") {
    Rng rng(5);
    const auto bits = random_bits(rng, 10000);
    const auto symbols = phy::modulate_qpsk(bits);
    CHECK(phy::demodulate_qpsk(symbols) == bits);
    double energy = 0;
    for (Eigen::Index i = 0; i < symbols.size(); ++i) energy += std::norm(symbols(i));
    CHECK(energy / static_cast<double>(symbols.size()) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("odd bit counts are padded with a zero bit") {
    const std::vector<std::uint8_t> bits{1, 0, 1};
    const auto symbols = phy::modulate_qpsk(bits);
    REQUIRE(symbols.size() == 2);
    CHECK(symbols(1) == phy::Complex(-kInvSqrt2, kInvSqrt2));  // bits (1, pad 0)
}

TEST_CASE("channel sampling") {
    Rng rng(9);
    const auto awgn = phy::sample_channel(phy::ChannelModel::awgn, 1, 1, 30.0, rng);
    CHECK(awgn.H(0, 0) == phy::Complex(1.0, 0.0));
    CHECK(awgn.noise_var == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(awgn.signal_var == 1.0);

    // mean |h|^2 over many rayleigh draws is 1
    double acc = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto ch = phy::sample_channel(phy::ChannelModel::rayleigh, 4, 3, 10.0, rng);
        acc += ch.H.squaredNorm() / 12.0;
    }
    CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.05));

    // large K collapses onto the LOS matrix
    const auto rice = phy::sample_channel(phy::ChannelModel::rician, 2, 2, 10.0, rng, 1e6);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(std::abs(rice.H(r, c) - phy::Complex(1, 0)) < 1e-2);

    CHECK_THROWS_AS(phy::sample_channel(phy::ChannelModel::rayleigh, 2, 3, 0.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(phy::sample_channel(phy::ChannelModel::awgn, 4, 3, 0.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(phy::sample_channel(phy::ChannelModel::rayleigh, 4, 0, 0.0, rng),
                    std::invalid_argument);
}

TEST_CASE("noiseless identity channel is transparent") {
    Rng rng(13);
    auto ch = phy::sample_channel(phy::ChannelModel::awgn, 2, 2, 40.0, rng);
    ch.noise_var = 0.0;
    const auto bits = random_bits(rng, 800);
    const auto s = phy::modulate_qpsk(bits);
    phy::CMatrix x(2, s.size() / 2);
    x.row(0) = s.head(s.size() / 2);
    x.row(1) = s.tail(s.size() / 2);
    const auto y = phy::transmit(ch, x, rng);
    CHECK((y - x).norm() == 0.0);
}

TEST_CASE("transmit is seed-deterministic and hits the configured SNR") {
    Rng rng(17);
    const auto bits = random_bits(rng, 20000);
    const auto s = phy::modulate_qpsk(bits);
    phy::CMatrix x(1, s.size());
    x.row(0) = s;

    const auto ch = phy::sample_channel(phy::ChannelModel::awgn, 1, 1, 7.0, rng);
    Rng n1(12345), n2(12345);
    const auto y1 = phy::transmit(ch, x, n1);
    const auto y2 = phy::transmit(ch, x, n2);
    CHECK((y1 - y2).norm() == 0.0);

    const phy::CMatrix noise = y1 - ch.H * x;
    const double snr_est = 10.0 * std::log10((ch.H * x).squaredNorm() / noise.squaredNorm());
    CHECK(snr_est == doctest::Approx(7.0).epsilon(0.05));  // within ~0.3 dB

    phy::CMatrix wrong(2, 4);
    CHECK_THROWS_AS(phy::transmit(ch, wrong, n1), std::invalid_argument);
}

TEST_CASE("scalar detector: h = 1, ratio 1 halves the observation") {
    phy::ChannelRealization ch;
    ch.H = phy::CMatrix::Ones(1, 1);
    ch.noise_var = 1.0;
    ch.signal_var = 1.0;
    phy::CMatrix y(1, 3);
    y << phy::Complex(1, 1), phy::Complex(-2, 0), phy::Complex(0.5, -0.5);
    const auto det = phy::zf_lmmse_detect(ch, y);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(det.estimates(0, i) - y(0, i) / 2.0) < 1e-12);
}

TEST_CASE("detector matches the dense reference within 1e-9") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int nt = 1 + static_cast<int>(rng.below(8));
        const int m = nt + static_cast<int>(rng.below(static_cast<std::uint64_t>(9 - nt)));
        const int t_len = 4 + static_cast<int>(rng.below(12));
        phy::ChannelRealization ch;
        ch.H.resize(m, nt);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < nt; ++c)
                ch.H(r, c) = phy::Complex(rng.gaussian(), rng.gaussian()) * kInvSqrt2;
        ch.noise_var = 0.05 + rng.uniform01();
        ch.signal_var = 1.0;
        phy::CMatrix y(m, t_len);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < t_len; ++c) y(r, c) = phy::Complex(rng.gaussian(), rng.gaussian());

        const auto det = phy::zf_lmmse_detect(ch, y);
        const auto ref =
            oracles::zf_lmmse_ref(to_oracle(ch.H), to_oracle(y), ch.noise_var / ch.signal_var);
        REQUIRE(ref.has_value());
        REQUIRE(rel_err(det.estimates, *ref) < 1e-9);
    }
}

TEST_CASE("zero-forcing limit approaches the channel inverse") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        phy::ChannelRealization ch;
        ch.H.resize(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                ch.H(r, c) = phy::Complex(rng.gaussian(), rng.gaussian()) * kInvSqrt2;
        phy::CMatrix y(n, 5);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < 5; ++c) y(r, c) = phy::Complex(rng.gaussian(), rng.gaussian());

        const auto hinv_y = oracles::zf_lmmse_ref(to_oracle(ch.H), to_oracle(y), 0.0);
        REQUIRE(hinv_y.has_value());

        ch.noise_var = 1e-12;
        const auto near_zero = phy::zf_lmmse_detect(ch, y);
        CHECK(rel_err(near_zero.estimates, *hinv_y) < 1e-6);

        ch.noise_var = 0.0;
        const auto exact = phy::zf_lmmse_detect(ch, y);
        CHECK(rel_err(exact.estimates, *hinv_y) < 1e-9);
    }
    // rank-deficient square channel at zero noise must throw
    phy::ChannelRealization bad;
    bad.H = phy::CMatrix::Zero(2, 2);
    bad.noise_var = 0.0;
    CHECK_THROWS_AS(phy::zf_lmmse_detect(bad, phy::CMatrix::Zero(2, 2)), std::domain_error);
    bad.H = phy::CMatrix::Ones(3, 2);
    CHECK_THROWS_AS(phy::zf_lmmse_detect(bad, phy::CMatrix::Zero(3, 2)), std::domain_error);
}

TEST_CASE("detected bits equal transmitted bits over a clean identity channel") {
    Rng rng(27);
    const auto bits = random_bits(rng, 2000);
    const auto s = phy::modulate_qpsk(bits);
    phy::CMatrix x(1, s.size());
    x.row(0) = s;
    phy::ChannelRealization ch;
    ch.H = phy::CMatrix::Identity(1, 1);
    ch.noise_var = 0.0;
    // zero noise with identity H: use the explicit ZF branch
    const auto y = phy::transmit(ch, x, rng);
    const auto det = phy::zf_lmmse_detect(ch, y);
    CHECK(det.bits[0] == bits);
}

TEST_CASE("AWGN QPSK BER tracks the Gaussian tail at 6 dB") {
    Rng rng(31);
    const double snr_db = 6.0;
    const double p_theory = qfunc(std::sqrt(std::pow(10.0, snr_db / 10.0)));

    std::uint64_t errors = 0, total = 0;
    for (int block = 0; block < 50; ++block) {
        const auto bits = random_bits(rng, 4000);
        const auto s = phy::modulate_qpsk(bits);
        phy::CMatrix x(1, s.size());
        x.row(0) = s;
        const auto ch = phy::sample_channel(phy::ChannelModel::awgn, 1, 1, snr_db, rng);
        const auto det = phy::zf_lmmse_detect(ch, phy::transmit(ch, x, rng));
        for (std::size_t i = 0; i < bits.size(); ++i) errors += det.bits[0][i] != bits[i];
        total += bits.size();
    }
    const double ber = static_cast<double>(errors) / static_cast<double>(total);
    CHECK(ber == doctest::Approx(p_theory).epsilon(0.20));
}
