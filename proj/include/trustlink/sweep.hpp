#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trustlink/pipeline.hpp"

namespace trustlink::sweep {

/// Seeded standard-normal payload tensor; stands in for the semantic encoder
/// outputs the transmission chain carries.
framing::FeatureTensor generate_features(const std::vector<std::uint32_t>& dims,
                                         std::uint64_t seed);

/// Runs `frames` independent frames of cfg through the ARQ link, one derived
/// RNG stream per frame. Frames execute on the worker pool; the fold is in
/// frame order, so the report is identical for any worker count.
pipeline::LinkReport run_frames(const pipeline::LinkConfig& cfg, int frames);

struct SweepSpec {
    std::vector<phy::ChannelModel> channels{phy::ChannelModel::awgn, phy::ChannelModel::rayleigh,
                                            phy::ChannelModel::rician};
    std::vector<double> snrs_db{0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
    std::vector<bool> rs_modes{true, false};
    int frames = 20;
    pipeline::LinkMode mode = pipeline::LinkMode::siso;
    int rx_antennas = 0;
    double rician_k = 3.0;
    int max_retransmissions = 2;
    pipeline::RsProfile rs;
    bool pre_shared_key = false;
    std::vector<std::uint32_t> feature_dims{16, 128};
    std::uint64_t seed = 0;
    /// Off by default so repeated runs emit byte-identical CSVs; when set,
    /// wall_seconds carries measured time per point.
    bool measure_time = false;
};

struct SweepRow {
    std::string channel;
    double snr_db = 0;
    bool rs_enabled = true;
    int frames = 0;
    double pre_rs_ber = 0;
    double frame_success_rate = 0;
    double avg_retransmissions = 0;
    std::uint64_t undetected_errors = 0;
    double feature_mse = 0;
    double wall_seconds = 0;
};

/// One row per (channel, snr, rs mode), ordered by channel, then SNR
/// ascending, then RS on before off. Point seeds derive from (seed, point
/// index), so rows are deterministic under a fixed spec.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string csv_header();
std::string to_csv_line(const SweepRow& row);
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace trustlink::sweep
