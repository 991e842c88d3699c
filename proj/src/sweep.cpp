#include "trustlink/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "trustlink/parallel.hpp"

namespace trustlink::sweep {

namespace {

constexpr std::uint64_t kAudioFeatureStream = 0xfea0;
constexpr std::uint64_t kVideoFeatureStream = 0xfea1;

}  // namespace

framing::FeatureTensor generate_features(const std::vector<std::uint32_t>& dims,
                                         std::uint64_t seed) {
    if (dims.empty()) throw std::invalid_argument("tensor rank must be >= 1");
    std::uint64_t count = 1;
    for (std::uint32_t d : dims) {
        if (d == 0) throw std::invalid_argument("tensor extents must be positive");
        count *= d;
    }
    framing::FeatureTensor t;
    t.dims = dims;
    t.data.resize(count);
    Rng rng(seed);
    for (float& v : t.data) v = static_cast<float>(rng.gaussian());
    return t;
}

pipeline::LinkReport run_frames(const pipeline::LinkConfig& cfg, int frames) {
    if (frames < 1) throw std::invalid_argument("frame count must be >= 1");
    const auto code = pipeline::make_code(cfg.rs);

    std::vector<pipeline::LinkReport> slots(static_cast<std::size_t>(frames));
    std::vector<std::uint8_t> failed(static_cast<std::size_t>(frames), 0);
    parallel_for(static_cast<std::size_t>(frames), [&](std::size_t i) {
        try {
            const std::uint64_t frame_seed = derive_seed(cfg.master_seed, i);
            const framing::FeatureTensor audio =
                generate_features(cfg.feature_dims, derive_seed(frame_seed, kAudioFeatureStream));
            if (cfg.mode == pipeline::LinkMode::multiuser) {
                const framing::FeatureTensor video = generate_features(
                    cfg.feature_dims, derive_seed(frame_seed, kVideoFeatureStream));
                slots[i] = pipeline::run_frame(cfg, i, &audio, &video, code.get());
            } else {
                slots[i] = pipeline::run_frame(cfg, i, &audio, nullptr, code.get());
            }
        } catch (const std::exception&) {
            failed[i] = 1;
        }
    });

    for (std::uint8_t f : failed)
        if (f) throw std::runtime_error("frame execution failed");

    pipeline::LinkReport total;
    for (const auto& r : slots) total.absorb(r);
    total.success = total.frames_accepted == total.frames_sent;
    return total;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.channels.empty() || spec.snrs_db.empty() || spec.rs_modes.empty())
        throw std::invalid_argument("sweep needs at least one channel, SNR, and RS mode");
    if (spec.frames < 1) throw std::invalid_argument("frames per point must be >= 1");

    std::vector<phy::ChannelModel> channels = spec.channels;
    std::sort(channels.begin(), channels.end());
    channels.erase(std::unique(channels.begin(), channels.end()), channels.end());
    std::vector<double> snrs = spec.snrs_db;
    std::sort(snrs.begin(), snrs.end());
    snrs.erase(std::unique(snrs.begin(), snrs.end()), snrs.end());
    std::vector<bool> rs_modes;
    if (std::find(spec.rs_modes.begin(), spec.rs_modes.end(), true) != spec.rs_modes.end())
        rs_modes.push_back(true);
    if (std::find(spec.rs_modes.begin(), spec.rs_modes.end(), false) != spec.rs_modes.end())
        rs_modes.push_back(false);

    std::vector<SweepRow> rows;
    rows.reserve(channels.size() * snrs.size() * rs_modes.size());
    std::uint64_t point_index = 0;
    for (phy::ChannelModel ch : channels) {
        for (double snr : snrs) {
            for (bool rs_on : rs_modes) {
                pipeline::LinkConfig cfg;
                cfg.channel = ch;
                cfg.rician_k = spec.rician_k;
                cfg.snr_db = snr;
                cfg.mode = spec.mode;
                cfg.rx_antennas = spec.rx_antennas;
                cfg.rs_enabled = rs_on;
                cfg.rs = spec.rs;
                cfg.max_retransmissions = spec.max_retransmissions;
                cfg.pre_shared_key = spec.pre_shared_key;
                cfg.feature_dims = spec.feature_dims;
                cfg.master_seed = derive_seed(spec.seed, point_index);

                const auto started = std::chrono::steady_clock::now();
                const pipeline::LinkReport rep = run_frames(cfg, spec.frames);
                const auto stopped = std::chrono::steady_clock::now();

                SweepRow row;
                row.channel = phy::to_string(ch);
                row.snr_db = snr;
                row.rs_enabled = rs_on;
                row.frames = spec.frames;
                row.pre_rs_ber = rep.pre_rs_ber();
                row.frame_success_rate =
                    static_cast<double>(rep.frames_accepted) / static_cast<double>(rep.frames_sent);
                row.avg_retransmissions =
                    static_cast<double>(rep.retransmissions) / static_cast<double>(rep.frames_sent);
                row.undetected_errors = rep.undetected_errors;
                row.feature_mse = rep.feature_mse();
                row.wall_seconds =
                    spec.measure_time
                        ? std::chrono::duration<double>(stopped - started).count()
                        : 0.0;
                rows.push_back(std::move(row));
                ++point_index;
            }
        }
    }
    return rows;
}

std::string csv_header() {
    return "channel,snr_db,rs_enabled,frames,pre_rs_ber,frame_success_rate,avg_retransmissions,"
           "undetected_errors,feature_mse,wall_seconds";
}

std::string to_csv_line(const SweepRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%g,%d,%d,%.6e,%.6f,%.6f,%llu,%.6e,%.3f",
                  r.channel.c_str(), r.snr_db, r.rs_enabled ? 1 : 0, r.frames, r.pre_rs_ber,
                  r.frame_success_rate, r.avg_retransmissions,
                  static_cast<unsigned long long>(r.undetected_errors), r.feature_mse,
                  r.wall_seconds);
    return buf;
}

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << csv_header() << '\n';
    for (const SweepRow& r : rows) out << to_csv_line(r) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace trustlink::sweep
