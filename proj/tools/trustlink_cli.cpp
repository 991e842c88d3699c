// trustlink: link-level simulator for the trustworthy semantic-transmission
// chain (chunking, hybrid-encryption envelope, Reed-Solomon outer code, QPSK
// over fading channels, ZF-LMMSE detection, ARQ) with a sweep harness.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "trustlink/envelope.hpp"
#include "trustlink/framing.hpp"
#include "trustlink/pipeline.hpp"
#include "trustlink/rng.hpp"
#include "trustlink/sweep.hpp"

namespace {

using namespace trustlink;

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::vector<std::uint32_t> parse_dims(const std::string& s) {
    std::vector<std::uint32_t> dims;
    for (const auto& p : split(s, ',')) dims.push_back(static_cast<std::uint32_t>(std::stoul(p)));
    if (dims.empty()) throw CLI::ValidationError("--dims", "expected a comma-separated list");
    return dims;
}

// "a:b:c" inclusive range with step c, or a comma-separated list.
std::vector<double> parse_snrs(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw CLI::ValidationError("--snr-db", "range must be start:stop:step");
        const double start = std::stod(parts[0]);
        const double stop = std::stod(parts[1]);
        const double step = std::stod(parts[2]);
        if (step <= 0) throw CLI::ValidationError("--snr-db", "step must be positive");
        for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    } else {
        for (const auto& p : split(s, ',')) out.push_back(std::stod(p));
    }
    if (out.empty()) throw CLI::ValidationError("--snr-db", "empty SNR list");
    return out;
}

std::vector<phy::ChannelModel> parse_channels(const std::string& s) {
    if (s == "all")
        return {phy::ChannelModel::awgn, phy::ChannelModel::rayleigh, phy::ChannelModel::rician};
    std::vector<phy::ChannelModel> out;
    for (const auto& p : split(s, ',')) out.push_back(phy::channel_from_string(p));
    return out;
}

envelope::SessionKey parse_session_key(const std::string& hex) {
    if (hex.size() != 32) throw CLI::ValidationError("--session-key", "expected 32 hex digits");
    envelope::SessionKey key;
    for (int i = 0; i < 16; ++i)
        key.key[i] = static_cast<std::uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
    return key;
}

int cmd_keygen(std::uint64_t seed, const std::string& pk_path, const std::string& sk_path) {
    Rng rng(seed);
    const envelope::KeyPair keys = envelope::kem::keygen(rng);
    write_file(pk_path, keys.pk);
    write_file(sk_path, keys.sk);
    std::printf("wrote %s (%zu bytes) and %s (%zu bytes)\n", pk_path.c_str(), keys.pk.size(),
                sk_path.c_str(), keys.sk.size());
    return 0;
}

int cmd_genfeat(const std::string& dims_str, std::uint64_t seed, const std::string& out_path) {
    const auto t = sweep::generate_features(parse_dims(dims_str), seed);
    write_file(out_path, framing::serialize_features(t));
    std::printf("wrote %s (%zu elements)\n", out_path.c_str(), t.element_count());
    return 0;
}

int cmd_seal(const std::string& in_path, const std::string& pk_path, const std::string& out_path,
             std::uint64_t seed, std::uint32_t chunk_bytes, bool pre_shared,
             const std::string& session_key_hex) {
    const auto payload = read_file(in_path);

    envelope::SessionKey usekey;
    if (pre_shared) {
        usekey = parse_session_key(session_key_hex);
    } else {
        Rng key_rng = Rng::derived(seed, 1);
        key_rng.fill_bytes(usekey.key.data(), usekey.key.size());
    }

    pipeline::RsProfile rs;
    if (chunk_bytes == 0) chunk_bytes = pipeline::default_chunk_bytes(rs, pre_shared);
    auto [chunks, manifest] = framing::chunk_payload(payload, chunk_bytes);
    framing::Bytes m = framing::serialize_manifest(manifest);
    for (const auto& c : chunks) m.insert(m.end(), c.begin(), c.end());

    envelope::Bytes pk;
    if (!pre_shared) pk = read_file(pk_path);
    Rng seal_rng = Rng::derived(seed, 2);
    const auto env = envelope::seal(m, usekey, pk, seal_rng, pre_shared);
    const auto wire = envelope::serialize(env);
    write_file(out_path, wire);
    std::printf("sealed %zu payload bytes into %s (%zu bytes, %u-byte chunks)\n", payload.size(),
                out_path.c_str(), wire.size(), chunk_bytes);
    return 0;
}

int cmd_open(const std::string& in_path, const std::string& sk_path, const std::string& out_path,
             bool pre_shared, const std::string& session_key_hex) {
    const auto wire = read_file(in_path);
    envelope::Bytes sk;
    std::optional<envelope::SessionKey> psk;
    if (pre_shared)
        psk = parse_session_key(session_key_hex);
    else
        sk = read_file(sk_path);

    const auto outcome = envelope::open_wire(wire, sk, psk);
    if (outcome.status != envelope::OpenStatus::success) {
        std::fprintf(stderr, "digest mismatch or malformed envelope: retransmission requested\n");
        return 1;
    }
    const auto manifest = framing::parse_manifest(outcome.message);
    envelope::ByteView body(outcome.message);
    body = body.subspan(framing::kManifestSize);
    std::vector<framing::Bytes> chunks(manifest.chunk_count);
    for (std::uint32_t i = 0; i < manifest.chunk_count; ++i)
        chunks[i].assign(body.begin() + static_cast<std::ptrdiff_t>(i) * manifest.chunk_bytes,
                         body.begin() + static_cast<std::ptrdiff_t>(i + 1) * manifest.chunk_bytes);
    const auto payload = framing::merge_chunks(chunks, manifest);
    write_file(out_path, payload);
    std::printf("recovered %zu payload bytes into %s\n", payload.size(), out_path.c_str());
    return 0;
}

int cmd_simulate(const sweep::SweepSpec& spec, const std::string& out_path) {
    const auto rows = sweep::run_sweep(spec);
    sweep::write_csv(rows, out_path);
    std::printf("%zu sweep rows -> %s\n", rows.size(), out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trustlink: trustworthy semantic-transmission link simulator"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate an X25519 key pair");
    std::uint64_t kg_seed = 0;
    std::string kg_pk = "pk.bin", kg_sk = "sk.bin";
    keygen->add_option("--seed", kg_seed, "RNG seed");
    keygen->add_option("--pk-out", kg_pk, "public key output path");
    keygen->add_option("--sk-out", kg_sk, "private key output path");

    // genfeat
    auto* genfeat = app.add_subcommand("genfeat", "generate a synthetic feature tensor (FTNS)");
    std::string gf_dims = "16,128";
    std::uint64_t gf_seed = 0;
    std::string gf_out = "features.ftns";
    genfeat->add_option("--dims", gf_dims, "comma-separated extents");
    genfeat->add_option("--seed", gf_seed, "RNG seed");
    genfeat->add_option("--out", gf_out, "output path");

    // seal
    auto* seal = app.add_subcommand("seal", "chunk and seal a payload file into an envelope");
    std::string s_in, s_pk = "pk.bin", s_out = "envelope.bin", s_key_hex;
    std::uint64_t s_seed = 0;
    std::uint32_t s_chunk = 0;
    bool s_psk = false;
    seal->add_option("--in", s_in, "payload file (e.g. FTNS tensor)")->required();
    seal->add_option("--pk", s_pk, "recipient public key");
    seal->add_option("--out", s_out, "envelope output path");
    seal->add_option("--seed", s_seed, "RNG seed for session key/IV");
    seal->add_option("--chunk-bytes", s_chunk, "chunk size (0 = derived from RS profile)");
    seal->add_flag("--pre-shared", s_psk, "skip key encapsulation (pre-shared session key)");
    seal->add_option("--session-key", s_key_hex, "pre-shared session key, 32 hex digits");

    // open
    auto* open = app.add_subcommand("open", "open an envelope and recover the payload");
    std::string o_in, o_sk = "sk.bin", o_out = "payload.bin", o_key_hex;
    bool o_psk = false;
    open->add_option("--in", o_in, "envelope file")->required();
    open->add_option("--sk", o_sk, "recipient private key");
    open->add_option("--out", o_out, "recovered payload path");
    open->add_flag("--pre-shared", o_psk, "use a pre-shared session key");
    open->add_option("--session-key", o_key_hex, "pre-shared session key, 32 hex digits");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the SNR x channel x RS sweep");
    std::string si_channels = "all", si_snrs = "0:30:3", si_rs = "both", si_mode = "siso";
    std::string si_dims = "16,128", si_out = "sweep.csv";
    int si_frames = 20, si_rx = 0, si_retx = 2;
    double si_k = 3.0;
    std::uint64_t si_seed = 0;
    bool si_timing = false, si_psk = false;
    sim->add_option("--channel", si_channels, "awgn,rayleigh,rician or 'all'");
    sim->add_option("--snr-db", si_snrs, "SNR grid, start:stop:step or comma list");
    sim->add_option("--frames", si_frames, "frames per sweep point")->check(CLI::PositiveNumber);
    sim->add_option("--rs", si_rs, "on|off|both");
    sim->add_option("--rx-antennas", si_rx, "receive antennas (0 = mode default)");
    sim->add_option("--mode", si_mode, "siso|multiuser");
    sim->add_option("--rician-k", si_k, "Rician K factor (linear)");
    sim->add_option("--max-retx", si_retx, "max retransmissions per message");
    sim->add_option("--dims", si_dims, "feature tensor extents");
    sim->add_option("--seed", si_seed, "master seed");
    sim->add_option("--out", si_out, "CSV output path");
    sim->add_flag("--timing", si_timing, "record wall time per point (breaks byte determinism)");
    sim->add_flag("--pre-shared", si_psk, "pre-shared session keys (no key capsule)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*keygen) return cmd_keygen(kg_seed, kg_pk, kg_sk);
        if (*genfeat) return cmd_genfeat(gf_dims, gf_seed, gf_out);
        if (*seal) return cmd_seal(s_in, s_pk, s_out, s_seed, s_chunk, s_psk, s_key_hex);
        if (*open) return cmd_open(o_in, o_sk, o_out, o_psk, o_key_hex);
        if (*sim) {
            sweep::SweepSpec spec;
            spec.channels = parse_channels(si_channels);
            spec.snrs_db = parse_snrs(si_snrs);
            if (si_rs == "on")
                spec.rs_modes = {true};
            else if (si_rs == "off")
                spec.rs_modes = {false};
            else if (si_rs == "both")
                spec.rs_modes = {true, false};
            else
                throw CLI::ValidationError("--rs", "expected on|off|both");
            spec.frames = si_frames;
            if (si_mode == "siso")
                spec.mode = pipeline::LinkMode::siso;
            else if (si_mode == "multiuser")
                spec.mode = pipeline::LinkMode::multiuser;
            else
                throw CLI::ValidationError("--mode", "expected siso|multiuser");
            spec.rx_antennas = si_rx;
            spec.rician_k = si_k;
            spec.max_retransmissions = si_retx;
            spec.feature_dims = parse_dims(si_dims);
            spec.seed = si_seed;
            spec.measure_time = si_timing;
            spec.pre_shared_key = si_psk;
            return cmd_simulate(spec, si_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
