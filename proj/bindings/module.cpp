#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trustlink/envelope.hpp"
#include "trustlink/framing.hpp"
#include "trustlink/gf.hpp"
#include "trustlink/phy.hpp"
#include "trustlink/pipeline.hpp"
#include "trustlink/rng.hpp"
#include "trustlink/rs.hpp"
#include "trustlink/sweep.hpp"

namespace py = pybind11;
using namespace trustlink;

namespace {

envelope::Bytes to_bytes(const py::bytes& b) {
    const std::string s = b;
    return envelope::Bytes(s.begin(), s.end());
}

py::bytes from_bytes(std::span<const std::uint8_t> b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

envelope::SessionKey session_key_from_seed(std::uint64_t seed) {
    envelope::SessionKey key;
    Rng rng = Rng::derived(seed, 1);
    rng.fill_bytes(key.key.data(), key.key.size());
    return key;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "trustlink: trustworthy semantic-transmission link simulator";

    // --- galois / reed-solomon ---
    py::class_<gf::Field, std::shared_ptr<gf::Field>>(m, "GfField")
        .def(py::init<int, std::uint32_t>(), py::arg("m"), py::arg("prim_poly"))
        .def_property_readonly("m", &gf::Field::m)
        .def_property_readonly("prim_poly", &gf::Field::prim_poly)
        .def_property_readonly("size", &gf::Field::size)
        .def("mul", &gf::Field::mul)
        .def("inv", &gf::Field::inv)
        .def("div", &gf::Field::div)
        .def_static("add", &gf::Field::add)
        .def("exp", [](const gf::Field& f, std::uint32_t i) { return f.exp(i); })
        .def("log", [](const gf::Field& f, gf::Element a) { return f.log(a); });

    py::class_<rs::Code, std::shared_ptr<rs::Code>>(m, "RsCode")
        .def(py::init([](std::shared_ptr<gf::Field> field, int nroots, int k, int fcr) {
                 return std::make_shared<rs::Code>(std::move(field), nroots, k, fcr);
             }),
             py::arg("field"), py::arg("nroots"), py::arg("k"), py::arg("fcr") = 1)
        .def_property_readonly("n", &rs::Code::n)
        .def_property_readonly("k", &rs::Code::k)
        .def_property_readonly("nroots", &rs::Code::nroots)
        .def_property_readonly("t", &rs::Code::t)
        .def("generator",
             [](const rs::Code& c) { return c.generator().coeffs; })
        .def("encode",
             [](const rs::Code& c, const std::vector<rs::Element>& msg) { return c.encode(msg); })
        .def("decode", [](const rs::Code& c, const std::vector<rs::Element>& received) {
            rs::DecodeOutcome out = c.decode(received);
            return py::make_tuple(out.ok, out.message, out.errors_corrected);
        });

    // --- envelope ---
    m.def("keygen", [](std::uint64_t seed) {
        Rng rng(seed);
        const envelope::KeyPair kp = envelope::kem::keygen(rng);
        return py::make_tuple(from_bytes(kp.pk), from_bytes(kp.sk));
    });
    m.def("sha3_256", [](const py::bytes& data) {
        const auto d = envelope::sha3_256(to_bytes(data));
        return from_bytes(d);
    });
    m.def("digest128", [](const py::bytes& data) {
        const auto d = envelope::digest128(to_bytes(data));
        return from_bytes(d);
    });
    m.def(
        "seal",
        [](const py::bytes& message, const py::bytes& pk, std::uint64_t seed, bool pre_shared) {
            const envelope::Bytes msg = to_bytes(message);
            const envelope::Bytes pkb = to_bytes(pk);
            Rng rng = Rng::derived(seed, 2);
            const auto env =
                envelope::seal(msg, session_key_from_seed(seed), pkb, rng, pre_shared);
            return from_bytes(envelope::serialize(env));
        },
        py::arg("message"), py::arg("pk"), py::arg("seed") = 0, py::arg("pre_shared") = false);
    m.def(
        "open",
        [](const py::bytes& wire, const py::bytes& sk, std::optional<std::uint64_t> psk_seed) {
            std::optional<envelope::SessionKey> psk;
            if (psk_seed) psk = session_key_from_seed(*psk_seed);
            const auto outcome = envelope::open_wire(to_bytes(wire), to_bytes(sk), psk);
            const bool ok = outcome.status == envelope::OpenStatus::success;
            return py::make_tuple(ok, from_bytes(outcome.message));
        },
        py::arg("wire"), py::arg("sk"), py::arg("psk_seed") = py::none());

    // --- framing ---
    py::class_<framing::FeatureTensor>(m, "FeatureTensor")
        .def(py::init<>())
        .def_readwrite("dims", &framing::FeatureTensor::dims)
        .def_readwrite("data", &framing::FeatureTensor::data);
    m.def("serialize_features",
          [](const framing::FeatureTensor& t) { return from_bytes(framing::serialize_features(t)); });
    m.def("deserialize_features",
          [](const py::bytes& b) { return framing::deserialize_features(to_bytes(b)); });
    m.def("pack_symbols", [](const py::bytes& b) {
        const auto block = framing::pack_symbols(to_bytes(b));
        return py::make_tuple(block.symbols, block.byte_len);
    });
    m.def("unpack_symbols", [](const std::vector<std::uint32_t>& symbols, std::size_t byte_len) {
        return from_bytes(framing::unpack_symbols(symbols, byte_len));
    });

    // --- phy ---
    py::enum_<phy::ChannelModel>(m, "ChannelModel")
        .value("awgn", phy::ChannelModel::awgn)
        .value("rayleigh", phy::ChannelModel::rayleigh)
        .value("rician", phy::ChannelModel::rician);

    py::class_<phy::ChannelRealization>(m, "ChannelRealization")
        .def_readonly("model", &phy::ChannelRealization::model)
        .def_readonly("H", &phy::ChannelRealization::H)
        .def_readonly("noise_var", &phy::ChannelRealization::noise_var)
        .def_readonly("signal_var", &phy::ChannelRealization::signal_var);

    m.def("modulate_qpsk", [](const std::vector<std::uint8_t>& bits) {
        const auto symbols = phy::modulate_qpsk(bits);
        return std::vector<phy::Complex>(symbols.begin(), symbols.end());
    });
    m.def("demodulate_qpsk", [](const std::vector<phy::Complex>& symbols) {
        Eigen::RowVectorXcd row(static_cast<Eigen::Index>(symbols.size()));
        for (std::size_t i = 0; i < symbols.size(); ++i) row(static_cast<Eigen::Index>(i)) = symbols[i];
        return phy::demodulate_qpsk(row);
    });
    m.def(
        "sample_channel",
        [](phy::ChannelModel model, int m_rx, int n_tx, double snr_db, std::uint64_t seed,
           double rician_k) {
            Rng rng(seed);
            return phy::sample_channel(model, m_rx, n_tx, snr_db, rng, rician_k);
        },
        py::arg("model"), py::arg("m_rx"), py::arg("n_tx"), py::arg("snr_db"), py::arg("seed"),
        py::arg("rician_k") = 3.0);
    m.def(
        "transmit",
        [](const phy::ChannelRealization& ch, const phy::CMatrix& x, std::uint64_t seed) {
            Rng rng(seed);
            return phy::transmit(ch, x, rng);
        },
        py::arg("ch"), py::arg("x"), py::arg("seed"));
    m.def("zf_lmmse_detect", [](const phy::ChannelRealization& ch, const phy::CMatrix& y) {
        const auto det = phy::zf_lmmse_detect(ch, y);
        return py::make_tuple(det.estimates, det.bits);
    });

    // --- pipeline / sweep ---
    py::enum_<phy::Modulation>(m, "Modulation").value("qpsk", phy::Modulation::qpsk);

    py::enum_<pipeline::LinkMode>(m, "LinkMode")
        .value("siso", pipeline::LinkMode::siso)
        .value("multiuser", pipeline::LinkMode::multiuser);

    py::class_<pipeline::RsProfile>(m, "RsProfile")
        .def(py::init<>())
        .def_readwrite("m", &pipeline::RsProfile::m)
        .def_readwrite("prim_poly", &pipeline::RsProfile::prim_poly)
        .def_readwrite("nroots", &pipeline::RsProfile::nroots)
        .def_readwrite("k", &pipeline::RsProfile::k)
        .def_readwrite("fcr", &pipeline::RsProfile::fcr);

    py::class_<pipeline::LinkConfig>(m, "LinkConfig")
        .def(py::init<>())
        .def_readwrite("channel", &pipeline::LinkConfig::channel)
        .def_readwrite("rician_k", &pipeline::LinkConfig::rician_k)
        .def_readwrite("snr_db", &pipeline::LinkConfig::snr_db)
        .def_readwrite("mode", &pipeline::LinkConfig::mode)
        .def_readwrite("rx_antennas", &pipeline::LinkConfig::rx_antennas)
        .def_readwrite("modulation", &pipeline::LinkConfig::modulation)
        .def_readwrite("rs_enabled", &pipeline::LinkConfig::rs_enabled)
        .def_readwrite("rs", &pipeline::LinkConfig::rs)
        .def_readwrite("chunk_bytes", &pipeline::LinkConfig::chunk_bytes)
        .def_readwrite("max_retransmissions", &pipeline::LinkConfig::max_retransmissions)
        .def_readwrite("pre_shared_key", &pipeline::LinkConfig::pre_shared_key)
        .def_readwrite("master_seed", &pipeline::LinkConfig::master_seed)
        .def_readwrite("feature_dims", &pipeline::LinkConfig::feature_dims);

    py::class_<pipeline::LinkReport>(m, "LinkReport")
        .def_readonly("frames_sent", &pipeline::LinkReport::frames_sent)
        .def_readonly("frames_accepted", &pipeline::LinkReport::frames_accepted)
        .def_readonly("retransmissions", &pipeline::LinkReport::retransmissions)
        .def_readonly("pre_rs_bit_errors", &pipeline::LinkReport::pre_rs_bit_errors)
        .def_readonly("pre_rs_bits", &pipeline::LinkReport::pre_rs_bits)
        .def_readonly("post_rs_symbol_errors", &pipeline::LinkReport::post_rs_symbol_errors)
        .def_readonly("undetected_errors", &pipeline::LinkReport::undetected_errors)
        .def_readonly("success", &pipeline::LinkReport::success)
        .def("pre_rs_ber", &pipeline::LinkReport::pre_rs_ber)
        .def("feature_mse", &pipeline::LinkReport::feature_mse);

    m.def("run_link",
          [](const framing::FeatureTensor& t, const pipeline::LinkConfig& cfg) {
              return pipeline::run_link(t, cfg);
          });
    m.def("run_link_pair", [](const framing::FeatureTensor& a, const framing::FeatureTensor& v,
                              const pipeline::LinkConfig& cfg) { return pipeline::run_link(a, v, cfg); });
    m.def("generate_features", &sweep::generate_features, py::arg("dims"), py::arg("seed"));
    m.def("run_frames", &sweep::run_frames, py::arg("config"), py::arg("frames"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<sweep::SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("channels", &sweep::SweepSpec::channels)
        .def_readwrite("snrs_db", &sweep::SweepSpec::snrs_db)
        .def_readwrite("rs_modes", &sweep::SweepSpec::rs_modes)
        .def_readwrite("frames", &sweep::SweepSpec::frames)
        .def_readwrite("mode", &sweep::SweepSpec::mode)
        .def_readwrite("rx_antennas", &sweep::SweepSpec::rx_antennas)
        .def_readwrite("rician_k", &sweep::SweepSpec::rician_k)
        .def_readwrite("max_retransmissions", &sweep::SweepSpec::max_retransmissions)
        .def_readwrite("rs", &sweep::SweepSpec::rs)
        .def_readwrite("pre_shared_key", &sweep::SweepSpec::pre_shared_key)
        .def_readwrite("feature_dims", &sweep::SweepSpec::feature_dims)
        .def_readwrite("seed", &sweep::SweepSpec::seed)
        .def_readwrite("measure_time", &sweep::SweepSpec::measure_time);

    py::class_<sweep::SweepRow>(m, "SweepRow")
        .def_readonly("channel", &sweep::SweepRow::channel)
        .def_readonly("snr_db", &sweep::SweepRow::snr_db)
        .def_readonly("rs_enabled", &sweep::SweepRow::rs_enabled)
        .def_readonly("frames", &sweep::SweepRow::frames)
        .def_readonly("pre_rs_ber", &sweep::SweepRow::pre_rs_ber)
        .def_readonly("frame_success_rate", &sweep::SweepRow::frame_success_rate)
        .def_readonly("avg_retransmissions", &sweep::SweepRow::avg_retransmissions)
        .def_readonly("undetected_errors", &sweep::SweepRow::undetected_errors)
        .def_readonly("feature_mse", &sweep::SweepRow::feature_mse)
        .def_readonly("wall_seconds", &sweep::SweepRow::wall_seconds);

    m.def("run_sweep", &sweep::run_sweep, py::call_guard<py::gil_scoped_release>());
    m.def("write_csv", &sweep::write_csv);
    m.def("csv_header", &sweep::csv_header);
}
