#include "trustlink/framing.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "trustlink/bytes.hpp"

namespace trustlink::framing {

namespace {
constexpr std::uint8_t kFtnsMagic[4] = {'F', 'T', 'N', 'S'};
}

Bytes serialize_features(const FeatureTensor& t) {
    if (t.dims.empty()) throw std::invalid_argument("tensor rank must be >= 1");
    std::uint64_t count = 1;
    for (std::uint32_t d : t.dims) {
        if (d == 0) throw std::invalid_argument("tensor extents must be positive");
        count *= d;
    }
    if (count != t.data.size()) throw std::invalid_argument("element count does not match dims");
    for (float v : t.data)
        if (!std::isfinite(v)) throw std::invalid_argument("tensor elements must be finite");

    Bytes out(kFtnsMagic, kFtnsMagic + 4);
    bytes::put_u32le(out, static_cast<std::uint32_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) bytes::put_u32le(out, d);
    out.reserve(out.size() + 4 * t.data.size());
    for (float v : t.data) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        bytes::put_u32le(out, bits);
    }
    return out;
}

FeatureTensor deserialize_features(ByteView b) {
    bytes::Reader r(b);
    r.expect(ByteView(kFtnsMagic, 4), "FTNS tensor");
    FeatureTensor t;
    const std::uint32_t rank = r.u32le();
    if (rank == 0) throw std::runtime_error("tensor rank must be >= 1");
    std::uint64_t count = 1;
    t.dims.resize(rank);
    for (std::uint32_t& d : t.dims) {
        d = r.u32le();
        if (d == 0) throw std::runtime_error("tensor extents must be positive");
        count *= d;
    }
    if (r.remaining() != 4 * count) throw std::runtime_error("tensor body length mismatch");
    t.data.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint32_t bits = r.u32le();
        std::memcpy(&t.data[i], &bits, 4);
    }
    return t;
}

std::pair<std::vector<Bytes>, ChunkManifest> chunk_payload(ByteView payload,
                                                           std::uint32_t chunk_bytes) {
    if (chunk_bytes == 0) throw std::invalid_argument("chunk size must be positive");
    if (payload.empty()) throw std::invalid_argument("cannot chunk an empty payload");

    ChunkManifest m;
    m.total_bytes = payload.size();
    m.chunk_bytes = chunk_bytes;
    m.chunk_count = static_cast<std::uint32_t>((payload.size() + chunk_bytes - 1) / chunk_bytes);
    m.pad_bytes = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(m.chunk_count) * chunk_bytes - payload.size());

    std::vector<Bytes> chunks(m.chunk_count);
    for (std::uint32_t i = 0; i < m.chunk_count; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * chunk_bytes;
        const std::size_t len = std::min<std::size_t>(chunk_bytes, payload.size() - off);
        chunks[i].assign(payload.begin() + off, payload.begin() + off + len);
        chunks[i].resize(chunk_bytes, 0);
    }
    return {std::move(chunks), m};
}

Bytes merge_chunks(const std::vector<Bytes>& chunks, const ChunkManifest& m) {
    if (chunks.size() != m.chunk_count) throw std::invalid_argument("chunk count mismatch");
    if (m.chunk_bytes == 0 || m.pad_bytes >= m.chunk_bytes)
        throw std::invalid_argument("manifest pad exceeds chunk size");
    const std::uint64_t expected =
        static_cast<std::uint64_t>(m.chunk_count) * m.chunk_bytes - m.pad_bytes;
    if (expected != m.total_bytes) throw std::invalid_argument("manifest is inconsistent");

    Bytes out;
    out.reserve(m.total_bytes);
    for (const Bytes& c : chunks) {
        if (c.size() != m.chunk_bytes) throw std::invalid_argument("chunk size mismatch");
        out.insert(out.end(), c.begin(), c.end());
    }
    out.resize(m.total_bytes);
    return out;
}

Bytes serialize_manifest(const ChunkManifest& m) {
    Bytes out;
    out.reserve(kManifestSize);
    bytes::put_u64le(out, m.total_bytes);
    bytes::put_u32le(out, m.chunk_bytes);
    bytes::put_u32le(out, m.chunk_count);
    bytes::put_u32le(out, m.pad_bytes);
    return out;
}

ChunkManifest parse_manifest(ByteView b) {
    bytes::Reader r(b);
    ChunkManifest m;
    m.total_bytes = r.u64le();
    m.chunk_bytes = r.u32le();
    m.chunk_count = r.u32le();
    m.pad_bytes = r.u32le();
    return m;
}

SymbolBlock pack_symbols(ByteView bytes) {
    SymbolBlock block;
    block.byte_len = bytes.size();
    block.symbols.reserve(symbol_count_for(bytes.size()));

    std::uint32_t acc = 0;
    int nbits = 0;
    for (std::uint8_t b : bytes) {
        acc = (acc << 8) | b;
        nbits += 8;
        if (nbits >= kSymbolBits) {
            nbits -= kSymbolBits;
            block.symbols.push_back((acc >> nbits) & kSymbolMask);
            acc &= (1u << nbits) - 1;
        }
    }
    if (nbits > 0) block.symbols.push_back((acc << (kSymbolBits - nbits)) & kSymbolMask);
    return block;
}

Bytes unpack_symbols(std::span<const std::uint32_t> symbols, std::size_t byte_len) {
    if (symbol_count_for(byte_len) != symbols.size())
        throw std::invalid_argument("byte length inconsistent with symbol count");
    Bytes out;
    out.reserve(byte_len);
    std::uint64_t acc = 0;
    int nbits = 0;
    for (std::uint32_t s : symbols) {
        if (s > kSymbolMask) throw std::invalid_argument("symbol exceeds 18 bits");
        acc = (acc << kSymbolBits) | s;
        nbits += kSymbolBits;
        while (nbits >= 8 && out.size() < byte_len) {
            nbits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> nbits) & 0xFF));
        }
        acc &= (1ull << nbits) - 1;
    }
    if (out.size() != byte_len) throw std::invalid_argument("byte length inconsistent with symbol count");
    return out;
}

Bytes unpack_symbols(const SymbolBlock& block) {
    return unpack_symbols(block.symbols, block.byte_len);
}

}  // namespace trustlink::framing
