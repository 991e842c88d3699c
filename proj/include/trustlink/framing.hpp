#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace trustlink::framing {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Real-valued semantic payload: row-major 32-bit floats with explicit
/// extents. Crosses the chain losslessly (bit-exact), so the recovered tensor
/// always has zero MSE against the original once accepted.
struct FeatureTensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;

    std::size_t element_count() const noexcept { return data.size(); }
};

/// FTNS file format: "FTNS" | u32le rank | u32le dims[rank] | f32le data.
Bytes serialize_features(const FeatureTensor& t);
FeatureTensor deserialize_features(ByteView b);

struct ChunkManifest {
    std::uint64_t total_bytes = 0;
    std::uint32_t chunk_bytes = 0;
    std::uint32_t chunk_count = 0;
    std::uint32_t pad_bytes = 0;  // zero padding in the final chunk
};

/// Splits a payload into fixed-size chunks, zero-padding the final chunk.
std::pair<std::vector<Bytes>, ChunkManifest> chunk_payload(ByteView payload,
                                                           std::uint32_t chunk_bytes);

/// Inverse of chunk_payload; validates chunk count/sizes against the manifest.
Bytes merge_chunks(const std::vector<Bytes>& chunks, const ChunkManifest& m);

/// Manifest layout (20 bytes): u64le total_bytes | u32le chunk_bytes |
/// u32le chunk_count | u32le pad_bytes.
Bytes serialize_manifest(const ChunkManifest& m);
ChunkManifest parse_manifest(ByteView b);
inline constexpr std::size_t kManifestSize = 20;

/// 18-bit symbols sliced from a big-endian bit stream; the trailing symbol is
/// zero-padded. 9 bytes map to exactly 4 symbols.
struct SymbolBlock {
    std::vector<std::uint32_t> symbols;
    std::size_t byte_len = 0;
};

inline constexpr int kSymbolBits = 18;
inline constexpr std::uint32_t kSymbolMask = (1u << kSymbolBits) - 1;

SymbolBlock pack_symbols(ByteView bytes);
Bytes unpack_symbols(const SymbolBlock& block);
Bytes unpack_symbols(std::span<const std::uint32_t> symbols, std::size_t byte_len);

/// Symbols needed for a byte count: ceil(8*n/18).
constexpr std::size_t symbol_count_for(std::size_t byte_len) noexcept {
    return (8 * byte_len + kSymbolBits - 1) / kSymbolBits;
}

}  // namespace trustlink::framing
