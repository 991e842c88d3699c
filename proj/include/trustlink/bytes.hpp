#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace trustlink::bytes {

using Buffer = std::vector<std::uint8_t>;
using View = std::span<const std::uint8_t>;

inline void put_u32le(Buffer& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64le(Buffer& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Sequential little-endian reader over a byte view. Throws std::runtime_error
// on truncation so parsers fail uniformly.
class Reader {
  public:
    explicit Reader(View data) : data_(data) {}

    std::size_t remaining() const noexcept { return data_.size() - pos_; }

    std::uint32_t u32le() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64le() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    View take(std::size_t n) {
        need(n);
        View v = data_.subspan(pos_, n);
        pos_ += n;
        return v;
    }

    void expect(View magic, const char* what) {
        View got = take(magic.size());
        if (!std::equal(got.begin(), got.end(), magic.begin()))
            throw std::runtime_error(std::string("bad magic in ") + what);
    }

  private:
    void need(std::size_t n) const {
        if (remaining() < n) throw std::runtime_error("truncated input");
    }

    View data_;
    std::size_t pos_ = 0;
};

}  // namespace trustlink::bytes
