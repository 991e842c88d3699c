// Independent reference implementations used only by tests. These stay
// deliberately naive: bit-level carry-less field arithmetic, exhaustive
// nearest-codeword decoding, and dense Gauss-Jordan detection, none of which
// share code with the library paths they check.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracles {

// Carry-less multiply then polynomial reduction; no tables.
inline std::uint32_t gf_mul_ref(int m, std::uint32_t prim_poly, std::uint32_t a,
                                std::uint32_t b) {
    std::uint64_t acc = 0;
    std::uint64_t aa = a;
    while (b) {
        if (b & 1) acc ^= aa;
        aa <<= 1;
        b >>= 1;
    }
    for (int bit = 2 * m - 2; bit >= m; --bit)
        if (acc & (1ull << bit)) acc ^= static_cast<std::uint64_t>(prim_poly) << (bit - m);
    return static_cast<std::uint32_t>(acc);
}

// All codewords of a small code, as produced by the encoder under test's
// contract (message symbols then parity). The caller supplies the encoder so
// the codebook reflects the exact code geometry; minimum-distance decoding
// itself is independent of the decoder.
template <typename EncodeFn>
std::vector<std::vector<std::uint32_t>> enumerate_codebook(int k, std::uint32_t field_size,
                                                           EncodeFn&& encode) {
    std::vector<std::vector<std::uint32_t>> book;
    std::vector<std::uint32_t> msg(static_cast<std::size_t>(k), 0);
    while (true) {
        book.push_back(encode(msg));
        int i = k - 1;
        while (i >= 0) {
            if (++msg[static_cast<std::size_t>(i)] < field_size) break;
            msg[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return book;
}

struct NearestResult {
    std::size_t index = 0;
    int distance = 0;
    bool unique = true;
};

inline NearestResult nearest_codeword(const std::vector<std::vector<std::uint32_t>>& book,
                                      const std::vector<std::uint32_t>& received) {
    NearestResult best;
    best.distance = static_cast<int>(received.size()) + 1;
    for (std::size_t ci = 0; ci < book.size(); ++ci) {
        int d = 0;
        for (std::size_t i = 0; i < received.size(); ++i) d += book[ci][i] != received[i];
        if (d < best.distance) {
            best.distance = d;
            best.index = ci;
            best.unique = true;
        } else if (d == best.distance) {
            best.unique = false;
        }
    }
    return best;
}

// Dense ZF-LMMSE evaluation: explicit Gauss-Jordan inverse of
// (H^H H + ratio I), then two plain matrix products. Complex row-major.
using CVec = std::vector<std::complex<double>>;

struct CMat {
    int rows = 0, cols = 0;
    CVec a;
    std::complex<double>& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const std::complex<double>& at(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }
    static CMat zeros(int r, int c) { return CMat{r, c, CVec(static_cast<std::size_t>(r) * c)}; }
};

inline CMat matmul(const CMat& x, const CMat& y) {
    CMat out = CMat::zeros(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int kk = 0; kk < x.cols; ++kk) {
            const auto v = x.at(i, kk);
            if (v == std::complex<double>{}) continue;
            for (int j = 0; j < y.cols; ++j) out.at(i, j) += v * y.at(kk, j);
        }
    return out;
}

inline CMat adjoint(const CMat& x) {
    CMat out = CMat::zeros(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) out.at(j, i) = std::conj(x.at(i, j));
    return out;
}

inline std::optional<CMat> invert(CMat g) {
    const int n = g.rows;
    CMat inv = CMat::zeros(n, n);
    for (int i = 0; i < n; ++i) inv.at(i, i) = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(g.at(r, col)) > std::abs(g.at(pivot, col))) pivot = r;
        if (std::abs(g.at(pivot, col)) < 1e-300) return std::nullopt;
        if (pivot != col)
            for (int c = 0; c < n; ++c) {
                std::swap(g.at(pivot, c), g.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        const auto p = g.at(col, col);
        for (int c = 0; c < n; ++c) {
            g.at(col, c) /= p;
            inv.at(col, c) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const auto f = g.at(r, col);
            if (f == std::complex<double>{}) continue;
            for (int c = 0; c < n; ++c) {
                g.at(r, c) -= f * g.at(col, c);
                inv.at(r, c) -= f * inv.at(col, c);
            }
        }
    }
    return inv;
}

// X_hat = (H^H H + ratio I)^-1 H^H Y
inline std::optional<CMat> zf_lmmse_ref(const CMat& h, const CMat& y, double ratio) {
    const CMat hh = adjoint(h);
    CMat gram = matmul(hh, h);
    for (int i = 0; i < gram.rows; ++i) gram.at(i, i) += ratio;
    auto ginv = invert(gram);
    if (!ginv) return std::nullopt;
    return matmul(*ginv, matmul(hh, y));
}

}  // namespace oracles
