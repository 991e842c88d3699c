#include "trustlink/rs.hpp"

#include <stdexcept>

namespace trustlink::rs {

gf::Poly generator_poly(const gf::Field& f, int nroots, int fcr) {
    if (nroots < 1) throw std::invalid_argument("generator needs at least one root");
    // g(x) = prod_{i=0}^{nroots-1} (x - alpha^(fcr+i)), built incrementally.
    std::vector<Element> g{1};
    g.reserve(static_cast<std::size_t>(nroots) + 1);
    for (int i = 0; i < nroots; ++i) {
        const Element root = f.alpha_pow(fcr + i);
        g.push_back(0);
        for (std::size_t j = g.size() - 1; j > 0; --j)
            g[j] = gf::Field::add(g[j - 1], f.mul(g[j], root));
        g[0] = f.mul(g[0], root);
    }
    return gf::Poly{g};
}

Code::Code(std::shared_ptr<const gf::Field> field, int nroots, int k, int fcr)
    : field_(std::move(field)), nroots_(nroots), k_(k), fcr_(fcr) {
    if (!field_) throw std::invalid_argument("null field");
    if (nroots_ < 2) throw std::invalid_argument("nroots must be >= 2");
    if (k_ < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<std::uint64_t>(n()) > field_->order())
        throw std::invalid_argument("codeword length exceeds 2^m - 1");

    const gf::Field& f = *field_;
    generator_ = generator_poly(f, nroots_, fcr_);
    gen_log_.resize(nroots_);
    for (int j = 0; j < nroots_; ++j) gen_log_[j] = f.log(generator_.coeffs[j]);
}

std::vector<Element> Code::encode(std::span<const Element> message) const {
    if (static_cast<int>(message.size()) != k_)
        throw std::invalid_argument("message length must equal k");
    const gf::Field& f = *field_;
    const std::uint32_t big_n = f.order();
    const Element* exp = f.exp_table().data();
    for (Element v : message)
        if (v >= f.size()) throw std::invalid_argument("symbol out of field range");

    // Polynomial division LFSR; par[j] holds the coefficient of x^j of the
    // running remainder.
    std::vector<Element> par(nroots_, 0);
    const int top = nroots_ - 1;
    for (int i = 0; i < k_; ++i) {
        const Element fb = message[i] ^ par[top];
        if (fb == 0) {
            for (int j = top; j > 0; --j) par[j] = par[j - 1];
            par[0] = 0;
            continue;
        }
        const std::uint32_t lf = f.log(fb);
        for (int j = top; j > 0; --j) {
            const std::uint32_t gl = gen_log_[j];
            if (gl == big_n) {
                par[j] = par[j - 1];
            } else {
                std::uint32_t e = lf + gl;
                if (e >= big_n) e -= big_n;
                par[j] = par[j - 1] ^ exp[e];
            }
        }
        std::uint32_t e0 = lf + gen_log_[0];  // g(0) != 0 for an RS generator
        if (e0 >= big_n) e0 -= big_n;
        par[0] = exp[e0];
    }

    std::vector<Element> cw(message.begin(), message.end());
    cw.resize(n());
    for (int j = 0; j < nroots_; ++j) cw[k_ + j] = par[top - j];
    return cw;
}

std::vector<std::uint32_t> Code::syndromes(std::span<const Element> received) const {
    const gf::Field& f = *field_;
    const std::uint32_t big_n = f.order();
    const Element* exp = f.exp_table().data();
    const int nn = n();

    // S_j = sum over symbols of r * alpha^((fcr+j)*degree); iterate symbols
    // outermost so each inner step is one exp lookup.
    std::vector<std::uint32_t> synd(nroots_, 0);
    for (int s = 0; s < nn; ++s) {
        const Element v = received[s];
        if (v == 0) continue;
        if (v >= f.size()) throw std::invalid_argument("symbol out of field range");
        const std::uint32_t d = static_cast<std::uint32_t>(nn - 1 - s);
        const std::uint32_t step = d % big_n;
        std::uint32_t e =
            static_cast<std::uint32_t>((f.log(v) + static_cast<std::uint64_t>(fcr_) * d) % big_n);
        for (int j = 0; j < nroots_; ++j) {
            synd[j] ^= exp[e];
            e += step;
            if (e >= big_n) e -= big_n;
        }
    }
    return synd;
}

DecodeOutcome Code::decode(std::span<const Element> received) const {
    if (static_cast<int>(received.size()) != n())
        throw std::invalid_argument("received length must equal n");
    const gf::Field& f = *field_;
    const std::uint32_t big_n = f.order();
    const Element* exp = f.exp_table().data();
    const int nn = n();
    const int t = this->t();

    DecodeOutcome out;
    std::vector<std::uint32_t> synd = syndromes(received);

    bool clean = true;
    for (std::uint32_t s : synd)
        if (s != 0) {
            clean = false;
            break;
        }
    if (clean) {
        out.message.assign(received.begin(), received.begin() + k_);
        out.ok = true;
        return out;
    }

    // Berlekamp-Massey over the nroots syndromes.
    std::vector<Element> lambda(nroots_ + 1, 0), prev(nroots_ + 1, 0), tmp(nroots_ + 1, 0);
    lambda[0] = 1;
    prev[0] = 1;
    int len = 0;  // current LFSR length L
    for (int r = 1; r <= nroots_; ++r) {
        Element delta = 0;
        for (int i = 0; i <= len; ++i)
            if (lambda[i]) delta ^= f.mul(lambda[i], synd[r - 1 - i]);

        // prev tracks B(x); shift corresponds to B <- x*B
        if (delta == 0) {
            for (int i = nroots_; i > 0; --i) prev[i] = prev[i - 1];
            prev[0] = 0;
        } else if (2 * len <= r - 1) {
            for (int i = 0; i <= nroots_; ++i) tmp[i] = lambda[i];
            const Element dinv = f.inv(delta);
            for (int i = nroots_; i > 0; --i)
                lambda[i] ^= prev[i - 1] ? f.mul(delta, prev[i - 1]) : 0;
            for (int i = 0; i <= nroots_; ++i) prev[i] = tmp[i] ? f.mul(tmp[i], dinv) : 0;
            len = r - len;
        } else {
            for (int i = nroots_; i > 0; --i)
                lambda[i] ^= prev[i - 1] ? f.mul(delta, prev[i - 1]) : 0;
            for (int i = nroots_; i > 0; --i) prev[i] = prev[i - 1];
            prev[0] = 0;
        }
    }

    int deg = nroots_;
    while (deg > 0 && lambda[deg] == 0) --deg;
    if (len > t || deg != len || len == 0) return out;  // uncorrectable / inconsistent locator

    // Chien-style scan over the shortened positions only: candidate error
    // degrees e in [0, n), testing lambda(alpha^(-e)) via log-form registers.
    struct Reg {
        std::uint32_t log;
        std::uint32_t step;
        int idx;
    };
    std::vector<Reg> regs;
    regs.reserve(deg + 1);
    for (int i = 0; i <= deg; ++i)
        if (lambda[i]) regs.push_back({f.log(lambda[i]), (big_n - static_cast<std::uint32_t>(i) % big_n) % big_n, i});

    std::vector<int> error_degrees;
    error_degrees.reserve(len);
    for (int e = 0; e < nn; ++e) {
        Element v = 0;
        for (auto& rg : regs) v ^= exp[rg.log];
        if (v == 0) {
            error_degrees.push_back(e);
            if (static_cast<int>(error_degrees.size()) == len) break;
        }
        for (auto& rg : regs) {
            rg.log += rg.step;
            if (rg.log >= big_n) rg.log -= big_n;
        }
    }
    if (static_cast<int>(error_degrees.size()) != len) return out;  // roots not found

    // Omega(x) = S(x) * lambda(x) mod x^nroots has degree < len here.
    std::vector<Element> omega(len, 0);
    for (int i = 0; i < len; ++i) {
        Element acc = 0;
        for (int j = 0; j <= i && j <= deg; ++j)
            if (lambda[j] && synd[i - j]) acc ^= f.mul(lambda[j], synd[i - j]);
        omega[i] = acc;
    }

    // Forney magnitudes: Y = X^(1-fcr) * omega(Xinv) / lambda'(Xinv).
    std::vector<Element> corrected(received.begin(), received.end());
    int applied = 0;
    for (int e : error_degrees) {
        const std::uint32_t xinv_log = (big_n - static_cast<std::uint32_t>(e) % big_n) % big_n;
        Element num = 0;
        for (int i = 0; i < len; ++i) {
            if (!omega[i]) continue;
            const std::uint32_t ex =
                static_cast<std::uint32_t>((f.log(omega[i]) + static_cast<std::uint64_t>(xinv_log) * i) % big_n);
            num ^= exp[ex];
        }
        Element den = 0;
        for (int i = 1; i <= deg; i += 2) {
            if (!lambda[i]) continue;
            const std::uint32_t ex = static_cast<std::uint32_t>(
                (f.log(lambda[i]) + static_cast<std::uint64_t>(xinv_log) * (i - 1)) % big_n);
            den ^= exp[ex];
        }
        if (den == 0) return out;  // Forney failure
        if (num == 0) continue;    // zero magnitude: no correction at this root
        Element mag = f.div(num, den);
        if (fcr_ != 1)
            mag = f.mul(mag, f.alpha_pow(static_cast<std::int64_t>(e) * (1 - fcr_)));
        corrected[nn - 1 - e] ^= mag;
        ++applied;
    }

    // Corrections must leave a valid codeword.
    for (std::uint32_t s : syndromes(corrected))
        if (s != 0) return out;

    out.message.assign(corrected.begin(), corrected.begin() + k_);
    out.errors_corrected = applied;
    out.ok = true;
    return out;
}

std::shared_ptr<const Code> default_code() {
    static const std::shared_ptr<const Code> code =
        std::make_shared<const Code>(gf::default_field_18(), kDefaultNroots, kDefaultK, 1);
    return code;
}

}  // namespace trustlink::rs
