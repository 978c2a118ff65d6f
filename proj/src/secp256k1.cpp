/*
   Copyright 2026 The ModSim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "secp256k1.hpp"

#include <memory>
#include <stdexcept>

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>

namespace modsim::secp256k1 {

namespace {

struct BnDeleter {
    void operator()(BIGNUM* bn) const { BN_clear_free(bn); }
};
struct CtxDeleter {
    void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
};
struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_clear_free(p); }
};
struct GroupDeleter {
    void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
};

using Bn = std::unique_ptr<BIGNUM, BnDeleter>;
using Ctx = std::unique_ptr<BN_CTX, CtxDeleter>;
using Point = std::unique_ptr<EC_POINT, PointDeleter>;

void check(int ok, const char* what) {
    if (ok != 1) throw std::runtime_error(std::string("secp256k1: ") + what + " failed");
}

Bn new_bn() {
    Bn bn(BN_new());
    if (!bn) throw std::bad_alloc();
    return bn;
}

Bn bn_from(const Hash256& bytes) {
    Bn bn(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
    if (!bn) throw std::bad_alloc();
    return bn;
}

Hash256 bytes_from(const BIGNUM* bn) {
    Hash256 out{};
    check(BN_bn2binpad(bn, out.data(), static_cast<int>(out.size())) == 32 ? 1 : 0, "BN_bn2binpad");
    return out;
}

struct Curve {
    std::unique_ptr<EC_GROUP, GroupDeleter> group;
    Bn order;
    Bn half_order;
    Bn prime;
};

const Curve& curve() {
    static const Curve c = [] {
        Curve out;
        out.group.reset(EC_GROUP_new_by_curve_name(NID_secp256k1));
        if (!out.group) throw std::runtime_error("secp256k1 curve unavailable in OpenSSL");
        out.order.reset(BN_dup(EC_GROUP_get0_order(out.group.get())));
        out.half_order = new_bn();
        check(BN_rshift1(out.half_order.get(), out.order.get()), "BN_rshift1");
        out.prime = new_bn();
        check(EC_GROUP_get_curve(out.group.get(), out.prime.get(), nullptr, nullptr, nullptr), "EC_GROUP_get_curve");
        return out;
    }();
    return c;
}

bool in_scalar_range(const BIGNUM* v) { return !BN_is_zero(v) && BN_cmp(v, curve().order.get()) < 0; }

CompressedPoint encode_point(const EC_POINT* p, BN_CTX* ctx) {
    CompressedPoint out{};
    const auto written = EC_POINT_point2oct(curve().group.get(), p, POINT_CONVERSION_COMPRESSED, out.data(),
                                            out.size(), ctx);
    check(written == out.size() ? 1 : 0, "EC_POINT_point2oct");
    return out;
}

Hash256 hmac_sha256(const Hash256& key, std::initializer_list<ByteView> parts) {
    Bytes msg;
    for (auto p : parts) msg.insert(msg.end(), p.begin(), p.end());
    Hash256 out{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len) ==
            nullptr ||
        len != out.size()) {
        throw std::runtime_error("secp256k1: HMAC-SHA256 failed");
    }
    return out;
}

// Deterministic nonce generator of RFC 6979 section 3.2 with qlen = hlen = 256.
class Rfc6979 {
public:
    Rfc6979(const Hash256& secret, const Hash256& digest) {
        Ctx ctx(BN_CTX_new());
        Bn h = bn_from(digest);
        check(BN_nnmod(h.get(), h.get(), curve().order.get(), ctx.get()), "BN_nnmod");
        const Hash256 h_octets = bytes_from(h.get());

        v_.fill(0x01);
        k_.fill(0x00);
        const std::uint8_t zero = 0x00;
        const std::uint8_t one = 0x01;
        k_ = hmac_sha256(k_, {v_, ByteView{&zero, 1}, secret, h_octets});
        v_ = hmac_sha256(k_, {v_});
        k_ = hmac_sha256(k_, {v_, ByteView{&one, 1}, secret, h_octets});
        v_ = hmac_sha256(k_, {v_});
    }

    Bn next() {
        for (;;) {
            if (!first_) {
                const std::uint8_t zero = 0x00;
                k_ = hmac_sha256(k_, {v_, ByteView{&zero, 1}});
                v_ = hmac_sha256(k_, {v_});
            }
            first_ = false;
            v_ = hmac_sha256(k_, {v_});
            Bn k = bn_from(v_);
            if (in_scalar_range(k.get())) return k;
        }
    }

private:
    Hash256 v_{};
    Hash256 k_{};
    bool first_ = true;
};

}  // namespace

bool is_valid_secret(const Hash256& secret) {
    Bn d = bn_from(secret);
    return in_scalar_range(d.get());
}

CompressedPoint public_key(const Hash256& secret) {
    if (!is_valid_secret(secret)) throw std::invalid_argument("secret key outside [1, n-1]");
    const auto& c = curve();
    Ctx ctx(BN_CTX_new());
    Bn d = bn_from(secret);
    Point q(EC_POINT_new(c.group.get()));
    check(EC_POINT_mul(c.group.get(), q.get(), d.get(), nullptr, nullptr, ctx.get()), "EC_POINT_mul");
    return encode_point(q.get(), ctx.get());
}

bool is_valid_public_key(const CompressedPoint& point) {
    const auto& c = curve();
    Ctx ctx(BN_CTX_new());
    Point p(EC_POINT_new(c.group.get()));
    return EC_POINT_oct2point(c.group.get(), p.get(), point.data(), point.size(), ctx.get()) == 1 &&
           EC_POINT_is_on_curve(c.group.get(), p.get(), ctx.get()) == 1;
}

RecoverableSignature sign(const Hash256& secret, const Hash256& digest) {
    if (!is_valid_secret(secret)) throw std::invalid_argument("secret key outside [1, n-1]");
    const auto& c = curve();
    Ctx ctx(BN_CTX_new());
    Bn d = bn_from(secret);
    Bn z = bn_from(digest);
    Rfc6979 nonces(secret, digest);

    Point big_r(EC_POINT_new(c.group.get()));
    Bn rx = new_bn(), ry = new_bn(), r = new_bn(), s = new_bn(), kinv = new_bn();
    for (;;) {
        Bn k = nonces.next();
        check(EC_POINT_mul(c.group.get(), big_r.get(), k.get(), nullptr, nullptr, ctx.get()), "EC_POINT_mul");
        check(EC_POINT_get_affine_coordinates(c.group.get(), big_r.get(), rx.get(), ry.get(), ctx.get()),
              "EC_POINT_get_affine_coordinates");
        check(BN_nnmod(r.get(), rx.get(), c.order.get(), ctx.get()), "BN_nnmod");
        if (BN_is_zero(r.get())) continue;

        // s = k^-1 (z + r d) mod n
        check(BN_mod_mul(s.get(), r.get(), d.get(), c.order.get(), ctx.get()), "BN_mod_mul");
        check(BN_mod_add(s.get(), s.get(), z.get(), c.order.get(), ctx.get()), "BN_mod_add");
        if (BN_mod_inverse(kinv.get(), k.get(), c.order.get(), ctx.get()) == nullptr) continue;
        check(BN_mod_mul(s.get(), s.get(), kinv.get(), c.order.get(), ctx.get()), "BN_mod_mul");
        if (BN_is_zero(s.get())) continue;

        RecoverableSignature sig;
        sig.recid = static_cast<std::uint8_t>((BN_is_odd(ry.get()) ? 1 : 0) | (BN_cmp(rx.get(), c.order.get()) >= 0 ? 2 : 0));
        if (BN_cmp(s.get(), c.half_order.get()) > 0) {
            check(BN_sub(s.get(), c.order.get(), s.get()), "BN_sub");
            sig.recid ^= 1;
        }
        sig.r = bytes_from(r.get());
        sig.s = bytes_from(s.get());
        return sig;
    }
}

std::optional<CompressedPoint> recover(const Hash256& digest, const RecoverableSignature& sig) {
    if (sig.recid > 3) return std::nullopt;
    const auto& c = curve();
    Bn r = bn_from(sig.r);
    Bn s = bn_from(sig.s);
    if (!in_scalar_range(r.get()) || !in_scalar_range(s.get())) return std::nullopt;
    if (BN_cmp(s.get(), c.half_order.get()) > 0) return std::nullopt;

    Ctx ctx(BN_CTX_new());
    Bn x(BN_dup(r.get()));
    if (sig.recid & 2) check(BN_add(x.get(), x.get(), c.order.get()), "BN_add");
    if (BN_cmp(x.get(), c.prime.get()) >= 0) return std::nullopt;

    Point big_r(EC_POINT_new(c.group.get()));
    if (EC_POINT_set_compressed_coordinates(c.group.get(), big_r.get(), x.get(), sig.recid & 1, ctx.get()) != 1) {
        return std::nullopt;
    }

    // Q = r^-1 (s R - z G)
    Bn rinv = new_bn(), u1 = new_bn(), u2 = new_bn();
    Bn z = bn_from(digest);
    if (BN_mod_inverse(rinv.get(), r.get(), c.order.get(), ctx.get()) == nullptr) return std::nullopt;
    check(BN_nnmod(z.get(), z.get(), c.order.get(), ctx.get()), "BN_nnmod");
    check(BN_mod_sub(u1.get(), c.order.get(), z.get(), c.order.get(), ctx.get()), "BN_mod_sub");
    check(BN_mod_mul(u1.get(), u1.get(), rinv.get(), c.order.get(), ctx.get()), "BN_mod_mul");
    check(BN_mod_mul(u2.get(), s.get(), rinv.get(), c.order.get(), ctx.get()), "BN_mod_mul");

    Point q(EC_POINT_new(c.group.get()));
    check(EC_POINT_mul(c.group.get(), q.get(), u1.get(), big_r.get(), u2.get(), ctx.get()), "EC_POINT_mul");
    if (EC_POINT_is_at_infinity(c.group.get(), q.get()) == 1) return std::nullopt;
    return encode_point(q.get(), ctx.get());
}

bool is_low_s(const Hash256& s) {
    Bn v = bn_from(s);
    return BN_cmp(v.get(), curve().half_order.get()) <= 0;
}

Hash256 negate_scalar(const Hash256& s) {
    Bn v = bn_from(s);
    Bn out = new_bn();
    check(BN_sub(out.get(), curve().order.get(), v.get()), "BN_sub");
    return bytes_from(out.get());
}

}  // namespace modsim::secp256k1
