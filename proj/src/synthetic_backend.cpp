#include "protoperf/synthetic_backend.hpp"

#include <cmath>

#include "protoperf/error.hpp"

namespace protoperf {

double SyntheticCosts::cost_ns(Category category, std::size_t payload_bytes,
                               unsigned key_bits) const {
    switch (category) {
        case Category::symmetric_encrypt:
            return sym_encrypt_base + sym_encrypt_per_byte * double(payload_bytes);
        case Category::symmetric_decrypt:
            return sym_decrypt_base + sym_decrypt_per_byte * double(payload_bytes);
        case Category::hash: return hash_base + hash_per_byte * double(payload_bytes);
        case Category::asymmetric_encrypt:
            return asym_encrypt_base + asym_encrypt_per_keybit * double(key_bits);
        case Category::asymmetric_decrypt:
            return asym_decrypt_base + asym_decrypt_per_keybit * double(key_bits);
    }
    throw InvalidArgument("unrepresentable category");
}

void VirtualClock::advance(double ns) {
    now_ += std::uint64_t(std::llround(std::max(0.0, ns)));
}

namespace synthetic_detail {

namespace {

std::uint64_t splitmix_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(ByteSpan data) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : data) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

Bytes xor_keystream_apply(ByteSpan data, unsigned key_bits) {
    Bytes out(data.begin(), data.end());
    std::uint64_t state = 0x5bd1e995u ^ (std::uint64_t(key_bits) << 24);
    for (std::size_t i = 0; i < out.size(); i += 8) {
        const std::uint64_t word = splitmix_next(state);
        for (std::size_t b = 0; b < 8 && i + b < out.size(); ++b)
            out[i + b] ^= std::uint8_t(word >> (b * 8));
    }
    return out;
}

Bytes fnv_digest(ByteSpan data) {
    // 20-byte digest: splitmix stream seeded with the FNV-1a hash.
    std::uint64_t state = fnv1a64(data);
    Bytes out(20);
    for (std::size_t i = 0; i < out.size(); i += 8) {
        const std::uint64_t word = splitmix_next(state);
        for (std::size_t b = 0; b < 8 && i + b < out.size(); ++b)
            out[i + b] = std::uint8_t(word >> (b * 8));
    }
    return out;
}

Bytes frame_encode(ByteSpan payload, unsigned key_bits) {
    // Fixed-width frame mimicking an asymmetric block: [len:2][payload][fill].
    const std::size_t block = key_bits / 8;
    if (payload.size() + 2 > block)
        throw CapabilityError("synthetic asymmetric payload exceeds block capacity");
    Bytes frame(block, 0);
    frame[0] = std::uint8_t(payload.size() >> 8);
    frame[1] = std::uint8_t(payload.size() & 0xff);
    std::copy(payload.begin(), payload.end(), frame.begin() + 2);
    return xor_keystream_apply(frame, key_bits ^ 0xa5a5u);
}

Bytes frame_decode(ByteSpan ciphertext, unsigned key_bits) {
    const std::size_t block = key_bits / 8;
    if (ciphertext.size() != block)
        throw InvalidArgument("synthetic asymmetric ciphertext has wrong length");
    const Bytes frame = xor_keystream_apply(ciphertext, key_bits ^ 0xa5a5u);
    const std::size_t len = (std::size_t(frame[0]) << 8) | frame[1];
    if (len + 2 > block) throw InvalidArgument("synthetic asymmetric frame is corrupt");
    return Bytes(frame.begin() + 2, frame.begin() + 2 + len);
}

Capabilities stand_in_capabilities(const SyntheticOptions& options) {
    Capabilities caps;
    caps.symmetric["aes"] = Capabilities::SymmetricAlgorithm{
        {BlockMode::ecb, BlockMode::cbc, BlockMode::cfb, BlockMode::ofb, BlockMode::ctr},
        options.symmetric_keys};
    caps.hashes = {"sha1", "sha256"};
    caps.asymmetric["rsa"] = options.asymmetric_keys;
    return caps;
}

std::vector<DigestVector> fnv_digest_vectors() {
    // Frozen outputs of fnv_digest for two fixed inputs.
    return {
        {"sha1", Bytes{}, "6bda67f37f53a04e7a2d9836f3c0c5c5efb29a38"},
        {"sha1", Bytes{'a', 'b', 'c'}, "033e106b63e90cd9bcefef96d22e4a15e461b879"},
    };
}

} // namespace synthetic_detail

using namespace synthetic_detail;

SyntheticBackend::SyntheticBackend(SyntheticOptions options) : options_(std::move(options)) {}

Capabilities SyntheticBackend::capabilities() const { return stand_in_capabilities(options_); }

Bytes SyntheticBackend::sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::symmetric_encrypt, spec.algorithm, spec.mode,
                                    spec.key_bits});
    clock_.advance(options_.costs.cost_ns(Category::symmetric_encrypt, payload.size(), spec.key_bits));
    return xor_keystream_apply(payload, spec.key_bits);
}

Bytes SyntheticBackend::sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) {
    require_supported(PrimitiveSpec{Category::symmetric_decrypt, spec.algorithm, spec.mode,
                                    spec.key_bits});
    clock_.advance(
        options_.costs.cost_ns(Category::symmetric_decrypt, ciphertext.size(), spec.key_bits));
    return xor_keystream_apply(ciphertext, spec.key_bits);
}

Bytes SyntheticBackend::hash(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::hash, spec.algorithm, std::nullopt, 0});
    clock_.advance(options_.costs.cost_ns(Category::hash, payload.size(), 0));
    return fnv_digest(payload);
}

Bytes SyntheticBackend::asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::asymmetric_encrypt, spec.algorithm, std::nullopt,
                                    spec.key_bits});
    if (std::int64_t(payload.size()) > asym_block_capacity(spec.key_bits))
        throw CapabilityError("payload exceeds asymmetric block capacity of " +
                              std::to_string(asym_block_capacity(spec.key_bits)) + " bytes");
    clock_.advance(options_.costs.cost_ns(Category::asymmetric_encrypt, payload.size(), spec.key_bits));
    return frame_encode(payload, spec.key_bits);
}

Bytes SyntheticBackend::asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) {
    require_supported(PrimitiveSpec{Category::asymmetric_decrypt, spec.algorithm, std::nullopt,
                                    spec.key_bits});
    clock_.advance(
        options_.costs.cost_ns(Category::asymmetric_decrypt, ciphertext.size(), spec.key_bits));
    return frame_decode(ciphertext, spec.key_bits);
}

std::vector<DigestVector> SyntheticBackend::digest_vectors() const { return fnv_digest_vectors(); }

BusywaitBackend::BusywaitBackend(SyntheticOptions options) : options_(std::move(options)) {}

Capabilities BusywaitBackend::capabilities() const { return stand_in_capabilities(options_); }

void BusywaitBackend::busy_wait(double cost_ns) {
    MonotonicClock& clk = MonotonicClock::instance();
    const std::uint64_t start = clk.now_ns();
    const std::uint64_t target = start + std::uint64_t(std::llround(std::max(0.0, cost_ns)));
    while (clk.now_ns() < target) {
    }
}

Bytes BusywaitBackend::sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::symmetric_encrypt, spec.algorithm, spec.mode,
                                    spec.key_bits});
    busy_wait(options_.costs.cost_ns(Category::symmetric_encrypt, payload.size(), spec.key_bits));
    return xor_keystream_apply(payload, spec.key_bits);
}

Bytes BusywaitBackend::sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) {
    require_supported(PrimitiveSpec{Category::symmetric_decrypt, spec.algorithm, spec.mode,
                                    spec.key_bits});
    busy_wait(options_.costs.cost_ns(Category::symmetric_decrypt, ciphertext.size(), spec.key_bits));
    return xor_keystream_apply(ciphertext, spec.key_bits);
}

Bytes BusywaitBackend::hash(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::hash, spec.algorithm, std::nullopt, 0});
    busy_wait(options_.costs.cost_ns(Category::hash, payload.size(), 0));
    return fnv_digest(payload);
}

Bytes BusywaitBackend::asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::asymmetric_encrypt, spec.algorithm, std::nullopt,
                                    spec.key_bits});
    if (std::int64_t(payload.size()) > asym_block_capacity(spec.key_bits))
        throw CapabilityError("payload exceeds asymmetric block capacity of " +
                              std::to_string(asym_block_capacity(spec.key_bits)) + " bytes");
    busy_wait(options_.costs.cost_ns(Category::asymmetric_encrypt, payload.size(), spec.key_bits));
    return frame_encode(payload, spec.key_bits);
}

Bytes BusywaitBackend::asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) {
    require_supported(PrimitiveSpec{Category::asymmetric_decrypt, spec.algorithm, std::nullopt,
                                    spec.key_bits});
    busy_wait(options_.costs.cost_ns(Category::asymmetric_decrypt, ciphertext.size(), spec.key_bits));
    return frame_decode(ciphertext, spec.key_bits);
}

std::vector<DigestVector> BusywaitBackend::digest_vectors() const { return fnv_digest_vectors(); }

} // namespace protoperf
