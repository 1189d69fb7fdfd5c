#pragma once

#include "protoperf/backend.hpp"

namespace protoperf {

/// Analytic per-operation cost in nanoseconds. Symmetric and hash costs
/// scale with payload bytes, asymmetric costs with key bits.
struct SyntheticCosts {
    double sym_encrypt_base = 600.0;
    double sym_encrypt_per_byte = 3.0;
    double sym_decrypt_base = 650.0;
    double sym_decrypt_per_byte = 3.2;
    double hash_base = 400.0;
    double hash_per_byte = 1.5;
    double asym_encrypt_base = 20000.0;
    double asym_encrypt_per_keybit = 40.0;
    double asym_decrypt_base = 100000.0;
    double asym_decrypt_per_keybit = 700.0;

    double cost_ns(Category category, std::size_t payload_bytes, unsigned key_bits) const;
};

struct SyntheticOptions {
    SyntheticCosts costs;
    std::set<unsigned> symmetric_keys{128, 256};
    std::set<unsigned> asymmetric_keys{512, 768, 1024, 1536, 2048, 3072};
};

/// Clock whose time is advanced explicitly by the synthetic backend.
class VirtualClock final : public Clock {
public:
    std::uint64_t now_ns() override { return now_; }
    double resolution_ns() override { return 1.0; }
    void advance(double ns);

private:
    std::uint64_t now_ = 0;
};

namespace synthetic_detail {
Bytes xor_keystream_apply(ByteSpan data, unsigned key_bits);
Bytes fnv_digest(ByteSpan data);
Bytes frame_encode(ByteSpan payload, unsigned key_bits);
Bytes frame_decode(ByteSpan ciphertext, unsigned key_bits);
Capabilities stand_in_capabilities(const SyntheticOptions& options);
std::vector<DigestVector> fnv_digest_vectors();
} // namespace synthetic_detail

/// Deterministic stand-in backend: operations cost nothing in wall-clock
/// time and advance a virtual clock by their analytic cost, so every
/// timing-bearing run is exactly reproducible. Advertises the default
/// algorithm names (aes, sha1/sha256, rsa) and fakes them with XOR and
/// FNV transforms that honor the round-trip contracts.
class SyntheticBackend : public CryptoBackend {
public:
    explicit SyntheticBackend(SyntheticOptions options = {});

    std::string id() const override { return "synthetic"; }
    Capabilities capabilities() const override;
    Clock& clock() override { return clock_; }

    Bytes sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) override;
    Bytes hash(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) override;

    std::vector<DigestVector> digest_vectors() const override;

    const SyntheticCosts& costs() const { return options_.costs; }

private:
    SyntheticOptions options_;
    VirtualClock clock_;
};

/// Calibration backend: same transforms and capability surface, but each
/// operation busy-waits on the monotonic clock until its analytic cost has
/// elapsed, so the real timing path can be checked against known numbers.
class BusywaitBackend final : public CryptoBackend {
public:
    explicit BusywaitBackend(SyntheticOptions options = {});

    std::string id() const override { return "busywait"; }
    Capabilities capabilities() const override;
    Clock& clock() override { return MonotonicClock::instance(); }

    Bytes sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) override;
    Bytes hash(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) override;

    std::vector<DigestVector> digest_vectors() const override;

    const SyntheticCosts& costs() const { return options_.costs; }

private:
    void busy_wait(double cost_ns);

    SyntheticOptions options_;
};

} // namespace protoperf
