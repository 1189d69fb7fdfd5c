#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "protoperf/category.hpp"
#include "protoperf/clock.hpp"

namespace protoperf {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

enum class BlockMode { ecb, cbc, cfb, ofb, ctr };

std::string_view to_label(BlockMode mode);
BlockMode block_mode_from_label(std::string_view label);

/// One cryptographic primitive to exercise: class, algorithm and parameters.
struct PrimitiveSpec {
    Category category = Category::hash;
    std::string algorithm;
    std::optional<BlockMode> mode; // present iff category is symmetric
    unsigned key_bits = 0;

    bool operator==(const PrimitiveSpec&) const = default;
};

/// Rejects specs whose shape is wrong regardless of backend (mode on a
/// non-symmetric spec, missing mode on a symmetric one, ...).
void validate_spec_shape(const PrimitiveSpec& spec);

/// Maximum plaintext bytes a single asymmetric invocation can carry:
/// key_bits/8 minus an 11-byte padding reserve.
std::int64_t asym_block_capacity(unsigned key_bits);

/// What a backend can actually run, reported per algorithm.
struct Capabilities {
    struct SymmetricAlgorithm {
        std::set<BlockMode> modes;
        std::set<unsigned> key_bits;
    };
    std::map<std::string, SymmetricAlgorithm> symmetric;
    std::set<std::string> hashes;
    std::map<std::string, std::set<unsigned>> asymmetric; // algorithm -> key bits

    bool supports(const PrimitiveSpec& spec) const;
    /// Human-readable list of supported combinations, for capability errors.
    std::string describe() const;
};

/// Known-answer vector a backend promises for its self test.
struct DigestVector {
    std::string algorithm;
    Bytes input;
    std::string hex_digest;
};

/// Provider of actual cryptographic operations. The low-level operations
/// key off algorithm/mode/key_bits; `category` is honored by the layers
/// above. Instances are owned exclusively by one harness during a run.
class CryptoBackend {
public:
    virtual ~CryptoBackend() = default;

    virtual std::string id() const = 0;
    virtual Capabilities capabilities() const = 0;

    /// Timing source measurements of this backend must use.
    virtual Clock& clock() = 0;

    virtual Bytes sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) = 0;
    virtual Bytes sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) = 0;
    virtual Bytes hash(const PrimitiveSpec& spec, ByteSpan payload) = 0;
    virtual Bytes asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) = 0;
    virtual Bytes asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) = 0;

    /// Known-answer vectors checked by self_test.
    virtual std::vector<DigestVector> digest_vectors() const = 0;

    /// Round-trips a symmetric and an asymmetric payload and checks the
    /// digest vectors. Timing refuses to start until this has passed once.
    void self_test();
    bool self_tested() const { return self_tested_; }

    /// Throws CapabilityError (listing supported values) unless the spec
    /// is well-formed and supported.
    void require_supported(const PrimitiveSpec& spec) const;

private:
    bool self_tested_ = false;
};

/// Factory over the built-in backend ids: "synthetic", "busywait", "openssl".
std::unique_ptr<CryptoBackend> make_backend(const std::string& id);

std::string to_hex(ByteSpan data);

/// Deterministic pseudo-random payload for (spec, size); repeated runs time
/// identical inputs.
Bytes fixed_payload(const PrimitiveSpec& spec, std::size_t size);

} // namespace protoperf
