#include "protoperf/backend.hpp"

#include <sstream>

#include "protoperf/error.hpp"
#include "protoperf/openssl_backend.hpp"
#include "protoperf/synthetic_backend.hpp"

namespace protoperf {

std::string_view to_label(BlockMode mode) {
    switch (mode) {
        case BlockMode::ecb: return "ecb";
        case BlockMode::cbc: return "cbc";
        case BlockMode::cfb: return "cfb";
        case BlockMode::ofb: return "ofb";
        case BlockMode::ctr: return "ctr";
    }
    throw InvalidArgument("unrepresentable block mode");
}

BlockMode block_mode_from_label(std::string_view label) {
    std::string lower(label);
    for (char& ch : lower) ch = char(std::tolower(static_cast<unsigned char>(ch)));
    if (lower == "ecb") return BlockMode::ecb;
    if (lower == "cbc") return BlockMode::cbc;
    if (lower == "cfb") return BlockMode::cfb;
    if (lower == "ofb") return BlockMode::ofb;
    if (lower == "ctr") return BlockMode::ctr;
    throw InvalidArgument("unknown block mode \"" + std::string(label) +
                          "\" (expected ecb, cbc, cfb, ofb or ctr)");
}

void validate_spec_shape(const PrimitiveSpec& spec) {
    if (spec.algorithm.empty()) throw InvalidArgument("spec: algorithm must be non-empty");
    if (is_symmetric(spec.category)) {
        if (!spec.mode) throw InvalidArgument("spec: symmetric categories require a mode");
        if (spec.key_bits == 0) throw InvalidArgument("spec: symmetric categories require key_bits");
    } else {
        if (spec.mode)
            throw InvalidArgument("spec: mode is only valid on symmetric categories");
        if (is_asymmetric(spec.category) && spec.key_bits == 0)
            throw InvalidArgument("spec: asymmetric categories require key_bits");
    }
}

std::int64_t asym_block_capacity(unsigned key_bits) {
    return std::int64_t(key_bits) / 8 - 11;
}

bool Capabilities::supports(const PrimitiveSpec& spec) const {
    if (is_symmetric(spec.category)) {
        auto it = symmetric.find(spec.algorithm);
        if (it == symmetric.end()) return false;
        return spec.mode && it->second.modes.count(*spec.mode) &&
               it->second.key_bits.count(spec.key_bits);
    }
    if (spec.category == Category::hash) return hashes.count(spec.algorithm) != 0;
    auto it = asymmetric.find(spec.algorithm);
    return it != asymmetric.end() && it->second.count(spec.key_bits) != 0;
}

std::string Capabilities::describe() const {
    std::ostringstream out;
    out << "supported:";
    for (const auto& [alg, caps] : symmetric) {
        out << " " << alg << "(modes:";
        for (BlockMode m : caps.modes) out << " " << to_label(m);
        out << "; key_bits:";
        for (unsigned k : caps.key_bits) out << " " << k;
        out << ")";
    }
    if (!hashes.empty()) {
        out << " hashes:";
        for (const auto& h : hashes) out << " " << h;
    }
    for (const auto& [alg, keys] : asymmetric) {
        out << " " << alg << "(key_bits:";
        for (unsigned k : keys) out << " " << k;
        out << ")";
    }
    return out.str();
}

void CryptoBackend::require_supported(const PrimitiveSpec& spec) const {
    validate_spec_shape(spec);
    if (!capabilities().supports(spec)) {
        std::ostringstream msg;
        msg << "backend \"" << id() << "\" does not support " << category_cli_name(spec.category)
            << ":" << spec.algorithm;
        if (spec.mode) msg << ":" << to_label(*spec.mode);
        msg << ":" << spec.key_bits << "; " << capabilities().describe();
        throw CapabilityError(msg.str());
    }
}

void CryptoBackend::self_test() {
    const Capabilities caps = capabilities();

    for (const DigestVector& vec : digest_vectors()) {
        PrimitiveSpec spec{Category::hash, vec.algorithm, std::nullopt, 0};
        const Bytes digest = hash(spec, vec.input);
        if (to_hex(digest) != vec.hex_digest) {
            throw Error("backend \"" + id() + "\" self test: digest mismatch for " +
                        vec.algorithm + " (got " + to_hex(digest) + ", want " + vec.hex_digest +
                        ")");
        }
    }

    if (!caps.symmetric.empty()) {
        const auto& [alg, sym] = *caps.symmetric.begin();
        PrimitiveSpec spec{Category::symmetric_encrypt, alg, *sym.modes.begin(),
                           *sym.key_bits.begin()};
        const Bytes payload = fixed_payload(spec, 1024);
        const Bytes ct = sym_encrypt(spec, payload);
        const Bytes pt = sym_decrypt(spec, ct);
        if (pt != payload)
            throw Error("backend \"" + id() + "\" self test: symmetric round trip failed for " +
                        alg);
    }

    if (!caps.asymmetric.empty()) {
        const auto& [alg, keys] = *caps.asymmetric.begin();
        const unsigned key_bits = *keys.begin();
        PrimitiveSpec spec{Category::asymmetric_encrypt, alg, std::nullopt, key_bits};
        const auto capacity = asym_block_capacity(key_bits);
        if (capacity >= 1) {
            const Bytes payload = fixed_payload(spec, std::size_t(std::min<std::int64_t>(capacity, 32)));
            const Bytes ct = asym_encrypt(spec, payload);
            const Bytes pt = asym_decrypt(spec, ct);
            if (pt != payload)
                throw Error("backend \"" + id() +
                            "\" self test: asymmetric round trip failed for " + alg);
        }
    }

    self_tested_ = true;
}

std::string to_hex(ByteSpan data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes fixed_payload(const PrimitiveSpec& spec, std::size_t size) {
    // splitmix64 stream seeded from the spec fields, so every run times the
    // same bytes for a given (spec, size).
    std::uint64_t seed = 0x9e3779b97f4a7c15ull ^ (std::uint64_t(spec.category) << 56) ^
                         (std::uint64_t(spec.key_bits) << 32) ^ size;
    for (char ch : spec.algorithm) seed = seed * 31 + std::uint8_t(ch);
    if (spec.mode) seed = seed * 31 + (std::uint64_t(*spec.mode) + 1);
    Bytes out(size);
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < size; i += 8) {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        for (std::size_t b = 0; b < 8 && i + b < size; ++b)
            out[i + b] = std::uint8_t(z >> (b * 8));
    }
    return out;
}

std::unique_ptr<CryptoBackend> make_backend(const std::string& id) {
    if (id == "synthetic") return std::make_unique<SyntheticBackend>();
    if (id == "busywait") return std::make_unique<BusywaitBackend>();
    if (id == "openssl") return std::make_unique<OpenSslBackend>();
    throw InvalidArgument("unknown backend \"" + id +
                          "\" (expected synthetic, busywait or openssl)");
}

} // namespace protoperf
