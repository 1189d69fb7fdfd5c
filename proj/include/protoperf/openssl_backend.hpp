#pragma once

#include <memory>

#include "protoperf/backend.hpp"

namespace protoperf {

/// Adapter over libcrypto (EVP interfaces). Covers AES in the five block
/// modes, SHA-1/SHA-256/MD5 digests and RSA with PKCS#1 v1.5 padding.
/// RSA key pairs are generated lazily per key size and cached for the
/// lifetime of the backend.
class OpenSslBackend final : public CryptoBackend {
public:
    OpenSslBackend();
    ~OpenSslBackend() override;

    std::string id() const override { return "openssl"; }
    Capabilities capabilities() const override;
    Clock& clock() override { return MonotonicClock::instance(); }

    Bytes sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) override;
    Bytes hash(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) override;
    Bytes asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) override;

    std::vector<DigestVector> digest_vectors() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace protoperf
