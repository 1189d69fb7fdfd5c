#include "protoperf/openssl_backend.hpp"

#include <map>
#include <sstream>

#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/rsa.h>

#include "protoperf/error.hpp"

namespace protoperf {

namespace {

constexpr unsigned kAesKeyBits[] = {128, 192, 256};
// libcrypto ships key-size-specific modexp fast paths (1024/2048-bit private
// ops are accelerated, 1536/3072 fall back to the generic ladder), which
// makes cost non-monotone in key bits across those sizes. The advertised
// set sticks to sizes on the same curve so a class-level fit stays sane.
constexpr unsigned kRsaKeyBits[] = {512, 768, 1024, 2048};

[[noreturn]] void throw_openssl_error(const std::string& what) {
    std::ostringstream msg;
    msg << what;
    unsigned long code;
    while ((code = ERR_get_error()) != 0) {
        char buf[256];
        ERR_error_string_n(code, buf, sizeof buf);
        msg << "; " << buf;
    }
    throw Error(msg.str());
}

std::string cipher_name(const PrimitiveSpec& spec) {
    std::ostringstream name;
    name << spec.algorithm << "-" << spec.key_bits << "-" << to_label(*spec.mode);
    return name.str();
}

struct EvpPkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using PKeyPtr = std::unique_ptr<EVP_PKEY, EvpPkeyDeleter>;

struct EvpPkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
using PKeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, EvpPkeyCtxDeleter>;

struct EvpCipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, EvpCipherCtxDeleter>;

} // namespace

struct OpenSslBackend::Impl {
    std::map<unsigned, PKeyPtr> rsa_keys;

    EVP_PKEY* rsa_key(unsigned key_bits) {
        auto it = rsa_keys.find(key_bits);
        if (it != rsa_keys.end()) return it->second.get();

        PKeyCtxPtr ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_RSA, nullptr));
        if (!ctx || EVP_PKEY_keygen_init(ctx.get()) <= 0)
            throw_openssl_error("RSA keygen init failed");
        if (EVP_PKEY_CTX_set_rsa_keygen_bits(ctx.get(), int(key_bits)) <= 0)
            throw_openssl_error("RSA keygen bits rejected");
        EVP_PKEY* raw = nullptr;
        if (EVP_PKEY_keygen(ctx.get(), &raw) <= 0)
            throw_openssl_error("RSA keygen failed for " + std::to_string(key_bits) + " bits");
        auto [inserted, ok] = rsa_keys.emplace(key_bits, PKeyPtr(raw));
        (void)ok;
        return inserted->second.get();
    }
};

OpenSslBackend::OpenSslBackend() : impl_(std::make_unique<Impl>()) {}
OpenSslBackend::~OpenSslBackend() = default;

Capabilities OpenSslBackend::capabilities() const {
    Capabilities caps;
    Capabilities::SymmetricAlgorithm aes;
    aes.modes = {BlockMode::ecb, BlockMode::cbc, BlockMode::cfb, BlockMode::ofb, BlockMode::ctr};
    aes.key_bits.insert(std::begin(kAesKeyBits), std::end(kAesKeyBits));
    caps.symmetric["aes"] = aes;
    caps.hashes = {"sha1", "sha256", "md5"};
    caps.asymmetric["rsa"].insert(std::begin(kRsaKeyBits), std::end(kRsaKeyBits));
    return caps;
}

namespace {

Bytes run_cipher(const PrimitiveSpec& spec, ByteSpan input, bool encrypt) {
    const std::string name = cipher_name(spec);
    const EVP_CIPHER* cipher = EVP_get_cipherbyname(name.c_str());
    if (!cipher) throw CapabilityError("libcrypto has no cipher named " + name);

    // Deterministic key and IV; timing runs do not need secrecy. Derived
    // from a category-normalized spec so encrypt and decrypt agree.
    PrimitiveSpec key_spec = spec;
    key_spec.category = Category::symmetric_encrypt;
    const Bytes key = fixed_payload(key_spec, EVP_CIPHER_key_length(cipher));
    const int iv_len = EVP_CIPHER_iv_length(cipher);
    PrimitiveSpec iv_spec = key_spec;
    iv_spec.algorithm += "-iv";
    const Bytes iv = fixed_payload(iv_spec, std::size_t(iv_len));

    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw_openssl_error("EVP_CIPHER_CTX_new failed");
    if (EVP_CipherInit_ex(ctx.get(), cipher, nullptr, key.data(), iv_len > 0 ? iv.data() : nullptr,
                          encrypt ? 1 : 0) != 1)
        throw_openssl_error("cipher init failed for " + name);

    Bytes out(input.size() + std::size_t(EVP_CIPHER_block_size(cipher)) + 16);
    int out_len = 0;
    if (EVP_CipherUpdate(ctx.get(), out.data(), &out_len, input.data(), int(input.size())) != 1)
        throw_openssl_error("cipher update failed for " + name);
    int final_len = 0;
    if (EVP_CipherFinal_ex(ctx.get(), out.data() + out_len, &final_len) != 1)
        throw_openssl_error("cipher final failed for " + name);
    out.resize(std::size_t(out_len) + std::size_t(final_len));
    return out;
}

} // namespace

Bytes OpenSslBackend::sym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(
        PrimitiveSpec{Category::symmetric_encrypt, spec.algorithm, spec.mode, spec.key_bits});
    return run_cipher(spec, payload, true);
}

Bytes OpenSslBackend::sym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) {
    require_supported(
        PrimitiveSpec{Category::symmetric_decrypt, spec.algorithm, spec.mode, spec.key_bits});
    return run_cipher(spec, ciphertext, false);
}

Bytes OpenSslBackend::hash(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(PrimitiveSpec{Category::hash, spec.algorithm, std::nullopt, 0});
    const EVP_MD* md = EVP_get_digestbyname(spec.algorithm.c_str());
    if (!md) throw CapabilityError("libcrypto has no digest named " + spec.algorithm);
    Bytes out(EVP_MAX_MD_SIZE);
    unsigned out_len = 0;
    if (EVP_Digest(payload.data(), payload.size(), out.data(), &out_len, md, nullptr) != 1)
        throw_openssl_error("digest failed for " + spec.algorithm);
    out.resize(out_len);
    return out;
}

Bytes OpenSslBackend::asym_encrypt(const PrimitiveSpec& spec, ByteSpan payload) {
    require_supported(
        PrimitiveSpec{Category::asymmetric_encrypt, spec.algorithm, std::nullopt, spec.key_bits});
    if (std::int64_t(payload.size()) > asym_block_capacity(spec.key_bits))
        throw CapabilityError("payload exceeds asymmetric block capacity of " +
                              std::to_string(asym_block_capacity(spec.key_bits)) + " bytes");
    EVP_PKEY* key = impl_->rsa_key(spec.key_bits);
    PKeyCtxPtr ctx(EVP_PKEY_CTX_new(key, nullptr));
    if (!ctx || EVP_PKEY_encrypt_init(ctx.get()) <= 0)
        throw_openssl_error("RSA encrypt init failed");
    if (EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_PADDING) <= 0)
        throw_openssl_error("RSA padding selection failed");
    std::size_t out_len = 0;
    if (EVP_PKEY_encrypt(ctx.get(), nullptr, &out_len, payload.data(), payload.size()) <= 0)
        throw_openssl_error("RSA encrypt sizing failed");
    Bytes out(out_len);
    if (EVP_PKEY_encrypt(ctx.get(), out.data(), &out_len, payload.data(), payload.size()) <= 0)
        throw_openssl_error("RSA encrypt failed");
    out.resize(out_len);
    return out;
}

Bytes OpenSslBackend::asym_decrypt(const PrimitiveSpec& spec, ByteSpan ciphertext) {
    require_supported(
        PrimitiveSpec{Category::asymmetric_decrypt, spec.algorithm, std::nullopt, spec.key_bits});
    EVP_PKEY* key = impl_->rsa_key(spec.key_bits);
    PKeyCtxPtr ctx(EVP_PKEY_CTX_new(key, nullptr));
    if (!ctx || EVP_PKEY_decrypt_init(ctx.get()) <= 0)
        throw_openssl_error("RSA decrypt init failed");
    if (EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_PADDING) <= 0)
        throw_openssl_error("RSA padding selection failed");
    std::size_t out_len = 0;
    if (EVP_PKEY_decrypt(ctx.get(), nullptr, &out_len, ciphertext.data(), ciphertext.size()) <= 0)
        throw_openssl_error("RSA decrypt sizing failed");
    Bytes out(out_len);
    if (EVP_PKEY_decrypt(ctx.get(), out.data(), &out_len, ciphertext.data(), ciphertext.size()) <= 0)
        throw_openssl_error("RSA decrypt failed");
    out.resize(out_len);
    return out;
}

std::vector<DigestVector> OpenSslBackend::digest_vectors() const {
    // Published SHA-1 and SHA-256 known-answer vectors.
    return {
        {"sha1", Bytes{}, "da39a3ee5e6b4b0d3255bfef95601890afd80709"},
        {"sha1", Bytes{'a', 'b', 'c'}, "a9993e364706816aba3e25717850c26c9cd0d89d"},
        {"sha256", Bytes{'a', 'b', 'c'},
         "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"},
    };
}

} // namespace protoperf
