#pragma once

#include <optional>
#include <string>
#include <vector>

#include "protoperf/backend.hpp"
#include "protoperf/category.hpp"

namespace protoperf {

/// One cryptographic operation inside a protocol step.
/// Omitted attributes take the documented defaults: algorithm aes/sha1/rsa
/// per class, mode cbc for symmetric ops, key 128 (symmetric) or 1024
/// (asymmetric) bits. `size` is always explicit.
struct CryptoOp {
    Category kind = Category::hash;
    std::uint64_t payload_bytes = 0;
    std::string algorithm;
    std::optional<BlockMode> mode;     // symmetric ops only
    std::optional<unsigned> key_bits;  // symmetric and asymmetric ops

    bool operator==(const CryptoOp&) const = default;
};

struct ProtocolStep {
    std::string sender;
    std::string receiver;
    std::vector<CryptoOp> ops;

    bool operator==(const ProtocolStep&) const = default;
};

struct Protocol {
    std::string id;
    std::vector<ProtocolStep> steps;

    std::size_t op_count() const;
    bool operator==(const Protocol&) const = default;
};

/// Applies class defaults and checks the CryptoOp invariants.
CryptoOp make_op(Category kind, std::uint64_t payload_bytes,
                 std::optional<std::string> algorithm = std::nullopt,
                 std::optional<BlockMode> mode = std::nullopt,
                 std::optional<unsigned> key_bits = std::nullopt);

void validate_protocol(const Protocol& protocol);

/// Parses one protocol block:
///
///   protocol  := "protocol" IDENT "{" step+ "}"
///   step      := IDENT "->" IDENT ":" op (";" op)*
///   op        := KIND "(" attr ("," attr)* ")"
///   KIND      := "senc" | "sdec" | "hash" | "aenc" | "adec"
///   attr      := ("size" | "key") "=" INT | ("alg" | "mode") "=" IDENT
///
/// Whitespace-insensitive; "#" starts a line comment. Rejections carry the
/// 1-based line:column of the offending token.
Protocol parse_protocol(std::string_view text);

/// A corpus file is a sequence of protocol blocks; ids must be unique.
std::vector<Protocol> parse_corpus(std::string_view text);

/// Canonical form: one step per line, attributes in the fixed order
/// size, alg, mode, key, all defaults written explicitly.
std::string serialize_protocol(const Protocol& protocol);
std::string serialize_corpus(const std::vector<Protocol>& corpus);

} // namespace protoperf
