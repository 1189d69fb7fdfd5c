#pragma once

#include <array>
#include <string_view>

#include "protoperf/error.hpp"

namespace protoperf {

/// The five algorithm classes the cost model distinguishes. Estimation is
/// keyed on these, never on individual algorithms.
enum class Category {
    symmetric_encrypt,
    symmetric_decrypt,
    hash,
    asymmetric_encrypt,
    asymmetric_decrypt,
};

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::symmetric_encrypt, Category::symmetric_decrypt, Category::hash,
    Category::asymmetric_encrypt, Category::asymmetric_decrypt,
};

constexpr bool is_symmetric(Category c) {
    return c == Category::symmetric_encrypt || c == Category::symmetric_decrypt;
}

constexpr bool is_asymmetric(Category c) {
    return c == Category::asymmetric_encrypt || c == Category::asymmetric_decrypt;
}

/// "symmetric", "hash" or "asymmetric": the CSV `category` column.
std::string_view category_label(Category c);

/// "encrypt", "decrypt" or "digest": the CSV `operation` column.
std::string_view operation_label(Category c);

/// Registry JSON key: "symmetric.encrypt", ..., "hash.digest".
std::string_view registry_key(Category c);

/// Inverse of registry_key.
Category category_from_registry_key(std::string_view key);

/// CLI-facing name: "symmetric-encrypt", ..., "hash".
std::string_view category_cli_name(Category c);
Category category_from_cli_name(std::string_view name);

/// DSL keyword: senc, sdec, hash, aenc, adec.
std::string_view category_keyword(Category c);

/// Default algorithm per class: aes / sha1 / rsa.
std::string_view default_algorithm(Category c);

} // namespace protoperf
