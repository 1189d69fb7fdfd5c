#include "protoperf/category.hpp"

#include <string>

namespace protoperf {

std::string_view category_label(Category c) {
    switch (c) {
        case Category::symmetric_encrypt:
        case Category::symmetric_decrypt: return "symmetric";
        case Category::hash: return "hash";
        case Category::asymmetric_encrypt:
        case Category::asymmetric_decrypt: return "asymmetric";
    }
    throw InvalidArgument("unrepresentable category");
}

std::string_view operation_label(Category c) {
    switch (c) {
        case Category::symmetric_encrypt:
        case Category::asymmetric_encrypt: return "encrypt";
        case Category::symmetric_decrypt:
        case Category::asymmetric_decrypt: return "decrypt";
        case Category::hash: return "digest";
    }
    throw InvalidArgument("unrepresentable category");
}

std::string_view registry_key(Category c) {
    switch (c) {
        case Category::symmetric_encrypt: return "symmetric.encrypt";
        case Category::symmetric_decrypt: return "symmetric.decrypt";
        case Category::hash: return "hash.digest";
        case Category::asymmetric_encrypt: return "asymmetric.encrypt";
        case Category::asymmetric_decrypt: return "asymmetric.decrypt";
    }
    throw InvalidArgument("unrepresentable category");
}

Category category_from_registry_key(std::string_view key) {
    for (Category c : kAllCategories)
        if (registry_key(c) == key) return c;
    throw FormatError("unknown category key \"" + std::string(key) + "\"");
}

std::string_view category_cli_name(Category c) {
    switch (c) {
        case Category::symmetric_encrypt: return "symmetric-encrypt";
        case Category::symmetric_decrypt: return "symmetric-decrypt";
        case Category::hash: return "hash";
        case Category::asymmetric_encrypt: return "asymmetric-encrypt";
        case Category::asymmetric_decrypt: return "asymmetric-decrypt";
    }
    throw InvalidArgument("unrepresentable category");
}

Category category_from_cli_name(std::string_view name) {
    for (Category c : kAllCategories)
        if (category_cli_name(c) == name) return c;
    throw InvalidArgument("unknown category \"" + std::string(name) +
                          "\" (expected symmetric-encrypt, symmetric-decrypt, hash, "
                          "asymmetric-encrypt or asymmetric-decrypt)");
}

std::string_view category_keyword(Category c) {
    switch (c) {
        case Category::symmetric_encrypt: return "senc";
        case Category::symmetric_decrypt: return "sdec";
        case Category::hash: return "hash";
        case Category::asymmetric_encrypt: return "aenc";
        case Category::asymmetric_decrypt: return "adec";
    }
    throw InvalidArgument("unrepresentable category");
}

std::string_view default_algorithm(Category c) {
    switch (c) {
        case Category::symmetric_encrypt:
        case Category::symmetric_decrypt: return "aes";
        case Category::hash: return "sha1";
        case Category::asymmetric_encrypt:
        case Category::asymmetric_decrypt: return "rsa";
    }
    throw InvalidArgument("unrepresentable category");
}

} // namespace protoperf
