#pragma once

#include <array>
#include <filesystem>

#include "protoperf/protocol.hpp"

namespace protoperf {

/// Portable deterministic generator: splitmix64 stream with Lemire bounded
/// sampling, so a (seed, n, config) triple reproduces the same corpus on
/// any platform or implementation.
inline constexpr std::string_view kGeneratorAlgorithmId = "splitmix64-lemire-v1";

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform draw in [0, bound) via Lemire's multiply-shift reduction.
    std::uint64_t next_below(std::uint64_t bound);

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_double();

private:
    std::uint64_t state_;
};

struct GenConfig {
    std::pair<unsigned, unsigned> steps_range{1, 4};
    std::pair<unsigned, unsigned> ops_per_step_range{1, 3};
    std::vector<std::uint64_t> payload_choices{10, 16, 80, 128, 300, 512, 1024};
    std::vector<unsigned> symmetric_keys{128, 256};
    std::vector<unsigned> asymmetric_keys{1024, 2048};
    std::array<double, 5> kind_weights{1, 1, 1, 1, 1}; // indexed by Category
    std::vector<std::string> principals{"A", "B", "S"};
};

void validate_config(const GenConfig& cfg);

/// n protocols with ids p0000..p{n-1} (zero-padded so ids sort in
/// generation order). All draws come from one seeded SplitMix64 stream.
/// Asymmetric payloads are drawn from the choices that fit the drawn key's
/// block capacity, falling back to the capacity itself when none fit.
std::vector<Protocol> generate_corpus(std::uint64_t seed, std::size_t n,
                                      const GenConfig& cfg = {});

/// All n(n-1) ordered pairs of distinct corpus indices, in index order.
std::vector<std::pair<std::size_t, std::size_t>> all_ordered_pairs(std::size_t corpus_size);

/// The same pairs for an actual corpus, ordered lexicographically by
/// protocol id (generated corpora are already id-ordered by construction).
/// Rejects duplicate ids.
std::vector<std::pair<std::size_t, std::size_t>> all_ordered_pairs(
    const std::vector<Protocol>& corpus);

/// Corpus file plus a sidecar JSON (<path>.meta.json) recording seed, n,
/// config and the generator algorithm id.
void write_corpus_with_sidecar(const std::filesystem::path& path,
                               const std::vector<Protocol>& corpus, std::uint64_t seed,
                               const GenConfig& cfg);

std::string protocol_id_for_index(std::size_t index, std::size_t n);

} // namespace protoperf
