#include "protoperf/generator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "protoperf/error.hpp"

namespace protoperf {

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("next_below: bound must be positive");
    // Lemire reduction; the slight modulo bias is identical everywhere,
    // which is all determinism needs.
    return std::uint64_t((__uint128_t(next()) * __uint128_t(bound)) >> 64);
}

double SplitMix64::next_double() {
    return double(next() >> 11) * 0x1.0p-53;
}

void validate_config(const GenConfig& cfg) {
    if (cfg.steps_range.first < 1 || cfg.steps_range.first > cfg.steps_range.second)
        throw InvalidArgument("gen config: steps_range must be ordered and >= 1");
    if (cfg.ops_per_step_range.first < 1 ||
        cfg.ops_per_step_range.first > cfg.ops_per_step_range.second)
        throw InvalidArgument("gen config: ops_per_step_range must be ordered and >= 1");
    if (cfg.payload_choices.empty())
        throw InvalidArgument("gen config: payload_choices must be non-empty");
    for (std::uint64_t p : cfg.payload_choices)
        if (p < 1) throw InvalidArgument("gen config: payloads must be >= 1");
    if (cfg.symmetric_keys.empty() || cfg.asymmetric_keys.empty())
        throw InvalidArgument("gen config: key choices must be non-empty");
    if (cfg.principals.size() < 2)
        throw InvalidArgument("gen config: at least two principals required");
    double weight_sum = 0.0;
    for (double w : cfg.kind_weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw InvalidArgument("gen config: kind weights must be finite and >= 0");
        weight_sum += w;
    }
    if (weight_sum <= 0.0) throw InvalidArgument("gen config: kind weights must not all be zero");
}

std::string protocol_id_for_index(std::size_t index, std::size_t n) {
    std::size_t width = 4;
    for (std::size_t v = (n > 0 ? n - 1 : 0); v >= 10000; v /= 10) ++width;
    std::ostringstream out;
    out << 'p';
    std::string digits = std::to_string(index);
    out << std::string(width > digits.size() ? width - digits.size() : 0, '0') << digits;
    return out.str();
}

namespace {

Category draw_kind(SplitMix64& rng, const std::array<double, 5>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double pick = rng.next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (pick < acc) return Category(i);
    }
    return Category::asymmetric_decrypt; // pick == total, rounding edge
}

CryptoOp draw_op(SplitMix64& rng, const GenConfig& cfg) {
    const Category kind = draw_kind(rng, cfg.kind_weights);
    if (is_symmetric(kind)) {
        const unsigned key = cfg.symmetric_keys[rng.next_below(cfg.symmetric_keys.size())];
        const std::uint64_t payload =
            cfg.payload_choices[rng.next_below(cfg.payload_choices.size())];
        return make_op(kind, payload, std::nullopt, std::nullopt, key);
    }
    if (kind == Category::hash) {
        const std::uint64_t payload =
            cfg.payload_choices[rng.next_below(cfg.payload_choices.size())];
        return make_op(kind, payload);
    }
    const unsigned key = cfg.asymmetric_keys[rng.next_below(cfg.asymmetric_keys.size())];
    const std::int64_t capacity = asym_block_capacity(key);
    if (capacity < 1)
        throw InvalidArgument("gen config: asymmetric key of " + std::to_string(key) +
                              " bits cannot hold one padded byte");
    std::vector<std::uint64_t> eligible;
    for (std::uint64_t p : cfg.payload_choices)
        if (p <= std::uint64_t(capacity)) eligible.push_back(p);
    const std::uint64_t payload =
        eligible.empty() ? std::uint64_t(capacity) : eligible[rng.next_below(eligible.size())];
    return make_op(kind, payload, std::nullopt, std::nullopt, key);
}

} // namespace

std::vector<Protocol> generate_corpus(std::uint64_t seed, std::size_t n, const GenConfig& cfg) {
    if (n < 1) throw InvalidArgument("generate_corpus: n must be >= 1");
    validate_config(cfg);

    SplitMix64 rng(seed);
    std::vector<Protocol> corpus;
    corpus.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Protocol protocol;
        protocol.id = protocol_id_for_index(i, n);
        const unsigned steps =
            cfg.steps_range.first +
            unsigned(rng.next_below(cfg.steps_range.second - cfg.steps_range.first + 1));
        for (unsigned s = 0; s < steps; ++s) {
            ProtocolStep step;
            const std::size_t sender = rng.next_below(cfg.principals.size());
            std::size_t receiver = rng.next_below(cfg.principals.size() - 1);
            if (receiver >= sender) ++receiver;
            step.sender = cfg.principals[sender];
            step.receiver = cfg.principals[receiver];
            const unsigned ops = cfg.ops_per_step_range.first +
                                 unsigned(rng.next_below(cfg.ops_per_step_range.second -
                                                         cfg.ops_per_step_range.first + 1));
            for (unsigned o = 0; o < ops; ++o) step.ops.push_back(draw_op(rng, cfg));
            protocol.steps.push_back(std::move(step));
        }
        validate_protocol(protocol);
        corpus.push_back(std::move(protocol));
    }
    return corpus;
}

std::vector<std::pair<std::size_t, std::size_t>> all_ordered_pairs(std::size_t corpus_size) {
    if (corpus_size < 2) throw InvalidArgument("all_ordered_pairs: corpus must have >= 2 protocols");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(corpus_size * (corpus_size - 1));
    for (std::size_t p = 0; p < corpus_size; ++p)
        for (std::size_t q = 0; q < corpus_size; ++q)
            if (p != q) pairs.emplace_back(p, q);
    return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> all_ordered_pairs(
    const std::vector<Protocol>& corpus) {
    if (corpus.size() < 2)
        throw InvalidArgument("all_ordered_pairs: corpus must have >= 2 protocols");
    std::vector<std::size_t> by_id(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) by_id[i] = i;
    std::sort(by_id.begin(), by_id.end(), [&corpus](std::size_t a, std::size_t b) {
        return corpus[a].id < corpus[b].id;
    });
    for (std::size_t i = 1; i < by_id.size(); ++i) {
        if (corpus[by_id[i - 1]].id == corpus[by_id[i]].id)
            throw InvalidArgument("all_ordered_pairs: duplicate protocol id \"" +
                                  corpus[by_id[i]].id + "\"");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(corpus.size() * (corpus.size() - 1));
    for (std::size_t p : by_id)
        for (std::size_t q : by_id)
            if (p != q) pairs.emplace_back(p, q);
    return pairs;
}

void write_corpus_with_sidecar(const std::filesystem::path& path,
                               const std::vector<Protocol>& corpus, std::uint64_t seed,
                               const GenConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus file " + path.string());
    out << serialize_corpus(corpus);
    out.close();

    nlohmann::json meta;
    meta["generator"] = std::string(kGeneratorAlgorithmId);
    meta["seed"] = seed;
    meta["n"] = corpus.size();
    meta["config"] = {
        {"steps_range", {cfg.steps_range.first, cfg.steps_range.second}},
        {"ops_per_step_range", {cfg.ops_per_step_range.first, cfg.ops_per_step_range.second}},
        {"payload_choices", cfg.payload_choices},
        {"symmetric_keys", cfg.symmetric_keys},
        {"asymmetric_keys", cfg.asymmetric_keys},
        {"kind_weights", cfg.kind_weights},
        {"principals", cfg.principals},
    };
    const std::filesystem::path sidecar = path.string() + ".meta.json";
    std::ofstream meta_out(sidecar, std::ios::binary);
    if (!meta_out) throw Error("cannot write sidecar file " + sidecar.string());
    meta_out << meta.dump(2) << "\n";
}

} // namespace protoperf
