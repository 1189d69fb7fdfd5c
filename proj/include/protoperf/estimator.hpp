#pragma once

#include "protoperf/bench.hpp"
#include "protoperf/protocol.hpp"
#include "protoperf/registry.hpp"

namespace protoperf {

enum class Faster { p, q, tie };

std::string_view to_label(Faster f);

/// Outcome of one comparative estimate; measurement fields are filled only
/// when a measured run backs the pair. `agree` is defined iff measurements
/// are present. Ratios are est_p/est_q and meas_p/meas_q in first-argument
/// order; a ratio is absent when its denominator is zero.
struct ComparisonVerdict {
    std::string p_id;
    std::string q_id;
    double est_p = 0.0;
    double est_q = 0.0;
    std::optional<double> est_ratio;
    Faster predicted_faster = Faster::tie;
    std::optional<double> meas_p_ns;
    std::optional<double> meas_q_ns;
    std::optional<double> meas_ratio;
    std::optional<bool> agree;
};

/// Cost of a single op in registry units. Symmetric and hash ops evaluate
/// the class model at payload_bytes. Asymmetric ops evaluate it at key_bits
/// and multiply by the PKCS#1-style block count,
/// ceil(payload / (key_bits/8 - 11)).
double estimate_op(const CryptoOp& op, const ModelRegistry& registry);

/// Sum of estimate_op over all ops in all steps.
double estimate_protocol(const Protocol& protocol, const ModelRegistry& registry);

inline constexpr double kDefaultTieEpsilon = 1e-9;

/// Orders two protocols by estimated cost. Estimates within tie_epsilon
/// relative separation are a tie.
ComparisonVerdict compare_protocols(const Protocol& p, const Protocol& q,
                                    const ModelRegistry& registry,
                                    double tie_epsilon = kDefaultTieEpsilon);

/// Measured ordering with exact comparison, for agreement bookkeeping.
Faster measured_faster(double meas_p, double meas_q);

/// Runs every op of every step in order against the backend, one timed
/// region per repetition; network and I/O are excluded by construction.
/// Asymmetric payloads beyond one block capacity are chunked, mirroring
/// estimate_op's block count. Returns the aggregate in nanoseconds.
double measure_protocol_ns(const Protocol& protocol, CryptoBackend& backend,
                           const SweepConfig& cfg);

/// One closure that executes the whole protocol once, inputs pre-resolved.
/// Lets the validator interleave timing rounds across a corpus.
std::function<void()> protocol_runner(const Protocol& protocol, CryptoBackend& backend);

std::string verdict_csv_header();
std::string verdict_csv_row(const ComparisonVerdict& verdict);

} // namespace protoperf
