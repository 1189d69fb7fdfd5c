#pragma once

#include "protoperf/estimator.hpp"
#include "protoperf/generator.hpp"

namespace protoperf {

/// A pair record plus the filter bookkeeping the summary is computed from.
struct PairRecord {
    ComparisonVerdict verdict;
    double measured_separation_pct = 0.0;
    bool retained = false;
};

struct ValidationSummary {
    double agreement_rate = 0.0;
    double mean_abs_ratio_deviation_pct = 0.0;
    std::size_t pairs_total = 0;
    std::size_t pairs_retained = 0;
    double min_sep_pct = 0.0;
    std::string environment;
};

struct ValidationReport {
    std::vector<PairRecord> pair_records;
    ValidationSummary summary;
};

/// Measures every protocol once (cached), evaluates every ordered pair,
/// drops pairs whose measured costs differ by less than min_sep_pct
/// (relative to the larger measurement), and aggregates:
///   - agreement_rate over retained pairs with a non-TIE prediction,
///   - mean of 100*|est_ratio - meas_ratio|/meas_ratio over retained pairs.
ValidationReport run_validation(const std::vector<Protocol>& corpus,
                                const ModelRegistry& registry, CryptoBackend& backend,
                                const SweepConfig& cfg, double min_sep_pct);

/// The measurement phase alone: one cached cost per protocol, timing
/// rounds interleaved across the corpus.
std::vector<double> measure_corpus_ns(const std::vector<Protocol>& corpus,
                                      CryptoBackend& backend, const SweepConfig& cfg);

/// The scoring phase alone, over already-measured costs.
ValidationReport score_validation(const std::vector<Protocol>& corpus,
                                  const std::vector<double>& measured_ns,
                                  const ModelRegistry& registry, double min_sep_pct,
                                  const std::string& environment);

/// Agreement rate the report would have had at a different threshold,
/// recomputed from the recorded pairs.
double agreement_rate_at(const std::vector<PairRecord>& records, double min_sep_pct);

/// Regenerates the corpus once per payload size (payload_choices pinned to
/// {size}, everything else fixed) and records the mean absolute ratio
/// deviation of each validation run.
std::vector<std::pair<std::uint64_t, double>> size_sweep_error(
    const std::vector<std::uint64_t>& payload_sizes, std::uint64_t seed, std::size_t n,
    const GenConfig& template_cfg, const ModelRegistry& registry, CryptoBackend& backend,
    const SweepConfig& cfg, double min_sep_pct);

void write_report_csv(const std::filesystem::path& path, const ValidationReport& report);
void write_summary_json(const std::filesystem::path& path, const ValidationSummary& summary);
/// Sweep CSV: header payload_bytes,mean_abs_ratio_deviation_pct
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::uint64_t, double>>& rows);

} // namespace protoperf
