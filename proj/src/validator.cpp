#include "protoperf/validator.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

namespace protoperf {

namespace {

std::string environment_tag(const CryptoBackend& backend) {
    std::ostringstream out;
    out << "backend=" << backend.id();
#if defined(__linux__)
    out << ";os=linux";
#elif defined(__APPLE__)
    out << ";os=macos";
#elif defined(_WIN32)
    out << ";os=windows";
#else
    out << ";os=unknown";
#endif
#if defined(__x86_64__) || defined(_M_X64)
    out << ";arch=x86_64";
#elif defined(__aarch64__)
    out << ";arch=aarch64";
#else
    out << ";arch=unknown";
#endif
    return out.str();
}

} // namespace

std::vector<double> measure_corpus_ns(const std::vector<Protocol>& corpus,
                                      CryptoBackend& backend, const SweepConfig& cfg) {
    // One measurement per protocol; every pair reuses the cached value, so
    // opposite orientations are exact reciprocals of the same two numbers.
    // Timing rounds are interleaved across the corpus: clock-frequency
    // drift then shifts every protocol alike instead of skewing ratios.
    std::vector<TimedSeries> series(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        series[i].op = protocol_runner(corpus[i], backend);
    time_series_interleaved(backend.clock(), series, cfg);
    std::vector<double> measured(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        measured[i] = aggregate(series[i].per_rep, cfg.aggregator);
    return measured;
}

ValidationReport run_validation(const std::vector<Protocol>& corpus,
                                const ModelRegistry& registry, CryptoBackend& backend,
                                const SweepConfig& cfg, double min_sep_pct) {
    if (min_sep_pct < 0.0) throw InvalidArgument("run_validation: min_sep_pct must be >= 0");
    if (corpus.size() < 2) throw InvalidArgument("run_validation: corpus must have >= 2 protocols");
    return score_validation(corpus, measure_corpus_ns(corpus, backend, cfg), registry,
                            min_sep_pct, environment_tag(backend));
}

ValidationReport score_validation(const std::vector<Protocol>& corpus,
                                  const std::vector<double>& measured,
                                  const ModelRegistry& registry, double min_sep_pct,
                                  const std::string& environment) {
    if (min_sep_pct < 0.0) throw InvalidArgument("score_validation: min_sep_pct must be >= 0");
    if (corpus.size() < 2)
        throw InvalidArgument("score_validation: corpus must have >= 2 protocols");
    if (measured.size() != corpus.size())
        throw InvalidArgument("score_validation: one measurement per protocol required");

    ValidationReport report;
    report.summary.min_sep_pct = min_sep_pct;
    report.summary.environment = environment;

    std::size_t agree_count = 0;
    std::size_t agree_denominator = 0;
    double deviation_sum = 0.0;
    std::size_t deviation_count = 0;

    for (const auto& [p, q] : all_ordered_pairs(corpus)) {
        PairRecord record;
        record.verdict = compare_protocols(corpus[p], corpus[q], registry);
        record.verdict.meas_p_ns = measured[p];
        record.verdict.meas_q_ns = measured[q];
        if (measured[q] != 0.0) record.verdict.meas_ratio = measured[p] / measured[q];
        record.verdict.agree =
            record.verdict.predicted_faster == measured_faster(measured[p], measured[q]);

        const double larger = std::max(measured[p], measured[q]);
        record.measured_separation_pct =
            larger > 0.0 ? 100.0 * std::abs(measured[p] - measured[q]) / larger : 0.0;
        record.retained = record.measured_separation_pct >= min_sep_pct;

        if (record.retained) {
            ++report.summary.pairs_retained;
            if (record.verdict.predicted_faster != Faster::tie) {
                ++agree_denominator;
                if (*record.verdict.agree) ++agree_count;
            }
            if (record.verdict.est_ratio && record.verdict.meas_ratio &&
                *record.verdict.meas_ratio > 0.0) {
                deviation_sum += 100.0 *
                                 std::abs(*record.verdict.est_ratio - *record.verdict.meas_ratio) /
                                 *record.verdict.meas_ratio;
                ++deviation_count;
            }
        }
        report.pair_records.push_back(std::move(record));
    }

    report.summary.pairs_total = report.pair_records.size();
    if (report.summary.pairs_retained == 0)
        throw Error("validation: no pairs left after the " + std::to_string(min_sep_pct) +
                    "% separation filter");
    report.summary.agreement_rate =
        agree_denominator > 0 ? double(agree_count) / double(agree_denominator) : 1.0;
    report.summary.mean_abs_ratio_deviation_pct =
        deviation_count > 0 ? deviation_sum / double(deviation_count) : 0.0;
    return report;
}

double agreement_rate_at(const std::vector<PairRecord>& records, double min_sep_pct) {
    std::size_t agree_count = 0;
    std::size_t denominator = 0;
    for (const PairRecord& record : records) {
        if (record.measured_separation_pct < min_sep_pct) continue;
        if (record.verdict.predicted_faster == Faster::tie) continue;
        ++denominator;
        if (record.verdict.agree && *record.verdict.agree) ++agree_count;
    }
    return denominator > 0 ? double(agree_count) / double(denominator) : 1.0;
}

std::vector<std::pair<std::uint64_t, double>> size_sweep_error(
    const std::vector<std::uint64_t>& payload_sizes, std::uint64_t seed, std::size_t n,
    const GenConfig& template_cfg, const ModelRegistry& registry, CryptoBackend& backend,
    const SweepConfig& cfg, double min_sep_pct) {
    if (payload_sizes.empty()) throw InvalidArgument("size_sweep_error: sizes must be non-empty");

    // One corpus per size, but a single interleaved measurement run over
    // the union, so the per-size deviations are compared under the same
    // drift conditions instead of one per-size phase each.
    std::vector<std::vector<Protocol>> corpora;
    std::vector<Protocol> combined;
    for (std::uint64_t size : payload_sizes) {
        GenConfig point_cfg = template_cfg;
        point_cfg.payload_choices = {size};
        corpora.push_back(generate_corpus(seed, n, point_cfg));
        for (const Protocol& p : corpora.back()) combined.push_back(p);
    }
    const std::vector<double> measured = measure_corpus_ns(combined, backend, cfg);

    std::vector<std::pair<std::uint64_t, double>> rows;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < payload_sizes.size(); ++i) {
        const std::vector<double> slice(measured.begin() + offset,
                                        measured.begin() + offset + corpora[i].size());
        offset += corpora[i].size();
        const ValidationReport report = score_validation(corpora[i], slice, registry, min_sep_pct,
                                                         "backend=" + backend.id());
        rows.emplace_back(payload_sizes[i], report.summary.mean_abs_ratio_deviation_pct);
    }
    return rows;
}

void write_report_csv(const std::filesystem::path& path, const ValidationReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << verdict_csv_header() << ",separation_pct,retained\n";
    for (const PairRecord& record : report.pair_records) {
        out << verdict_csv_row(record.verdict) << ',' << format_double(record.measured_separation_pct)
            << ',' << (record.retained ? "true" : "false") << '\n';
    }
}

void write_summary_json(const std::filesystem::path& path, const ValidationSummary& summary) {
    nlohmann::json j;
    j["agreement_rate"] = summary.agreement_rate;
    j["mean_abs_ratio_deviation_pct"] = summary.mean_abs_ratio_deviation_pct;
    j["pairs_total"] = summary.pairs_total;
    j["pairs_retained"] = summary.pairs_retained;
    j["min_sep_pct"] = summary.min_sep_pct;
    j["environment"] = summary.environment;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::uint64_t, double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "payload_bytes,mean_abs_ratio_deviation_pct\n";
    for (const auto& [size, deviation] : rows)
        out << size << ',' << format_double(deviation) << '\n';
}

} // namespace protoperf
