#pragma once

#include <filesystem>
#include <functional>

#include "protoperf/backend.hpp"
#include "protoperf/model.hpp"

namespace protoperf {

enum class Aggregator { median, mean };

std::vector<std::size_t> default_sweep_sizes(); // powers of two, 16..16384

/// How a timing run sweeps and aggregates. `batch_threshold_ticks` sets the
/// minimum timed window as a multiple of the clock resolution; windows
/// shorter than that are batched (k invocations per window) unless batching
/// is disabled, in which case the run is refused.
struct SweepConfig {
    std::vector<std::size_t> sizes = default_sweep_sizes();
    unsigned repetitions = 32;
    unsigned warmup = 4;
    Aggregator aggregator = Aggregator::median;
    bool batching = true;
    unsigned batch_threshold_ticks = 64;
};

struct TimingResult {
    double elapsed_ns = 0.0;    // aggregate per-invocation time
    double dispersion_ns = 0.0; // inter-quartile range of the repetitions
    unsigned batch = 1;         // invocations per timed window
    std::vector<double> per_rep;
};

double aggregate(const std::vector<double>& values, Aggregator how);
double interquartile_range(std::vector<double> values);

/// One independent measurement target inside an interleaved timing run.
struct TimedSeries {
    std::function<void()> op;
    unsigned batch = 1;            // filled in by the driver
    std::vector<double> per_rep;   // per-invocation times, one per round
};

/// Warmup and batch selection per series, then repetition rounds taken
/// round-robin across all series, so slow clock-frequency drift lands on
/// every series alike instead of biasing whichever ran last. At most one
/// timed region runs in the process at any instant.
void time_series_interleaved(Clock& clock, std::vector<TimedSeries>& series,
                             const SweepConfig& cfg);

/// Times an arbitrary callable under the sweep rules: warmup, batching when
/// one call is shorter than the threshold, one sample per repetition.
TimingResult time_callable(Clock& clock, const std::function<void()>& op, const SweepConfig& cfg);

/// Times one primitive at one input size on a fixed seeded payload.
/// Decrypt categories are timed on ciphertext prepared untimed beforehand.
TimingResult time_primitive(CryptoBackend& backend, const PrimitiveSpec& spec, std::size_t size,
                            const SweepConfig& cfg);

/// One dataset per spec: x = payload bytes for symmetric/hash sweeps; for
/// asymmetric specs x = key_bits over the backend's supported key sizes,
/// with the payload pinned at each key's block capacity. Sample rounds are
/// interleaved across the sweep points.
MeasurementDataset sweep(CryptoBackend& backend, const PrimitiveSpec& spec, const SweepConfig& cfg);

/// Several specs swept in one interleaved run, so their datasets share the
/// same drift exposure and stay mutually comparable.
std::map<Category, MeasurementDataset> sweep_many(CryptoBackend& backend,
                                                  const std::vector<PrimitiveSpec>& specs,
                                                  const SweepConfig& cfg);

/// Raw measurement CSV: one row per repetition.
/// header: category,operation,algorithm,mode,key_bits,size_bytes,rep,elapsed_ns
struct RawMeasurementRow {
    Category category;
    std::string algorithm;
    std::optional<BlockMode> mode;
    unsigned key_bits = 0;
    std::size_t size_bytes = 0;
    unsigned rep = 0;
    double elapsed_ns = 0.0;
};
void write_raw_csv(const std::filesystem::path& path, const std::vector<RawMeasurementRow>& rows);

/// Aggregated-dataset CSV: header category,operation,x,elapsed_ns
void write_aggregated_csv(const std::filesystem::path& path,
                          const std::map<Category, MeasurementDataset>& datasets);
std::map<Category, MeasurementDataset> read_aggregated_csv(const std::filesystem::path& path);

std::string format_double(double value);

} // namespace protoperf
