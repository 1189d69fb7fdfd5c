#include "protoperf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace protoperf {

std::vector<std::size_t> default_sweep_sizes() {
    std::vector<std::size_t> sizes;
    for (std::size_t s = 16; s <= 16384; s *= 2) sizes.push_back(s);
    return sizes;
}

double aggregate(const std::vector<double>& values, Aggregator how) {
    if (values.empty()) throw InvalidArgument("aggregate: no values");
    if (how == Aggregator::mean) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum / double(values.size());
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double interquartile_range(std::vector<double> values) {
    if (values.size() < 2) return 0.0;
    std::sort(values.begin(), values.end());
    auto at_quantile = [&](double q) {
        const double pos = q * double(values.size() - 1);
        const std::size_t lo = std::size_t(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - double(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    return at_quantile(0.75) - at_quantile(0.25);
}

namespace {

void validate_config(const SweepConfig& cfg) {
    if (cfg.repetitions < 1) throw InvalidArgument("sweep config: repetitions must be >= 1");
    if (!cfg.sizes.empty()) {
        for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
            if (cfg.sizes[i] < 1) throw InvalidArgument("sweep config: sizes must be >= 1");
            if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1])
                throw InvalidArgument("sweep config: sizes must be strictly ascending");
        }
    }
}

double timed_window_ns(Clock& clock, const std::function<void()>& op, unsigned batch) {
    const std::uint64_t t0 = clock.now_ns();
    for (unsigned i = 0; i < batch; ++i) op();
    const std::uint64_t t1 = clock.now_ns();
    return double(t1 - t0);
}

// Smallest batch whose timed window clears the threshold.
unsigned pick_batch(Clock& clock, const std::function<void()>& op, const SweepConfig& cfg,
                    double resolution) {
    const double threshold = double(cfg.batch_threshold_ticks) * resolution;
    unsigned batch = 1;
    double window = timed_window_ns(clock, op, batch);
    if (window >= threshold) return batch;
    if (!cfg.batching)
        throw PrecisionError(
            "single invocation of " + std::to_string(window) + " ns is below the " +
            std::to_string(threshold) + " ns timing threshold and batching is disabled");
    constexpr unsigned kMaxBatch = 1u << 22;
    while (window < threshold && batch < kMaxBatch) {
        const double per_call = std::max(window / double(batch), 0.25 * resolution);
        const auto wanted = std::uint64_t(std::ceil(threshold / per_call));
        batch =
            unsigned(std::min<std::uint64_t>(kMaxBatch, std::max<std::uint64_t>(batch + 1, wanted)));
        window = timed_window_ns(clock, op, batch);
    }
    return batch;
}

} // namespace

void time_series_interleaved(Clock& clock, std::vector<TimedSeries>& series,
                             const SweepConfig& cfg) {
    validate_config(cfg);
    const double resolution = clock.resolution_ns();
    if (resolution > 1e6)
        throw PrecisionError("monotonic clock resolution " + std::to_string(resolution) +
                             " ns is above the 1 ms floor");

    for (TimedSeries& s : series) {
        for (unsigned i = 0; i < cfg.warmup; ++i) s.op();
        s.batch = pick_batch(clock, s.op, cfg, resolution);
        s.per_rep.clear();
        s.per_rep.reserve(cfg.repetitions);
    }
    for (unsigned rep = 0; rep < cfg.repetitions; ++rep) {
        for (TimedSeries& s : series)
            s.per_rep.push_back(timed_window_ns(clock, s.op, s.batch) / double(s.batch));
    }
}

TimingResult time_callable(Clock& clock, const std::function<void()>& op, const SweepConfig& cfg) {
    std::vector<TimedSeries> series(1);
    series[0].op = op;
    time_series_interleaved(clock, series, cfg);

    TimingResult result;
    result.batch = series[0].batch;
    result.per_rep = std::move(series[0].per_rep);
    result.elapsed_ns = aggregate(result.per_rep, cfg.aggregator);
    result.dispersion_ns = interquartile_range(result.per_rep);
    return result;
}

namespace {

// Builds the closure a timing run repeats, preparing decrypt inputs untimed.
std::function<void()> make_op(CryptoBackend& backend, const PrimitiveSpec& spec,
                              std::size_t size) {
    switch (spec.category) {
        case Category::symmetric_encrypt: {
            auto payload = std::make_shared<Bytes>(fixed_payload(spec, size));
            return [&backend, spec, payload] { backend.sym_encrypt(spec, *payload); };
        }
        case Category::symmetric_decrypt: {
            auto ct = std::make_shared<Bytes>(backend.sym_encrypt(spec, fixed_payload(spec, size)));
            return [&backend, spec, ct] { backend.sym_decrypt(spec, *ct); };
        }
        case Category::hash: {
            auto payload = std::make_shared<Bytes>(fixed_payload(spec, size));
            return [&backend, spec, payload] { backend.hash(spec, *payload); };
        }
        case Category::asymmetric_encrypt: {
            auto payload = std::make_shared<Bytes>(fixed_payload(spec, size));
            return [&backend, spec, payload] { backend.asym_encrypt(spec, *payload); };
        }
        case Category::asymmetric_decrypt: {
            auto ct = std::make_shared<Bytes>(backend.asym_encrypt(spec, fixed_payload(spec, size)));
            return [&backend, spec, ct] { backend.asym_decrypt(spec, *ct); };
        }
    }
    throw InvalidArgument("unrepresentable category");
}

} // namespace

TimingResult time_primitive(CryptoBackend& backend, const PrimitiveSpec& spec, std::size_t size,
                            const SweepConfig& cfg) {
    backend.require_supported(spec);
    if (is_asymmetric(spec.category)) {
        const std::int64_t capacity = asym_block_capacity(spec.key_bits);
        if (std::int64_t(size) > capacity)
            throw CapabilityError("payload of " + std::to_string(size) +
                                  " bytes exceeds asymmetric block capacity of " +
                                  std::to_string(capacity) + " bytes");
    }
    if (!backend.self_tested()) backend.self_test();
    return time_callable(backend.clock(), make_op(backend, spec, size), cfg);
}

namespace {

// One (spec, x) point ready to time; sweep runs are built from these.
struct SweepPoint {
    PrimitiveSpec spec;
    std::size_t payload = 0;
    double x = 0.0;
};

std::vector<SweepPoint> sweep_points(CryptoBackend& backend, const PrimitiveSpec& spec,
                                     const SweepConfig& cfg) {
    std::vector<SweepPoint> points;
    if (is_asymmetric(spec.category)) {
        // x = key bits; payload pinned at each key's block capacity.
        const auto keys = backend.capabilities().asymmetric.at(spec.algorithm);
        for (unsigned key_bits : keys) {
            const std::int64_t capacity = asym_block_capacity(key_bits);
            if (capacity < 1) continue;
            PrimitiveSpec keyed = spec;
            keyed.key_bits = key_bits;
            points.push_back({keyed, std::size_t(capacity), double(key_bits)});
        }
    } else {
        if (cfg.sizes.empty()) throw InvalidArgument("sweep config: sizes must be non-empty");
        for (std::size_t size : cfg.sizes) points.push_back({spec, size, double(size)});
    }
    return points;
}

MeasurementDataset dataset_shell(CryptoBackend& backend, const PrimitiveSpec& spec,
                                 const SweepConfig& cfg) {
    MeasurementDataset dataset;
    dataset.unit = TimeUnit::ns;
    dataset.meta.backend = backend.id();
    dataset.meta.algorithm = spec.algorithm;
    dataset.meta.mode = spec.mode ? std::string(to_label(*spec.mode)) : std::string();
    dataset.meta.key_bits = is_asymmetric(spec.category) ? 0 : spec.key_bits;
    dataset.meta.repetitions = cfg.repetitions;
    return dataset;
}

} // namespace

MeasurementDataset sweep(CryptoBackend& backend, const PrimitiveSpec& spec,
                         const SweepConfig& cfg) {
    return sweep_many(backend, {spec}, cfg).begin()->second;
}

std::map<Category, MeasurementDataset> sweep_many(CryptoBackend& backend,
                                                  const std::vector<PrimitiveSpec>& specs,
                                                  const SweepConfig& cfg) {
    if (specs.empty()) throw InvalidArgument("sweep_many: no specs");
    validate_config(cfg);
    for (const PrimitiveSpec& spec : specs) backend.require_supported(spec);
    if (!backend.self_tested()) backend.self_test();

    struct Slot {
        Category category;
        double x;
    };
    std::vector<Slot> slots;
    std::vector<TimedSeries> series;
    std::map<Category, MeasurementDataset> out;
    for (const PrimitiveSpec& spec : specs) {
        // Several specs of one category merge into one dataset, so a class
        // model can be fitted across parameter variants (duplicate x values
        // are fine for the fitter).
        if (!out.count(spec.category)) {
            out[spec.category] = dataset_shell(backend, spec, cfg);
        } else if (out[spec.category].meta.key_bits != spec.key_bits) {
            out[spec.category].meta.key_bits = 0;
        }
        for (const SweepPoint& point : sweep_points(backend, spec, cfg)) {
            slots.push_back({spec.category, point.x});
            TimedSeries s;
            s.op = make_op(backend, point.spec, point.payload);
            series.push_back(std::move(s));
        }
    }

    time_series_interleaved(backend.clock(), series, cfg);

    for (std::size_t i = 0; i < series.size(); ++i) {
        out[slots[i].category].samples.push_back(
            {slots[i].x, aggregate(series[i].per_rep, cfg.aggregator)});
    }
    return out;
}

std::string format_double(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

void write_raw_csv(const std::filesystem::path& path,
                   const std::vector<RawMeasurementRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "category,operation,algorithm,mode,key_bits,size_bytes,rep,elapsed_ns\n";
    for (const RawMeasurementRow& row : rows) {
        out << category_label(row.category) << ',' << operation_label(row.category) << ','
            << row.algorithm << ',' << (row.mode ? to_label(*row.mode) : std::string_view()) << ','
            << row.key_bits << ',' << row.size_bytes << ',' << row.rep << ','
            << format_double(row.elapsed_ns) << '\n';
    }
}

namespace {

Category category_from_labels(std::string_view category, std::string_view operation) {
    for (Category c : kAllCategories) {
        if (category_label(c) == category && operation_label(c) == operation) return c;
    }
    throw FormatError("unknown category/operation pair \"" + std::string(category) + "," +
                      std::string(operation) + "\"");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace

void write_aggregated_csv(const std::filesystem::path& path,
                          const std::map<Category, MeasurementDataset>& datasets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "category,operation,x,elapsed_ns\n";
    for (const auto& [category, dataset] : datasets) {
        for (const Sample& s : dataset.samples) {
            out << category_label(category) << ',' << operation_label(category) << ','
                << format_double(s.x) << ',' << format_double(s.y) << '\n';
        }
    }
}

std::map<Category, MeasurementDataset> read_aggregated_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
    if (line.ends_with("\r")) line.pop_back();
    if (line != "category,operation,x,elapsed_ns")
        throw FormatError(path.string() + ": unexpected header \"" + line + "\"");

    std::map<Category, MeasurementDataset> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.ends_with("\r")) line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 4 fields");
        const Category c = category_from_labels(fields[0], fields[1]);
        double x = 0.0, y = 0.0;
        try {
            x = std::stod(fields[2]);
            y = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": non-numeric sample");
        }
        if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0)
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": sample out of range");
        out[c].samples.push_back({x, y});
        out[c].unit = TimeUnit::ns;
    }
    return out;
}

} // namespace protoperf
