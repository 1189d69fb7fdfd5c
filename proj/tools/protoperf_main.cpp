// protoperf: class-level crypto cost models, protocol cost estimation and
// estimated-vs-measured validation over generated protocol corpora.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "protoperf/bench.hpp"
#include "protoperf/estimator.hpp"
#include "protoperf/generator.hpp"
#include "protoperf/validator.hpp"

namespace {

using namespace protoperf;

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t seed_or_default(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PROTOPERF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument("PROTOPERF_SEED is not an integer: " + std::string(env));
        }
    }
    return kDefaultSeed;
}

PrimitiveSpec parse_spec_string(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() < 2)
        throw InvalidArgument("spec \"" + text + "\" must look like CAT:ALG[:MODE]:KEYBITS");

    PrimitiveSpec spec;
    spec.category = category_from_cli_name(parts[0]);
    spec.algorithm = parts[1];
    auto key_bits = [&text](const std::string& field) {
        try {
            return unsigned(std::stoul(field));
        } catch (const std::exception&) {
            throw InvalidArgument("spec \"" + text + "\": key bits must be an integer");
        }
    };
    if (is_symmetric(spec.category)) {
        if (parts.size() != 4)
            throw InvalidArgument("spec \"" + text + "\": symmetric specs are CAT:ALG:MODE:KEYBITS");
        spec.mode = block_mode_from_label(parts[2]);
        spec.key_bits = key_bits(parts[3]);
    } else if (spec.category == Category::hash) {
        if (parts.size() > 3)
            throw InvalidArgument("spec \"" + text + "\": hash specs are hash:ALG[:0]");
        if (parts.size() == 3 && key_bits(parts[2]) != 0)
            throw InvalidArgument("spec \"" + text + "\": hash specs take no key bits");
    } else {
        if (parts.size() != 3)
            throw InvalidArgument("spec \"" + text + "\": asymmetric specs are CAT:ALG:KEYBITS");
        spec.key_bits = key_bits(parts[2]);
    }
    validate_spec_shape(spec);
    return spec;
}

ModelRegistry load_registry_arg(const std::string& arg) {
    if (arg == "preset") return ModelRegistry::reference_preset();
    return registry_load(arg);
}

std::vector<Protocol> load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open protocols file " + path);
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    return parse_corpus(text);
}

void print_fit_stats(const std::string& key, const FitStats& stats) {
    std::cout << key << ": rmse=" << format_double(stats.rmse)
              << " max_abs_residual=" << format_double(stats.max_abs_residual)
              << " percent_of_max="
              << (stats.percent_of_max ? format_double(*stats.percent_of_max) + "%" : "n/a")
              << " residual_sum=" << format_double(stats.residual_sum) << "\n";
}

struct BenchArgs {
    std::string backend;
    std::string spec;
    std::string out;
    std::string raw_out;
    std::vector<std::size_t> sizes;
    unsigned reps = 32;
    unsigned warmup = 4;
    std::string agg = "median";
};

// Timing-bearing commands widen the window threshold well beyond the
// library default: on shared machines the clock-frequency drift across a
// run dwarfs single-window noise, and longer batched windows amortize the
// cache-cold cost of interleaved series.
constexpr unsigned kBenchWindowTicks = 1024;
constexpr unsigned kMeasureWindowTicks = 2048;

SweepConfig sweep_config(const std::vector<std::size_t>& sizes, unsigned reps, unsigned warmup,
                         const std::string& agg, unsigned window_ticks) {
    SweepConfig cfg;
    if (!sizes.empty()) cfg.sizes = sizes;
    cfg.repetitions = reps;
    cfg.warmup = warmup;
    cfg.batch_threshold_ticks = window_ticks;
    if (agg == "mean") {
        cfg.aggregator = Aggregator::mean;
    } else if (agg == "median") {
        cfg.aggregator = Aggregator::median;
    } else {
        throw InvalidArgument("aggregator must be mean or median, got \"" + agg + "\"");
    }
    return cfg;
}

int cmd_bench(const BenchArgs& args) {
    const PrimitiveSpec spec = parse_spec_string(args.spec);
    auto backend = make_backend(args.backend);
    const SweepConfig cfg =
        sweep_config(args.sizes, args.reps, args.warmup, args.agg, kBenchWindowTicks);

    std::map<Category, MeasurementDataset> datasets;
    if (args.raw_out.empty()) {
        datasets[spec.category] = sweep(*backend, spec, cfg);
    } else {
        // Collect per-repetition rows alongside the aggregated dataset.
        std::vector<RawMeasurementRow> raw_rows;
        MeasurementDataset dataset;
        dataset.unit = TimeUnit::ns;
        dataset.meta.backend = backend->id();
        dataset.meta.algorithm = spec.algorithm;
        dataset.meta.repetitions = cfg.repetitions;
        auto record = [&](const PrimitiveSpec& point, std::size_t size, double x) {
            const TimingResult t = time_primitive(*backend, point, size, cfg);
            dataset.samples.push_back({x, t.elapsed_ns});
            for (std::size_t rep = 0; rep < t.per_rep.size(); ++rep) {
                raw_rows.push_back({point.category, point.algorithm, point.mode, point.key_bits,
                                    size, unsigned(rep), t.per_rep[rep]});
            }
        };
        if (is_asymmetric(spec.category)) {
            const Capabilities caps = backend->capabilities();
            for (unsigned bits : caps.asymmetric.at(spec.algorithm)) {
                PrimitiveSpec keyed = spec;
                keyed.key_bits = bits;
                const std::int64_t capacity = asym_block_capacity(bits);
                if (capacity < 1) continue;
                record(keyed, std::size_t(capacity), double(bits));
            }
        } else {
            for (std::size_t size : cfg.sizes) record(spec, size, double(size));
        }
        write_raw_csv(args.raw_out, raw_rows);
        datasets[spec.category] = std::move(dataset);
    }

    write_aggregated_csv(args.out, datasets);
    std::cout << "wrote " << args.out << " (" << datasets[spec.category].samples.size()
              << " samples)\n";
    return 0;
}

int cmd_fit(const std::string& in, const std::string& out, const std::string& category_op) {
    const auto datasets = read_aggregated_csv(in);
    if (datasets.empty()) throw InvalidArgument(in + " holds no samples");

    std::optional<Category> only;
    if (!category_op.empty()) {
        only = category_from_registry_key(category_op);
        if (!datasets.count(*only))
            throw InvalidArgument(in + " has no samples for category " + category_op);
    }

    PartialRegistry merged;
    if (std::filesystem::exists(out)) merged = registry_load_partial(out);
    for (const auto& [category, dataset] : datasets) {
        if (only && category != *only) continue;
        const FitResult fit = fit_cubic(dataset);
        merged[category] = fit.model;
        print_fit_stats(std::string(registry_key(category)), fit.stats);
    }
    registry_save_partial(merged, out);
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_estimate(const std::string& registry_arg, const std::string& protocols) {
    const ModelRegistry registry = load_registry_arg(registry_arg);
    for (const Protocol& p : load_corpus_file(protocols))
        std::cout << p.id << " " << format_double(estimate_protocol(p, registry)) << "\n";
    return 0;
}

int cmd_compare(const std::string& registry_arg, const std::string& protocols,
                const std::string& p_id, const std::string& q_id) {
    const ModelRegistry registry = load_registry_arg(registry_arg);
    const auto corpus = load_corpus_file(protocols);
    auto find = [&corpus](const std::string& id) -> const Protocol& {
        for (const Protocol& p : corpus)
            if (p.id == id) return p;
        throw InvalidArgument("no protocol with id \"" + id + "\" in the corpus");
    };
    const ComparisonVerdict verdict = compare_protocols(find(p_id), find(q_id), registry);
    std::cout << verdict_csv_header() << "\n" << verdict_csv_row(verdict) << "\n";
    return 0;
}

int cmd_generate(const std::optional<std::uint64_t>& seed_flag, std::size_t n,
                 const std::string& out, const std::vector<std::uint64_t>& payloads) {
    const std::uint64_t seed = seed_or_default(seed_flag);
    GenConfig cfg;
    if (!payloads.empty()) cfg.payload_choices = payloads;
    const auto corpus = generate_corpus(seed, n, cfg);
    write_corpus_with_sidecar(out, corpus, seed, cfg);
    std::cout << "wrote " << out << " (" << corpus.size() << " protocols, seed " << seed << ")\n";
    return 0;
}

int cmd_validate(const std::string& corpus_path, const std::string& registry_arg,
                 const std::string& backend_id, const std::string& report_dir, double min_sep,
                 unsigned reps, unsigned warmup) {
    const auto corpus = load_corpus_file(corpus_path);
    const ModelRegistry registry = load_registry_arg(registry_arg);
    auto backend = make_backend(backend_id);
    const SweepConfig cfg = sweep_config({}, reps, warmup, "median", kMeasureWindowTicks);

    const ValidationReport report = run_validation(corpus, registry, *backend, cfg, min_sep);

    std::filesystem::create_directories(report_dir);
    const auto dir = std::filesystem::path(report_dir);
    write_report_csv(dir / "report.csv", report);
    write_summary_json(dir / "summary.json", report.summary);
    std::cout << "pairs_retained=" << report.summary.pairs_retained << "/"
              << report.summary.pairs_total
              << " agreement_rate=" << format_double(report.summary.agreement_rate)
              << " mean_abs_ratio_deviation_pct="
              << format_double(report.summary.mean_abs_ratio_deviation_pct) << "\n";
    std::cout << "wrote " << (dir / "report.csv").string() << " and "
              << (dir / "summary.json").string() << "\n";
    return 0;
}

int cmd_sweep_error(const std::vector<std::uint64_t>& sizes, const std::string& registry_arg,
                    const std::string& backend_id, const std::optional<std::uint64_t>& seed_flag,
                    std::size_t n, double min_sep, unsigned reps, unsigned warmup,
                    const std::string& out) {
    const ModelRegistry registry = load_registry_arg(registry_arg);
    auto backend = make_backend(backend_id);
    const SweepConfig cfg = sweep_config({}, reps, warmup, "median", kMeasureWindowTicks);
    const auto rows = size_sweep_error(sizes, seed_or_default(seed_flag), n, GenConfig{},
                                       registry, *backend, cfg, min_sep);
    write_sweep_csv(out, rows);
    for (const auto& [size, deviation] : rows)
        std::cout << size << " B -> " << format_double(deviation) << "%\n";
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_replicate(const std::string& backend_id, const std::string& out_dir,
                  const std::optional<std::uint64_t>& seed_flag, std::size_t n, double min_sep,
                  unsigned reps, unsigned warmup) {
    const std::uint64_t seed = seed_or_default(seed_flag);
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    auto backend = make_backend(backend_id);
    const SweepConfig cfg = sweep_config({}, reps, warmup, "median", kBenchWindowTicks);
    const SweepConfig measure_cfg = sweep_config({}, reps, warmup, "median", kMeasureWindowTicks);

    // bench: all five algorithm classes, interleaved in one run; symmetric
    // classes contribute both default key sizes to their class model.
    const std::vector<PrimitiveSpec> specs = {
        {Category::symmetric_encrypt, "aes", BlockMode::cbc, 128},
        {Category::symmetric_encrypt, "aes", BlockMode::cbc, 256},
        {Category::symmetric_decrypt, "aes", BlockMode::cbc, 128},
        {Category::symmetric_decrypt, "aes", BlockMode::cbc, 256},
        {Category::hash, "sha1", std::nullopt, 0},
        {Category::asymmetric_encrypt, "rsa", std::nullopt, 1024},
        {Category::asymmetric_decrypt, "rsa", std::nullopt, 1024},
    };
    std::cout << "bench: sweeping all five classes...\n";
    const std::map<Category, MeasurementDataset> datasets = sweep_many(*backend, specs, cfg);
    write_aggregated_csv(dir / "measurements.csv", datasets);

    // fit
    PartialRegistry partial;
    for (const auto& [category, dataset] : datasets) {
        const FitResult fit = fit_cubic(dataset);
        partial[category] = fit.model;
        print_fit_stats(std::string(registry_key(category)), fit.stats);
    }
    registry_save_partial(partial, dir / "registry.json");
    const ModelRegistry registry = registry_from_partial(partial);

    // generate
    const GenConfig gen_cfg;
    const auto corpus = generate_corpus(seed, n, gen_cfg);
    write_corpus_with_sidecar(dir / "corpus.txt", corpus, seed, gen_cfg);

    // validate
    const ValidationReport report =
        run_validation(corpus, registry, *backend, measure_cfg, min_sep);
    write_report_csv(dir / "report.csv", report);
    write_summary_json(dir / "summary.json", report.summary);
    std::cout << "agreement_rate=" << format_double(report.summary.agreement_rate)
              << " mean_abs_ratio_deviation_pct="
              << format_double(report.summary.mean_abs_ratio_deviation_pct) << "\n";
    std::cout << "wrote " << out_dir << "/{measurements.csv,registry.json,corpus.txt,report.csv,"
              << "summary.json}\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"class-level crypto cost models and comparative protocol estimation"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "time one primitive over an input-size sweep");
    bench_cmd->add_option("--backend", bench.backend, "synthetic | busywait | openssl")
        ->required();
    bench_cmd->add_option("--spec", bench.spec, "CAT:ALG[:MODE]:KEYBITS")->required();
    bench_cmd->add_option("--out", bench.out, "aggregated CSV path")->required();
    bench_cmd->add_option("--raw-out", bench.raw_out, "per-repetition CSV path");
    bench_cmd->add_option("--sizes", bench.sizes, "payload bytes, ascending")->delimiter(',');
    bench_cmd->add_option("--reps", bench.reps, "timed repetitions per size");
    bench_cmd->add_option("--warmup", bench.warmup, "untimed invocations per size");
    bench_cmd->add_option("--agg", bench.agg, "median | mean");

    std::string fit_in, fit_out, fit_category;
    auto* fit_cmd = app.add_subcommand("fit", "fit cubic models from an aggregated CSV");
    fit_cmd->add_option("--in", fit_in, "aggregated CSV path")->required();
    fit_cmd->add_option("--out", fit_out, "registry JSON path (merged when present)")->required();
    fit_cmd->add_option("--category-op", fit_category, "fit only this key, e.g. hash.digest");

    std::string est_registry, est_protocols;
    auto* est_cmd = app.add_subcommand("estimate", "estimate corpus protocols with a registry");
    est_cmd->add_option("--registry", est_registry, "registry JSON path, or \"preset\"")
        ->required();
    est_cmd->add_option("--protocols", est_protocols, "protocol corpus file")->required();

    std::string cmp_registry, cmp_protocols, cmp_p, cmp_q;
    auto* cmp_cmd = app.add_subcommand("compare", "compare two protocols by estimated cost");
    cmp_cmd->add_option("--registry", cmp_registry, "registry JSON path, or \"preset\"")
        ->required();
    cmp_cmd->add_option("--protocols", cmp_protocols, "protocol corpus file")->required();
    cmp_cmd->add_option("--p", cmp_p, "first protocol id")->required();
    cmp_cmd->add_option("--q", cmp_q, "second protocol id")->required();

    std::optional<std::uint64_t> gen_seed;
    std::size_t gen_n = 0;
    std::string gen_out;
    std::vector<std::uint64_t> gen_payloads;
    auto* gen_cmd = app.add_subcommand("generate", "generate a deterministic protocol corpus");
    gen_cmd->add_option("--seed", gen_seed, "corpus seed (PROTOPERF_SEED or 42 when omitted)");
    gen_cmd->add_option("--n", gen_n, "number of protocols")->required();
    gen_cmd->add_option("--out", gen_out, "corpus path; sidecar written next to it")->required();
    gen_cmd->add_option("--payloads", gen_payloads, "override payload choices")->delimiter(',');

    std::string val_corpus, val_registry, val_backend, val_report;
    double val_min_sep = 5.0;
    unsigned val_reps = 32, val_warmup = 4;
    auto* val_cmd = app.add_subcommand("validate", "measure a corpus and score the estimates");
    val_cmd->add_option("--corpus", val_corpus, "protocol corpus file")->required();
    val_cmd->add_option("--registry", val_registry, "registry JSON path, or \"preset\"")
        ->required();
    val_cmd->add_option("--backend", val_backend, "synthetic | busywait | openssl")->required();
    val_cmd->add_option("--report", val_report, "output directory")->required();
    val_cmd->add_option("--min-sep", val_min_sep, "measured separation filter, percent");
    val_cmd->add_option("--reps", val_reps, "timed repetitions per protocol");
    val_cmd->add_option("--warmup", val_warmup, "untimed runs per protocol");

    std::vector<std::uint64_t> sweep_sizes;
    std::string sweep_registry, sweep_backend, sweep_out;
    std::optional<std::uint64_t> sweep_seed;
    std::size_t sweep_n = 100;
    double sweep_min_sep = 5.0;
    unsigned sweep_reps = 32, sweep_warmup = 4;
    auto* sweep_cmd =
        app.add_subcommand("sweep-error", "estimation error as a function of payload size");
    sweep_cmd->add_option("--sizes", sweep_sizes, "payload sizes to sweep")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--registry", sweep_registry, "registry JSON path, or \"preset\"")
        ->required();
    sweep_cmd->add_option("--backend", sweep_backend, "synthetic | busywait | openssl")
        ->required();
    sweep_cmd->add_option("--out", sweep_out, "sweep CSV path")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "corpus seed");
    sweep_cmd->add_option("--n", sweep_n, "protocols per corpus");
    sweep_cmd->add_option("--min-sep", sweep_min_sep, "measured separation filter, percent");
    sweep_cmd->add_option("--reps", sweep_reps, "timed repetitions per protocol");
    sweep_cmd->add_option("--warmup", sweep_warmup, "untimed runs per protocol");

    std::string rep_backend, rep_out;
    std::optional<std::uint64_t> rep_seed;
    std::size_t rep_n = 100;
    double rep_min_sep = 5.0;
    unsigned rep_reps = 16, rep_warmup = 3;
    auto* rep_cmd =
        app.add_subcommand("replicate", "bench, fit, generate and validate in one run");
    rep_cmd->add_option("--backend", rep_backend, "synthetic | busywait | openssl")->required();
    rep_cmd->add_option("--out", rep_out, "output directory")->required();
    rep_cmd->add_option("--seed", rep_seed, "corpus seed");
    rep_cmd->add_option("--n", rep_n, "number of protocols");
    rep_cmd->add_option("--min-sep", rep_min_sep, "measured separation filter, percent");
    rep_cmd->add_option("--reps", rep_reps, "timed repetitions");
    rep_cmd->add_option("--warmup", rep_warmup, "untimed runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench);
        if (app.got_subcommand(fit_cmd)) return cmd_fit(fit_in, fit_out, fit_category);
        if (app.got_subcommand(est_cmd)) return cmd_estimate(est_registry, est_protocols);
        if (app.got_subcommand(cmp_cmd))
            return cmd_compare(cmp_registry, cmp_protocols, cmp_p, cmp_q);
        if (app.got_subcommand(gen_cmd))
            return cmd_generate(gen_seed, gen_n, gen_out, gen_payloads);
        if (app.got_subcommand(val_cmd))
            return cmd_validate(val_corpus, val_registry, val_backend, val_report, val_min_sep,
                                val_reps, val_warmup);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep_error(sweep_sizes, sweep_registry, sweep_backend, sweep_seed, sweep_n,
                                   sweep_min_sep, sweep_reps, sweep_warmup, sweep_out);
        if (app.got_subcommand(rep_cmd))
            return cmd_replicate(rep_backend, rep_out, rep_seed, rep_n, rep_min_sep, rep_reps,
                                 rep_warmup);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
