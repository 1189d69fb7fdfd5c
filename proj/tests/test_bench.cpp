#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "protoperf/bench.hpp"
#include "protoperf/model.hpp"
#include "protoperf/openssl_backend.hpp"
#include "protoperf/synthetic_backend.hpp"

using namespace protoperf;

namespace {

PrimitiveSpec hash_spec() { return {Category::hash, "sha1", std::nullopt, 0}; }

PrimitiveSpec aes_cbc_128(Category op = Category::symmetric_encrypt) {
    return {op, "aes", BlockMode::cbc, 128};
}

} // namespace

TEST_CASE("clock resolution is positive, cached and below the 1 ms floor") {
    const double first = clock_resolution_ns();
    CHECK(first > 0.0);
    CHECK(clock_resolution_ns() == first);
    CHECK(first <= 1e6);
}

TEST_CASE("synthetic backend passes its self test and round-trips") {
    SyntheticBackend backend;
    CHECK_FALSE(backend.self_tested());
    backend.self_test();
    CHECK(backend.self_tested());

    const Bytes payload = fixed_payload(aes_cbc_128(), 1024);
    CHECK(backend.sym_decrypt(aes_cbc_128(), backend.sym_encrypt(aes_cbc_128(), payload)) ==
          payload);
}

TEST_CASE("fixed payloads are reproducible and size-exact") {
    const Bytes a = fixed_payload(hash_spec(), 333);
    const Bytes b = fixed_payload(hash_spec(), 333);
    CHECK(a == b);
    CHECK(a.size() == 333);
    CHECK(fixed_payload(aes_cbc_128(), 333) != a); // distinct spec, distinct stream
}

namespace {

// Backend whose self test can never pass; timing must refuse to start.
class BrokenBackend final : public SyntheticBackend {
public:
    std::vector<DigestVector> digest_vectors() const override {
        return {{"sha1", Bytes{}, "0000000000000000000000000000000000000000"}};
    }
};

} // namespace

TEST_CASE("timing refuses to start when the backend self test fails") {
    BrokenBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 1;
    CHECK_THROWS_WITH_AS(time_primitive(backend, hash_spec(), 16, cfg),
                         doctest::Contains("digest mismatch"), Error);
    CHECK_FALSE(backend.self_tested());
}

TEST_CASE("time_primitive on the synthetic backend reports the analytic cost") {
    SyntheticBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 5;
    cfg.warmup = 1;
    const TimingResult t = time_primitive(backend, hash_spec(), 16, cfg);
    const double expected = backend.costs().cost_ns(Category::hash, 16, 0);
    CHECK(t.elapsed_ns == doctest::Approx(expected));
    CHECK(t.dispersion_ns == 0.0);
}

TEST_CASE("a single-repetition run returns that sample with zero dispersion") {
    SyntheticBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 1;
    cfg.warmup = 0;
    const TimingResult t = time_primitive(backend, hash_spec(), 64, cfg);
    CHECK(t.per_rep.size() == 1);
    CHECK(t.elapsed_ns == t.per_rep[0]);
    CHECK(t.dispersion_ns == 0.0);
}

TEST_CASE("default sweep covers the eleven power-of-two sizes") {
    SyntheticBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 3;
    cfg.warmup = 0;
    const MeasurementDataset dataset = sweep(backend, hash_spec(), cfg);
    REQUIRE(dataset.samples.size() == 11);
    std::size_t expected = 16;
    for (const Sample& s : dataset.samples) {
        CHECK(s.x == double(expected));
        CHECK(s.y >= 0.0);
        CHECK(std::isfinite(s.y));
        expected *= 2;
    }
    CHECK(dataset.unit == TimeUnit::ns);
    CHECK(dataset.meta.backend == "synthetic");

    // The sweep output feeds the fitter directly.
    const FitResult fit = fit_cubic(dataset);
    CHECK(fit.model.alpha2 == doctest::Approx(backend.costs().hash_per_byte).epsilon(1e-6));
    CHECK(fit.model.alpha1 == doctest::Approx(backend.costs().hash_base).epsilon(1e-3));
}

TEST_CASE("asymmetric sweeps iterate the backend's key sizes") {
    SyntheticOptions options;
    options.asymmetric_keys = {1024, 2048};
    SyntheticBackend backend(options);
    SweepConfig cfg;
    cfg.repetitions = 3;
    cfg.warmup = 0;
    const MeasurementDataset dataset =
        sweep(backend, {Category::asymmetric_encrypt, "rsa", std::nullopt, 1024}, cfg);
    REQUIRE(dataset.samples.size() == 2);
    CHECK(dataset.samples[0].x == 1024.0);
    CHECK(dataset.samples[1].x == 2048.0);
}

TEST_CASE("capability errors list what the backend supports") {
    SyntheticBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 1;
    PrimitiveSpec unsupported{Category::symmetric_encrypt, "aes", BlockMode::cbc, 512};
    CHECK_THROWS_WITH_AS(time_primitive(backend, unsupported, 64, cfg),
                         doctest::Contains("supported"), CapabilityError);
    PrimitiveSpec unknown_alg{Category::hash, "whirlpool", std::nullopt, 0};
    CHECK_THROWS_AS(time_primitive(backend, unknown_alg, 64, cfg), CapabilityError);
}

TEST_CASE("asymmetric payloads beyond one block are refused by the primitive timer") {
    SyntheticBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 1;
    PrimitiveSpec spec{Category::asymmetric_encrypt, "rsa", std::nullopt, 1024};
    CHECK_THROWS_WITH_AS(time_primitive(backend, spec, 300, cfg),
                         doctest::Contains("block capacity"), CapabilityError);
    CHECK_NOTHROW(time_primitive(backend, spec, 117, cfg));
}

TEST_CASE("spec shape violations are rejected before any timing") {
    SyntheticBackend backend;
    SweepConfig cfg;
    PrimitiveSpec mode_on_hash{Category::hash, "sha1", BlockMode::cbc, 0};
    CHECK_THROWS_AS(time_primitive(backend, mode_on_hash, 16, cfg), InvalidArgument);
    PrimitiveSpec modeless_sym{Category::symmetric_encrypt, "aes", std::nullopt, 128};
    CHECK_THROWS_AS(time_primitive(backend, modeless_sym, 16, cfg), InvalidArgument);
}

TEST_CASE("sweep configs are validated") {
    SyntheticBackend backend;
    SweepConfig cfg;
    cfg.sizes = {16, 16};
    CHECK_THROWS_AS(sweep(backend, hash_spec(), cfg), InvalidArgument);
    cfg.sizes = {32, 16};
    CHECK_THROWS_AS(sweep(backend, hash_spec(), cfg), InvalidArgument);
    cfg.sizes = {16};
    cfg.repetitions = 0;
    CHECK_THROWS_AS(sweep(backend, hash_spec(), cfg), InvalidArgument);
}

TEST_CASE("busywait calibration: constant-cost ops measure within 10%") {
    SyntheticOptions options;
    options.costs.hash_base = 200000.0; // 200 us per call
    options.costs.hash_per_byte = 0.0;
    BusywaitBackend backend(options);
    SweepConfig cfg;
    cfg.repetitions = 9;
    cfg.warmup = 2;
    const TimingResult t = time_primitive(backend, hash_spec(), 64, cfg);
    CHECK(t.elapsed_ns > 0.9 * options.costs.hash_base);
    CHECK(t.elapsed_ns < 1.1 * options.costs.hash_base);
    CHECK(t.batch == 1);
}

TEST_CASE("batched timing stays near the unbatched reference") {
    // An op around 40 us is comfortably measurable unbatched; raising the
    // window threshold forces the batching path onto the same op.
    SyntheticOptions options;
    options.costs.hash_base = 40000.0;
    options.costs.hash_per_byte = 0.0;
    BusywaitBackend backend(options);

    SweepConfig unbatched;
    unbatched.repetitions = 7;
    unbatched.warmup = 1;
    const TimingResult reference = time_primitive(backend, hash_spec(), 64, unbatched);
    REQUIRE(reference.batch == 1);

    SweepConfig forced = unbatched;
    forced.batch_threshold_ticks = unsigned((reference.elapsed_ns * 4.0) / clock_resolution_ns());
    const TimingResult batched = time_primitive(backend, hash_spec(), 64, forced);
    CHECK(batched.batch > 1);
    CHECK(batched.elapsed_ns < 2.0 * reference.elapsed_ns);
    CHECK(batched.elapsed_ns > 0.5 * reference.elapsed_ns);
}

TEST_CASE("below-threshold runs are refused when batching is disabled") {
    SyntheticOptions options;
    options.costs.hash_base = 10.0; // below the 64-tick threshold on the 1 ns virtual clock
    options.costs.hash_per_byte = 0.0;
    SyntheticBackend backend(options);
    SweepConfig cfg;
    cfg.repetitions = 3;
    cfg.batching = false;
    CHECK_THROWS_AS(time_primitive(backend, hash_spec(), 16, cfg), PrecisionError);
    cfg.batching = true;
    const TimingResult t = time_primitive(backend, hash_spec(), 16, cfg);
    CHECK(t.batch > 1);
    CHECK(t.elapsed_ns == doctest::Approx(10.0));
}

TEST_CASE("aggregation helpers") {
    CHECK(aggregate({3, 1, 2}, Aggregator::median) == 2.0);
    CHECK(aggregate({4, 1, 2, 3}, Aggregator::median) == 2.5);
    CHECK(aggregate({1, 2, 3, 6}, Aggregator::mean) == 3.0);
    CHECK(interquartile_range({5}) == 0.0);
    CHECK(interquartile_range({1, 1, 1, 1}) == 0.0);
    CHECK_THROWS_AS(aggregate({}, Aggregator::mean), InvalidArgument);
}

TEST_CASE("measurement CSV files round-trip") {
    namespace fs = std::filesystem;
    const fs::path agg_path = fs::temp_directory_path() / "protoperf_agg.csv";
    const fs::path raw_path = fs::temp_directory_path() / "protoperf_raw.csv";

    std::map<Category, MeasurementDataset> datasets;
    datasets[Category::hash].samples = {{16, 424}, {32, 448}};
    datasets[Category::symmetric_encrypt].samples = {{16, 648}, {32, 696}};
    write_aggregated_csv(agg_path, datasets);

    std::ifstream in(agg_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "category,operation,x,elapsed_ns");
    in.close();

    const auto reread = read_aggregated_csv(agg_path);
    REQUIRE(reread.size() == 2);
    CHECK(reread.at(Category::hash).samples.size() == 2);
    CHECK(reread.at(Category::hash).samples[0].x == 16.0);
    CHECK(reread.at(Category::symmetric_encrypt).samples[1].y == 696.0);

    std::vector<RawMeasurementRow> rows;
    rows.push_back({Category::hash, "sha1", std::nullopt, 0, 16, 0, 424.0});
    rows.push_back({Category::symmetric_encrypt, "aes", BlockMode::cbc, 128, 16, 1, 648.0});
    write_raw_csv(raw_path, rows);
    std::ifstream raw(raw_path);
    std::getline(raw, header);
    CHECK(header == "category,operation,algorithm,mode,key_bits,size_bytes,rep,elapsed_ns");
    std::string line;
    std::getline(raw, line);
    CHECK(line == "hash,digest,sha1,,0,16,0,424");
    std::getline(raw, line);
    CHECK(line == "symmetric,encrypt,aes,cbc,128,16,1,648");

    fs::remove(agg_path);
    fs::remove(raw_path);
}

TEST_CASE("malformed aggregated CSV is rejected") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "protoperf_bad.csv";
    {
        std::ofstream out(path);
        out << "category,operation,x\n";
    }
    CHECK_THROWS_AS(read_aggregated_csv(path), FormatError);
    {
        std::ofstream out(path);
        out << "category,operation,x,elapsed_ns\nhash,digest,16,nanoseconds\n";
    }
    CHECK_THROWS_AS(read_aggregated_csv(path), FormatError);
    fs::remove(path);
}

TEST_CASE("openssl backend self test and known digests") {
    OpenSslBackend backend;
    backend.self_test();

    const Bytes empty_digest = backend.hash(hash_spec(), Bytes{});
    CHECK(to_hex(empty_digest) == "da39a3ee5e6b4b0d3255bfef95601890afd80709");

    const Bytes payload = fixed_payload(aes_cbc_128(), 1024);
    const Bytes ct = backend.sym_encrypt(aes_cbc_128(), payload);
    CHECK(ct != payload);
    CHECK(backend.sym_decrypt(aes_cbc_128(Category::symmetric_decrypt), ct) == payload);
}

TEST_CASE("openssl rsa round-trips and honors the block capacity") {
    OpenSslBackend backend;
    PrimitiveSpec spec{Category::asymmetric_encrypt, "rsa", std::nullopt, 512};
    const Bytes payload = fixed_payload(spec, 32);
    const Bytes ct = backend.asym_encrypt(spec, payload);
    CHECK(ct.size() == 64);
    CHECK(backend.asym_decrypt({Category::asymmetric_decrypt, "rsa", std::nullopt, 512}, ct) ==
          payload);
    CHECK_THROWS_AS(backend.asym_encrypt(spec, fixed_payload(spec, 64)), CapabilityError);
}

TEST_CASE("openssl aes encryption grows with payload size" * doctest::timeout(120)) {
    OpenSslBackend backend;
    SweepConfig cfg;
    cfg.repetitions = 9;
    cfg.warmup = 2;
    const TimingResult small = time_primitive(backend, aes_cbc_128(), 16, cfg);
    const TimingResult large = time_primitive(backend, aes_cbc_128(), 16384, cfg);
    CHECK(large.elapsed_ns > small.elapsed_ns);
}
