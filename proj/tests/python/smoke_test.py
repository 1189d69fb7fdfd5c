"""Smoke tests for the protoperf extension module.

Run with PYTHONPATH pointing at the built module directory:
    PYTHONPATH=build/python python3 tests/python/smoke_test.py
"""

import math
import os
import tempfile

import protoperf as pp


def test_eval_and_preset():
    preset = pp.ModelRegistry.reference_preset()
    hash_model = preset.model(pp.Category.HASH)
    assert hash_model.alpha1 == 3.852945249
    assert pp.eval_model(hash_model, 0.0) == 3.852945249
    sym = preset.model(pp.Category.SYMMETRIC_ENCRYPT)
    assert math.isclose(pp.eval_model(sym, 1024.0), 60.8866295542555, rel_tol=1e-9)
    assert preset.unit == pp.TimeUnit.PAPER_UNITS


def test_fit_cubic_exact():
    data = pp.MeasurementDataset([(x, x**3) for x in range(1, 6)])
    model, stats = pp.fit_cubic(data)
    assert math.isclose(model.alpha4, 1.0, rel_tol=1e-9)
    assert abs(model.alpha1) < 1e-6
    assert stats.rmse < 1e-9


def test_parse_serialize_roundtrip():
    text = "protocol p { A -> B: senc(size=80, key=128); hash(size=80) }"
    protocol = pp.parse_protocol(text)
    assert protocol.id == "p"
    assert protocol.op_count() == 2
    canonical = pp.serialize_protocol(protocol)
    assert "senc(size=80, alg=aes, mode=cbc, key=128)" in canonical
    assert pp.parse_protocol(canonical) == protocol

    try:
        pp.parse_protocol("protocol p { A -> A: hash(size=4) }")
    except ValueError as err:
        assert "sender equals receiver" in str(err)
    else:
        raise AssertionError("self-send should be rejected")


def test_estimation():
    preset = pp.ModelRegistry.reference_preset()
    p = pp.parse_protocol("protocol p { A -> B: senc(size=80, key=128); hash(size=80) }")
    assert math.isclose(pp.estimate_protocol(p, preset), 12.3701859646663, rel_tol=1e-9)
    verdict = pp.compare_protocols(p, p, preset)
    assert verdict.predicted_faster == pp.Faster.TIE


def test_generator_determinism():
    a = pp.generate_corpus(7, 50)
    b = pp.generate_corpus(7, 50)
    assert pp.serialize_corpus(a) == pp.serialize_corpus(b)
    assert len(pp.all_ordered_pairs(1000)) == 999000


def test_registry_file_roundtrip():
    data_dir = os.environ.get("PROTOPERF_DATA_DIR")
    if data_dir:
        bundled = pp.registry_load(os.path.join(data_dir, "reference-registry.json"))
        assert bundled.model(pp.Category.SYMMETRIC_ENCRYPT).alpha2 == 0.05692690466
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "registry.json")
        pp.registry_save(pp.ModelRegistry.reference_preset(), path)
        loaded = pp.registry_load(path)
        assert loaded.model(pp.Category.HASH).alpha1 == 3.852945249


def test_synthetic_pipeline():
    backend = pp.make_backend("synthetic")
    cfg = pp.SweepConfig()
    cfg.repetitions = 3
    cfg.warmup = 0

    datasets = {}
    for cat, spec in [
        (pp.Category.SYMMETRIC_ENCRYPT,
         pp.PrimitiveSpec(pp.Category.SYMMETRIC_ENCRYPT, "aes", pp.BlockMode.CBC, 128)),
        (pp.Category.SYMMETRIC_DECRYPT,
         pp.PrimitiveSpec(pp.Category.SYMMETRIC_DECRYPT, "aes", pp.BlockMode.CBC, 128)),
        (pp.Category.HASH, pp.PrimitiveSpec(pp.Category.HASH, "sha1")),
        (pp.Category.ASYMMETRIC_ENCRYPT,
         pp.PrimitiveSpec(pp.Category.ASYMMETRIC_ENCRYPT, "rsa", None, 1024)),
        (pp.Category.ASYMMETRIC_DECRYPT,
         pp.PrimitiveSpec(pp.Category.ASYMMETRIC_DECRYPT, "rsa", None, 1024)),
    ]:
        datasets[cat] = pp.sweep(backend, spec, cfg)

    hash_samples = datasets[pp.Category.HASH].samples
    assert len(hash_samples) == 11
    assert hash_samples[0][0] == 16.0

    # A registry fitted from the synthetic backend validates its own corpus.
    models = {cat: pp.fit_cubic(ds)[0] for cat, ds in datasets.items()}
    with tempfile.TemporaryDirectory() as tmp:
        # round-trip through the JSON format to build the registry
        import json

        key_of = {
            pp.Category.SYMMETRIC_ENCRYPT: "symmetric.encrypt",
            pp.Category.SYMMETRIC_DECRYPT: "symmetric.decrypt",
            pp.Category.HASH: "hash.digest",
            pp.Category.ASYMMETRIC_ENCRYPT: "asymmetric.encrypt",
            pp.Category.ASYMMETRIC_DECRYPT: "asymmetric.decrypt",
        }
        blob = {
            key_of[cat]: {
                "coefficients": [m.alpha1, m.alpha2, m.alpha3, m.alpha4],
                "unit": "ns",
            }
            for cat, m in models.items()
        }
        path = os.path.join(tmp, "registry.json")
        with open(path, "w") as fh:
            json.dump(blob, fh)
        registry = pp.registry_load(path)

    corpus = pp.generate_corpus(17, 8)
    report = pp.run_validation(corpus, registry, backend, cfg, 1.0)
    assert report.summary.agreement_rate == 1.0
    assert report.summary.pairs_total == 8 * 7
    assert report.summary.mean_abs_ratio_deviation_pct < 1.0

    rows = pp.size_sweep_error([16, 80], 3, 6, pp.GenConfig(), registry, backend, cfg, 0.0)
    assert [size for size, _ in rows] == [16, 80]


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
