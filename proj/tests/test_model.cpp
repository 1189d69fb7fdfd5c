#include <doctest.h>

#include <cmath>

#include "protoperf/generator.hpp"
#include "protoperf/model.hpp"
#include "protoperf/registry.hpp"

using namespace protoperf;

namespace {

// Expected values below were derived with exact-fraction arithmetic on the
// bundled reference coefficients before this module was written.
constexpr double kSymEncAt1024 = 60.8866295542555;
constexpr double kAsymDecAt2048 = 23140.0003477677;

MeasurementDataset dataset_of(std::vector<Sample> samples, TimeUnit unit = TimeUnit::ns) {
    MeasurementDataset d;
    d.samples = std::move(samples);
    d.unit = unit;
    return d;
}

double eval_naive_powers(const PolynomialModel& m, double x) {
    return m.alpha4 * std::pow(x, 3) + m.alpha3 * std::pow(x, 2) + m.alpha2 * x + m.alpha1;
}

double sum_squared_residuals(const PolynomialModel& m, const MeasurementDataset& d) {
    double ssr = 0.0;
    for (const Sample& s : d.samples) {
        const double r = s.y - eval_model(m, s.x);
        ssr += r * r;
    }
    return ssr;
}

} // namespace

TEST_CASE("eval_model matches the reference coefficients") {
    const ModelRegistry preset = ModelRegistry::reference_preset();

    // f(0) = alpha1, exactly.
    CHECK(eval_model(preset.model(Category::hash), 0.0) == 3.852945249);
    for (Category c : kAllCategories)
        CHECK(eval_model(preset.model(c), 0.0) == preset.model(c).alpha1);

    PolynomialModel identity;
    identity.alpha2 = 1.0;
    CHECK(eval_model(identity, 7.0) == 7.0);

    CHECK(eval_model(preset.model(Category::symmetric_encrypt), 1024.0) ==
          doctest::Approx(kSymEncAt1024).epsilon(1e-9));
    CHECK(eval_model(preset.model(Category::asymmetric_decrypt), 2048.0) ==
          doctest::Approx(kAsymDecAt2048).epsilon(1e-9));
}

TEST_CASE("eval_model rejects out-of-domain x") {
    PolynomialModel m;
    CHECK_THROWS_AS(eval_model(m, std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(eval_model(m, std::numeric_limits<double>::infinity()), InvalidArgument);
    CHECK_THROWS_AS(eval_model(m, -1.0), InvalidArgument);
}

TEST_CASE("eval_model agrees with naive power evaluation") {
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        PolynomialModel m;
        m.alpha1 = rng.next_double() * 100.0;
        m.alpha2 = rng.next_double();
        m.alpha3 = (rng.next_double() - 0.5) * 1e-4;
        m.alpha4 = (rng.next_double() - 0.5) * 1e-8;
        const double x = rng.next_double() * 16384.0;
        const double horner = eval_model(m, x);
        const double naive = eval_naive_powers(m, x);
        CHECK(std::abs(horner - naive) <= 1e-12 * std::max(1.0, std::abs(naive)));
    }
}

TEST_CASE("fit_cubic reproduces data generated by a cubic") {
    const auto data = dataset_of({{1, 1}, {2, 8}, {3, 27}, {4, 64}, {5, 125}});
    const FitResult fit = fit_cubic(data);
    CHECK(fit.model.alpha4 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(fit.model.alpha3) < 1e-6);
    CHECK(std::abs(fit.model.alpha2) < 1e-6);
    CHECK(std::abs(fit.model.alpha1) < 1e-6);
    CHECK(fit.stats.rmse < 1e-9);
    CHECK(fit.stats.percent_of_max.value() < 1e-9);
    CHECK(fit.model.unit == data.unit);
    CHECK(fit.model.fitted_on->sample_count == 5);
}

TEST_CASE("fit_cubic on constant data") {
    const auto data = dataset_of({{1, 5}, {2, 5}, {3, 5}, {4, 5}, {5, 5}});
    const FitResult fit = fit_cubic(data);
    CHECK(fit.model.alpha1 == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(std::abs(fit.model.alpha2) < 1e-6);
    CHECK(std::abs(fit.model.alpha3) < 1e-6);
    CHECK(std::abs(fit.model.alpha4) < 1e-6);
}

TEST_CASE("fit_cubic matches the exact-fraction oracle on a non-cubic dataset") {
    // Oracle: normal equations of this dataset solved by exact-fraction
    // Gaussian elimination; coefficients are (-2/3, 622/189, -7/9, 2/27).
    const auto data = dataset_of({{1, 2}, {2, 3}, {3, 5}, {4, 4}, {5, 6}, {6, 7}});
    const FitResult fit = fit_cubic(data);
    CHECK(fit.model.alpha1 == doctest::Approx(-2.0 / 3.0).epsilon(1e-9));
    CHECK(fit.model.alpha2 == doctest::Approx(622.0 / 189.0).epsilon(1e-9));
    CHECK(fit.model.alpha3 == doctest::Approx(-7.0 / 9.0).epsilon(1e-9));
    CHECK(fit.model.alpha4 == doctest::Approx(2.0 / 27.0).epsilon(1e-9));
    CHECK(fit.stats.rmse == doctest::Approx(0.51434449987363973).epsilon(1e-9));
    CHECK(fit.stats.max_abs_residual == doctest::Approx(0.79365079365079361).epsilon(1e-9));
    CHECK(fit.stats.percent_of_max.value() == doctest::Approx(11.337868480725623).epsilon(1e-9));
    CHECK(std::abs(fit.stats.residual_sum) < 1e-9);
}

TEST_CASE("fit_cubic needs four distinct x values") {
    CHECK_THROWS_AS(fit_cubic(dataset_of({{1, 1}, {2, 2}, {3, 3}})), FitError);
    CHECK_THROWS_AS(fit_cubic(dataset_of({{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}})), FitError);
    CHECK_THROWS_WITH_AS(fit_cubic(dataset_of({{1, 1}, {1, 2}, {2, 2}, {3, 3}})),
                         doctest::Contains("degenerate"), FitError);
    // Duplicate x values are fine once four distinct ones exist.
    CHECK_NOTHROW(fit_cubic(dataset_of({{1, 1}, {1, 1.5}, {2, 2}, {3, 3}, {4, 4}})));
}

TEST_CASE("fit_cubic reports ill-conditioned designs with the offending x-range") {
    // Three x values within 1e-9 of each other plus two spread ones: the
    // count of distinct x passes, but the normal matrix is near singular.
    const auto data =
        dataset_of({{1.0, 1}, {1.0 + 1e-9, 2}, {1.0 + 2e-9, 3}, {2.0, 4}, {2.0 + 1e-9, 5}});
    CHECK_THROWS_WITH_AS(fit_cubic(data), doctest::Contains("ill-conditioned"), FitError);
    CHECK_THROWS_WITH_AS(fit_cubic(data), doctest::Contains("[1, 2]"), FitError);
}

TEST_CASE("fit_cubic rejects invalid samples") {
    CHECK_THROWS_AS(fit_cubic(dataset_of({{1, 1}, {2, -2}, {3, 3}, {4, 4}})), InvalidArgument);
    CHECK_THROWS_AS(fit_cubic(dataset_of({{1, 1}, {2, std::nan("")}, {3, 3}, {4, 4}})),
                    InvalidArgument);
}

TEST_CASE("fit_cubic recovers random cubics sampled across the sweep range") {
    SplitMix64 rng(202);
    for (int trial = 0; trial < 50; ++trial) {
        PolynomialModel truth;
        truth.alpha1 = double(std::int64_t(rng.next_below(2001)) - 1000);
        truth.alpha2 = double(std::int64_t(rng.next_below(2001)) - 1000);
        truth.alpha3 = double(std::int64_t(rng.next_below(2001)) - 1000);
        truth.alpha4 = double(std::int64_t(rng.next_below(2001)) - 1000);

        std::set<std::uint64_t> xs;
        while (xs.size() < 8) xs.insert(1 + rng.next_below(10000));
        MeasurementDataset data;
        data.unit = TimeUnit::ns;
        for (std::uint64_t x : xs)
            data.samples.push_back({double(x), eval_naive_powers(truth, double(x))});

        // Datasets carry non-negative times; least squares is translation
        // equivariant, so shift the data up and fold the shift into alpha1.
        double shift = 0.0;
        for (const Sample& s : data.samples) shift = std::min(shift, s.y);
        for (Sample& s : data.samples) s.y -= shift;
        truth.alpha1 -= shift;

        const FitResult fit = fit_cubic(data);
        auto close = [](double got, double want) {
            return std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want));
        };
        CHECK(close(fit.model.alpha1, truth.alpha1));
        CHECK(close(fit.model.alpha2, truth.alpha2));
        CHECK(close(fit.model.alpha3, truth.alpha3));
        CHECK(close(fit.model.alpha4, truth.alpha4));
    }
}

TEST_CASE("fitted models satisfy the normal-equation orthogonality conditions") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        MeasurementDataset data;
        data.unit = TimeUnit::ns;
        const std::size_t n = 6 + rng.next_below(10);
        std::set<std::uint64_t> xs;
        while (xs.size() < n) xs.insert(1 + rng.next_below(4096));
        double y_abs_sum = 0.0;
        for (std::uint64_t x : xs) {
            const double y = rng.next_double() * 1e5;
            data.samples.push_back({double(x), y});
            y_abs_sum += std::abs(y);
        }
        const FitResult fit = fit_cubic(data);

        double moments[4] = {0, 0, 0, 0};
        for (const Sample& s : data.samples) {
            const double r = s.y - eval_model(fit.model, s.x);
            double p = 1.0;
            for (int k = 0; k < 4; ++k) {
                moments[k] += r * p;
                p *= s.x;
            }
        }
        // Scale each moment condition by the matching power of x so the
        // tolerance tracks the magnitude of the accumulated terms.
        double xmax = 0.0;
        for (const Sample& s : data.samples) xmax = std::max(xmax, s.x);
        for (int k = 0; k < 4; ++k) {
            const double scale = y_abs_sum * std::pow(xmax, k);
            CHECK(std::abs(moments[k]) <= 1e-6 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("fitted coefficients are a local minimum of the squared error") {
    const auto data = dataset_of({{1, 2}, {2, 3}, {3, 5}, {4, 4}, {5, 6}, {6, 7}, {9, 11}});
    const FitResult fit = fit_cubic(data);
    const double best = sum_squared_residuals(fit.model, data);
    for (int coeff = 0; coeff < 4; ++coeff) {
        for (double sign : {-1.0, 1.0}) {
            PolynomialModel perturbed = fit.model;
            double* fields[] = {&perturbed.alpha1, &perturbed.alpha2, &perturbed.alpha3,
                                &perturbed.alpha4};
            const double delta = *fields[coeff] != 0.0 ? *fields[coeff] * 1e-3 : 1e-3;
            *fields[coeff] += sign * delta;
            CHECK(sum_squared_residuals(perturbed, data) >= best);
        }
    }
}

TEST_CASE("fit_error computes the documented statistics") {
    PolynomialModel five;
    five.alpha1 = 5.0;
    const auto data = dataset_of({{1, 6}, {2, 4}});
    const FitStats stats = fit_error(five, data);
    CHECK(stats.rmse == doctest::Approx(1.0));
    CHECK(stats.max_abs_residual == doctest::Approx(1.0));
    CHECK(stats.percent_of_max.value() == doctest::Approx(100.0 / 6.0).epsilon(1e-12));
    CHECK(stats.residual_sum == doctest::Approx(0.0));
}

TEST_CASE("fit_error edge conditions") {
    PolynomialModel m;
    CHECK_THROWS_AS(fit_error(m, MeasurementDataset{}), InvalidArgument);

    // All-zero measurements leave percent-of-max undefined.
    const FitStats stats = fit_error(m, dataset_of({{1, 0}, {2, 0}}));
    CHECK_FALSE(stats.percent_of_max.has_value());
    CHECK(stats.rmse == 0.0);

    PolynomialModel wrong_unit;
    wrong_unit.unit = TimeUnit::ms;
    CHECK_THROWS_AS(fit_error(wrong_unit, dataset_of({{1, 1}})), InvalidArgument);
}

TEST_CASE("time unit labels round-trip and reject unknowns") {
    for (TimeUnit u : {TimeUnit::ns, TimeUnit::us, TimeUnit::ms, TimeUnit::paper_units})
        CHECK(time_unit_from_label(to_label(u)) == u);
    CHECK_THROWS_AS(time_unit_from_label("hours"), FormatError);
}
