#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protoperf/error.hpp"

namespace protoperf {

enum class TimeUnit { ns, us, ms, paper_units };

std::string_view to_label(TimeUnit unit);
TimeUnit time_unit_from_label(std::string_view label);

/// Provenance of a fitted model: digest of the samples it was fitted on.
struct FittedOn {
    std::string dataset_digest;
    std::size_t sample_count = 0;

    bool operator==(const FittedOn&) const = default;
};

/// Cubic cost curve for one algorithm class. Coefficients are stored
/// constant-term first: f(x) = alpha4*x^3 + alpha3*x^2 + alpha2*x + alpha1.
struct PolynomialModel {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
    double alpha4 = 0.0;
    TimeUnit unit = TimeUnit::ns;
    std::optional<FittedOn> fitted_on;

    bool operator==(const PolynomialModel&) const = default;
};

struct Sample {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Sample&) const = default;
};

/// Free-form provenance carried alongside a measurement series.
struct DatasetMeta {
    std::string backend;
    std::string algorithm;
    std::string mode;
    unsigned key_bits = 0;
    unsigned repetitions = 0;

    bool operator==(const DatasetMeta&) const = default;
};

/// (input size, elapsed time) samples produced by the benchmark harness.
struct MeasurementDataset {
    std::vector<Sample> samples;
    TimeUnit unit = TimeUnit::ns;
    DatasetMeta meta;
};

/// Residual statistics of a model against a dataset. percent_of_max is
/// empty when the dataset's largest y is zero (no scale to report against).
struct FitStats {
    double rmse = 0.0;
    double max_abs_residual = 0.0;
    std::optional<double> percent_of_max;
    double residual_sum = 0.0;
};

struct FitResult {
    PolynomialModel model;
    FitStats stats;
};

/// Evaluates the cubic at x. Rejects non-finite or negative x; the result
/// is whatever the polynomial prescribes, never clamped.
double eval_model(const PolynomialModel& model, double x);

/// Least-squares cubic through the dataset via the 4x4 normal equations.
/// x is centered and scaled internally before solving; the returned
/// coefficients are in the original x domain. Requires at least 4 samples
/// with pairwise distinct x.
FitResult fit_cubic(const MeasurementDataset& data);

FitStats fit_error(const PolynomialModel& model, const MeasurementDataset& data);

/// FNV-1a digest over the sample bit patterns; identifies a dataset in
/// model provenance.
std::string dataset_digest(const MeasurementDataset& data);

void validate_dataset(const MeasurementDataset& data);

} // namespace protoperf
