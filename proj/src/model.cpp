#include "protoperf/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

namespace protoperf {

namespace {

constexpr double kConditionLimit = 1e12;

// Gaussian elimination with partial pivoting on an n=4 system, in place.
// Returns false when a pivot collapses to zero.
bool solve4x4(std::array<std::array<double, 4>, 4>& m, std::array<double, 4>& rhs,
              std::array<double, 4>& out) {
    std::array<int, 4> perm{0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(m[perm[r]][col]) > std::abs(m[perm[pivot]][col])) pivot = r;
        }
        std::swap(perm[col], perm[pivot]);
        const double diag = m[perm[col]][col];
        if (diag == 0.0 || !std::isfinite(diag)) return false;
        for (int r = col + 1; r < 4; ++r) {
            const double f = m[perm[r]][col] / diag;
            if (f == 0.0) continue;
            for (int k = col; k < 4; ++k) m[perm[r]][k] -= f * m[perm[col]][k];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = rhs[perm[r]];
        for (int k = r + 1; k < 4; ++k) s -= m[perm[r]][k] * out[k];
        const double diag = m[perm[r]][r];
        if (diag == 0.0 || !std::isfinite(diag)) return false;
        out[r] = s / diag;
    }
    return true;
}

double norm1(const std::array<std::array<double, 4>, 4>& m) {
    double best = 0.0;
    for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int r = 0; r < 4; ++r) s += std::abs(m[r][c]);
        best = std::max(best, s);
    }
    return best;
}

// 1-norm condition estimate via the explicit inverse (columns solved one by one).
double condition1(const std::array<std::array<double, 4>, 4>& m) {
    std::array<std::array<double, 4>, 4> inv{};
    for (int c = 0; c < 4; ++c) {
        auto work = m;
        std::array<double, 4> rhs{};
        rhs[c] = 1.0;
        std::array<double, 4> col{};
        if (!solve4x4(work, rhs, col)) return std::numeric_limits<double>::infinity();
        for (int r = 0; r < 4; ++r) inv[r][c] = col[r];
    }
    return norm1(m) * norm1(inv);
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - i + 1) / double(i);
    return r;
}

// Error-free transformations for the compensated residual below.
inline void two_sum(double a, double b, double& sum, double& err) {
    sum = a + b;
    const double bv = sum - a;
    err = (a - (sum - bv)) + (b - bv);
}

inline void two_prod(double a, double b, double& prod, double& err) {
    prod = a * b;
    err = std::fma(a, b, -prod);
}

// y - f(x) with a double-double Horner, so the low-order digits survive
// even when the polynomial terms are ~1e15 and the residual is ~1.
double compensated_residual(const std::array<double, 4>& alpha, double x, double y) {
    double hi = alpha[3];
    double lo = 0.0;
    for (int k = 2; k >= 0; --k) {
        double p, pe;
        two_prod(hi, x, p, pe);
        pe += lo * x;
        double s, se;
        two_sum(p, alpha[k], s, se);
        two_sum(s, se + pe, hi, lo);
    }
    double r, re;
    two_sum(y, -hi, r, re);
    return r + (re - lo);
}

} // namespace

std::string_view to_label(TimeUnit unit) {
    switch (unit) {
        case TimeUnit::ns: return "ns";
        case TimeUnit::us: return "us";
        case TimeUnit::ms: return "ms";
        case TimeUnit::paper_units: return "paper-units";
    }
    throw InvalidArgument("unrepresentable time unit");
}

TimeUnit time_unit_from_label(std::string_view label) {
    if (label == "ns") return TimeUnit::ns;
    if (label == "us") return TimeUnit::us;
    if (label == "ms") return TimeUnit::ms;
    if (label == "paper-units") return TimeUnit::paper_units;
    throw FormatError("unknown unit label \"" + std::string(label) +
                      "\" (expected ns, us, ms or paper-units)");
}

double eval_model(const PolynomialModel& model, double x) {
    if (!std::isfinite(x)) throw InvalidArgument("eval_model: x must be finite");
    if (x < 0.0) throw InvalidArgument("eval_model: x must be non-negative");
    // Horner form.
    return ((model.alpha4 * x + model.alpha3) * x + model.alpha2) * x + model.alpha1;
}

void validate_dataset(const MeasurementDataset& data) {
    for (const Sample& s : data.samples) {
        if (!std::isfinite(s.x) || !std::isfinite(s.y))
            throw InvalidArgument("dataset contains a non-finite sample");
        if (s.x < 0.0 || s.y < 0.0)
            throw InvalidArgument("dataset contains a negative sample");
    }
}

std::string dataset_digest(const MeasurementDataset& data) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (i * 8)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const Sample& s : data.samples) {
        mix(s.x);
        mix(s.y);
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

FitResult fit_cubic(const MeasurementDataset& data) {
    validate_dataset(data);
    std::set<double> distinct;
    for (const Sample& s : data.samples) distinct.insert(s.x);
    if (distinct.size() < 4) {
        throw FitError("degenerate design: need at least 4 distinct x values, got " +
                       std::to_string(distinct.size()));
    }

    const std::size_t n = data.samples.size();
    double mean = 0.0;
    for (const Sample& s : data.samples) mean += s.x;
    mean /= double(n);
    double scale = 0.0;
    for (const Sample& s : data.samples) scale = std::max(scale, std::abs(s.x - mean));
    if (scale == 0.0) scale = 1.0;

    // Normal equations in the centered/scaled variable z = (x - mean)/scale.
    std::array<double, 7> zp_sum{};
    std::array<double, 4> rhs{};
    for (const Sample& s : data.samples) {
        const double z = (s.x - mean) / scale;
        double p = 1.0;
        for (int k = 0; k < 7; ++k) {
            zp_sum[k] += p;
            if (k < 4) rhs[k] += s.y * p;
            p *= z;
        }
    }
    std::array<std::array<double, 4>, 4> normal{};
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) normal[j][k] = zp_sum[j + k];

    const double cond = condition1(normal);
    const double xmin = *distinct.begin();
    const double xmax = *distinct.rbegin();
    if (!(cond < kConditionLimit)) {
        std::ostringstream msg;
        msg << "ill-conditioned normal matrix (cond~" << cond << ") for x in [" << xmin << ", "
            << xmax << "]";
        throw FitError(msg.str());
    }

    // Un-transform: sum_k c_k ((x - mean)/scale)^k expanded to powers of x.
    auto to_raw_coefficients = [mean, scale](const std::array<double, 4>& c) {
        std::array<double, 4> alpha{};
        for (int k = 0; k < 4; ++k) {
            const double ck = c[k] / std::pow(scale, k);
            for (int j = 0; j <= k; ++j) {
                alpha[j] += ck * binomial(k, j) * std::pow(-mean, k - j);
            }
        }
        return alpha;
    };

    auto solve_for = [&](const std::array<double, 4>& b) {
        auto work = normal;
        auto work_rhs = b;
        std::array<double, 4> c{};
        if (!solve4x4(work, work_rhs, c)) {
            std::ostringstream msg;
            msg << "singular normal matrix for x in [" << xmin << ", " << xmax << "]";
            throw FitError(msg.str());
        }
        return c;
    };

    std::array<double, 4> alpha = to_raw_coefficients(solve_for(rhs));

    // Iterative refinement against compensated raw-basis residuals. The
    // z-basis solve is well conditioned, but mapping its coefficients back
    // to powers of x cancels catastrophically when the y values are large;
    // refitting the (small) residual restores the lost digits.
    for (int round = 0; round < 3; ++round) {
        std::array<double, 4> residual_rhs{};
        for (const Sample& s : data.samples) {
            const double r = compensated_residual(alpha, s.x, s.y);
            const double z = (s.x - mean) / scale;
            double p = 1.0;
            for (int k = 0; k < 4; ++k) {
                residual_rhs[k] += r * p;
                p *= z;
            }
        }
        const std::array<double, 4> delta = to_raw_coefficients(solve_for(residual_rhs));
        for (int k = 0; k < 4; ++k) alpha[k] += delta[k];
    }

    PolynomialModel model;
    model.alpha1 = alpha[0];
    model.alpha2 = alpha[1];
    model.alpha3 = alpha[2];
    model.alpha4 = alpha[3];
    model.unit = data.unit;
    model.fitted_on = FittedOn{dataset_digest(data), n};
    return FitResult{model, fit_error(model, data)};
}

FitStats fit_error(const PolynomialModel& model, const MeasurementDataset& data) {
    if (data.samples.empty()) throw InvalidArgument("fit_error: empty dataset");
    if (model.unit != data.unit)
        throw InvalidArgument("fit_error: model and dataset units differ");
    FitStats stats;
    double sq = 0.0;
    double ymax = 0.0;
    for (const Sample& s : data.samples) {
        const double r = s.y - eval_model(model, s.x);
        sq += r * r;
        stats.residual_sum += r;
        stats.max_abs_residual = std::max(stats.max_abs_residual, std::abs(r));
        ymax = std::max(ymax, s.y);
    }
    stats.rmse = std::sqrt(sq / double(data.samples.size()));
    if (ymax > 0.0) stats.percent_of_max = 100.0 * stats.max_abs_residual / ymax;
    return stats;
}

} // namespace protoperf
