#pragma once

#include <array>
#include <filesystem>
#include <map>

#include "protoperf/category.hpp"
#include "protoperf/model.hpp"

namespace protoperf {

/// The estimator's lookup table: one fitted model per algorithm class.
/// Complete by construction; all entries share one time unit.
class ModelRegistry {
public:
    ModelRegistry(std::array<PolynomialModel, 5> models);

    const PolynomialModel& model(Category c) const {
        return models_[static_cast<std::size_t>(c)];
    }

    TimeUnit unit() const { return models_.front().unit; }

    /// Bundled reference coefficients, unit "paper-units". Suitable for
    /// unit-agnostic arithmetic only, never for wall-clock comparison.
    static ModelRegistry reference_preset();

    bool operator==(const ModelRegistry&) const = default;

private:
    std::array<PolynomialModel, 5> models_;
};

/// Incremental registry contents used while categories are still being
/// fitted; becomes a ModelRegistry once all five classes are present.
using PartialRegistry = std::map<Category, PolynomialModel>;

ModelRegistry registry_from_partial(const PartialRegistry& partial);

/// Strict load: all five category keys must be present and units identical.
ModelRegistry registry_load(const std::filesystem::path& path);
void registry_save(const ModelRegistry& registry, const std::filesystem::path& path);

/// Lenient load of whatever category keys exist (merge workflow).
PartialRegistry registry_load_partial(const std::filesystem::path& path);
void registry_save_partial(const PartialRegistry& partial, const std::filesystem::path& path);

std::string registry_to_json(const PartialRegistry& partial);
PartialRegistry registry_from_json(const std::string& text);

} // namespace protoperf
