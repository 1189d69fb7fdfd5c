#include "protoperf/registry.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace protoperf {

using nlohmann::json;

ModelRegistry::ModelRegistry(std::array<PolynomialModel, 5> models) : models_(models) {
    for (const PolynomialModel& m : models_) {
        if (m.unit != models_.front().unit)
            throw InvalidArgument("registry entries must share one time unit");
    }
}

ModelRegistry ModelRegistry::reference_preset() {
    auto entry = [](double a1, double a2, double a3, double a4) {
        PolynomialModel m;
        m.alpha1 = a1;
        m.alpha2 = a2;
        m.alpha3 = a3;
        m.alpha4 = a4;
        m.unit = TimeUnit::paper_units;
        return m;
    };
    return ModelRegistry({
        entry(2.6048870112, 0.05692690466, -1.158358181e-8, 6.87723137e-13),
        entry(2.203380464, 0.05710958418, -2.30355815e-7, 1.398869423e-11),
        entry(3.852945249, 0.01700037541, -2.754241881e-7, 1.522749902e-11),
        entry(434.828218, 0.47812305376, -0.00020136227, 3.594921725e-8),
        entry(3135.53968253, 6.9193250868, -0.0019686486, 1.64038427e-6),
    });
}

ModelRegistry registry_from_partial(const PartialRegistry& partial) {
    std::array<PolynomialModel, 5> models;
    for (Category c : kAllCategories) {
        auto it = partial.find(c);
        if (it == partial.end())
            throw FormatError("registry is missing category key \"" +
                              std::string(registry_key(c)) + "\"");
        models[static_cast<std::size_t>(c)] = it->second;
    }
    return ModelRegistry(models);
}

namespace {

json model_to_json(const PolynomialModel& m) {
    // Coefficient order is alpha1-first: [alpha1, alpha2, alpha3, alpha4].
    json j;
    j["coefficients"] = {m.alpha1, m.alpha2, m.alpha3, m.alpha4};
    j["unit"] = std::string(to_label(m.unit));
    if (m.fitted_on) {
        j["fitted_on"] = {{"dataset_digest", m.fitted_on->dataset_digest},
                          {"sample_count", m.fitted_on->sample_count}};
    }
    return j;
}

PolynomialModel model_from_json(const json& j, std::string_view key) {
    const std::string where = "registry entry \"" + std::string(key) + "\"";
    if (!j.is_object()) throw FormatError(where + " is not an object");
    if (!j.contains("coefficients") || !j["coefficients"].is_array() ||
        j["coefficients"].size() != 4) {
        throw FormatError(where + ": coefficients must be an array of 4 numbers");
    }
    PolynomialModel m;
    std::array<double, 4> a{};
    for (std::size_t i = 0; i < 4; ++i) {
        const json& v = j["coefficients"][i];
        if (!v.is_number()) throw FormatError(where + ": coefficients must be numbers");
        a[i] = v.get<double>();
        if (!std::isfinite(a[i])) throw FormatError(where + ": coefficients must be finite");
    }
    m.alpha1 = a[0];
    m.alpha2 = a[1];
    m.alpha3 = a[2];
    m.alpha4 = a[3];
    if (!j.contains("unit") || !j["unit"].is_string())
        throw FormatError(where + ": missing unit label");
    m.unit = time_unit_from_label(j["unit"].get<std::string>());
    if (j.contains("fitted_on") && j["fitted_on"].is_object()) {
        FittedOn f;
        f.dataset_digest = j["fitted_on"].value("dataset_digest", std::string());
        f.sample_count = j["fitted_on"].value("sample_count", std::size_t{0});
        m.fitted_on = f;
    }
    return m;
}

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open registry file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw FormatError("registry file " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw FormatError("registry file " + path.string() + ": not a JSON object");
    return j;
}

} // namespace

std::string registry_to_json(const PartialRegistry& partial) {
    json j = json::object();
    for (const auto& [cat, model] : partial) j[std::string(registry_key(cat))] = model_to_json(model);
    return j.dump(2) + "\n";
}

PartialRegistry registry_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("registry JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("registry JSON: not an object");
    PartialRegistry out;
    for (const auto& [key, value] : j.items()) {
        const Category c = category_from_registry_key(key);
        out[c] = model_from_json(value, key);
    }
    return out;
}

PartialRegistry registry_load_partial(const std::filesystem::path& path) {
    const json j = parse_file(path);
    PartialRegistry out;
    for (const auto& [key, value] : j.items()) {
        const Category c = category_from_registry_key(key);
        out[c] = model_from_json(value, key);
    }
    return out;
}

ModelRegistry registry_load(const std::filesystem::path& path) {
    return registry_from_partial(registry_load_partial(path));
}

void registry_save_partial(const PartialRegistry& partial, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write registry file " + path.string());
    out << registry_to_json(partial);
}

void registry_save(const ModelRegistry& registry, const std::filesystem::path& path) {
    PartialRegistry partial;
    for (Category c : kAllCategories) partial[c] = registry.model(c);
    registry_save_partial(partial, path);
}

} // namespace protoperf
