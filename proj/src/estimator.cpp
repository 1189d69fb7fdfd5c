#include "protoperf/estimator.hpp"

#include <cmath>
#include <sstream>

namespace protoperf {

std::string_view to_label(Faster f) {
    switch (f) {
        case Faster::p: return "P";
        case Faster::q: return "Q";
        case Faster::tie: return "TIE";
    }
    throw InvalidArgument("unrepresentable verdict");
}

double estimate_op(const CryptoOp& op, const ModelRegistry& registry) {
    if (op.payload_bytes == 0) throw InvalidArgument("estimate_op: payload_bytes must be >= 1");
    const PolynomialModel& model = registry.model(op.kind);
    if (!is_asymmetric(op.kind)) return eval_model(model, double(op.payload_bytes));

    const unsigned key_bits = op.key_bits.value_or(0);
    const std::int64_t capacity = asym_block_capacity(key_bits);
    if (capacity < 1)
        throw InvalidArgument("estimate_op: key of " + std::to_string(key_bits) +
                              " bits cannot hold one padded byte");
    const double blocks = std::ceil(double(op.payload_bytes) / double(capacity));
    return eval_model(model, double(key_bits)) * blocks;
}

double estimate_protocol(const Protocol& protocol, const ModelRegistry& registry) {
    validate_protocol(protocol);
    double total = 0.0;
    for (const ProtocolStep& step : protocol.steps)
        for (const CryptoOp& op : step.ops) total += estimate_op(op, registry);
    return total;
}

ComparisonVerdict compare_protocols(const Protocol& p, const Protocol& q,
                                    const ModelRegistry& registry, double tie_epsilon) {
    if (tie_epsilon < 0.0) throw InvalidArgument("compare_protocols: tie_epsilon must be >= 0");
    ComparisonVerdict verdict;
    verdict.p_id = p.id;
    verdict.q_id = q.id;
    verdict.est_p = estimate_protocol(p, registry);
    verdict.est_q = estimate_protocol(q, registry);
    if (verdict.est_q != 0.0) verdict.est_ratio = verdict.est_p / verdict.est_q;

    const double magnitude = std::max(std::abs(verdict.est_p), std::abs(verdict.est_q));
    const double separation = std::abs(verdict.est_p - verdict.est_q);
    if (magnitude == 0.0 || separation <= tie_epsilon * magnitude) {
        verdict.predicted_faster = Faster::tie;
    } else {
        verdict.predicted_faster = verdict.est_p < verdict.est_q ? Faster::p : Faster::q;
    }
    return verdict;
}

Faster measured_faster(double meas_p, double meas_q) {
    if (meas_p == meas_q) return Faster::tie;
    return meas_p < meas_q ? Faster::p : Faster::q;
}

namespace {

PrimitiveSpec spec_for_op(const CryptoOp& op) {
    PrimitiveSpec spec;
    spec.category = op.kind;
    spec.algorithm = op.algorithm;
    spec.mode = op.mode;
    spec.key_bits = op.key_bits.value_or(0);
    return spec;
}

// Pre-resolved closures for one protocol run; decrypt and asymmetric inputs
// are prepared before the timed region.
std::vector<std::function<void()>> build_plan(const Protocol& protocol, CryptoBackend& backend) {
    std::vector<std::function<void()>> plan;
    for (const ProtocolStep& step : protocol.steps) {
        for (const CryptoOp& op : step.ops) {
            const PrimitiveSpec spec = spec_for_op(op);
            backend.require_supported(spec);
            switch (op.kind) {
                case Category::symmetric_encrypt: {
                    auto payload = std::make_shared<Bytes>(fixed_payload(spec, op.payload_bytes));
                    plan.emplace_back(
                        [&backend, spec, payload] { backend.sym_encrypt(spec, *payload); });
                    break;
                }
                case Category::symmetric_decrypt: {
                    auto ct = std::make_shared<Bytes>(
                        backend.sym_encrypt(spec, fixed_payload(spec, op.payload_bytes)));
                    plan.emplace_back([&backend, spec, ct] { backend.sym_decrypt(spec, *ct); });
                    break;
                }
                case Category::hash: {
                    auto payload = std::make_shared<Bytes>(fixed_payload(spec, op.payload_bytes));
                    plan.emplace_back([&backend, spec, payload] { backend.hash(spec, *payload); });
                    break;
                }
                case Category::asymmetric_encrypt:
                case Category::asymmetric_decrypt: {
                    const std::int64_t capacity = asym_block_capacity(spec.key_bits);
                    if (capacity < 1)
                        throw InvalidArgument("measure: key of " + std::to_string(spec.key_bits) +
                                              " bits cannot hold one padded byte");
                    const Bytes whole = fixed_payload(spec, op.payload_bytes);
                    for (std::size_t off = 0; off < whole.size(); off += std::size_t(capacity)) {
                        const std::size_t len =
                            std::min(std::size_t(capacity), whole.size() - off);
                        auto chunk = std::make_shared<Bytes>(whole.begin() + off,
                                                             whole.begin() + off + len);
                        if (op.kind == Category::asymmetric_encrypt) {
                            plan.emplace_back([&backend, spec, chunk] {
                                backend.asym_encrypt(spec, *chunk);
                            });
                        } else {
                            auto ct = std::make_shared<Bytes>(backend.asym_encrypt(spec, *chunk));
                            plan.emplace_back(
                                [&backend, spec, ct] { backend.asym_decrypt(spec, *ct); });
                        }
                    }
                    break;
                }
            }
        }
    }
    return plan;
}

} // namespace

std::function<void()> protocol_runner(const Protocol& protocol, CryptoBackend& backend) {
    validate_protocol(protocol);
    if (!backend.self_tested()) backend.self_test();
    auto plan = std::make_shared<std::vector<std::function<void()>>>(build_plan(protocol, backend));
    return [plan] {
        for (const auto& op : *plan) op();
    };
}

double measure_protocol_ns(const Protocol& protocol, CryptoBackend& backend,
                           const SweepConfig& cfg) {
    return time_callable(backend.clock(), protocol_runner(protocol, backend), cfg).elapsed_ns;
}

std::string verdict_csv_header() {
    return "p_id,q_id,est_p,est_q,est_ratio,predicted_faster,meas_p_ns,meas_q_ns,meas_ratio,agree";
}

std::string verdict_csv_row(const ComparisonVerdict& v) {
    std::ostringstream out;
    auto opt = [](const std::optional<double>& value) {
        return value ? format_double(*value) : std::string();
    };
    out << v.p_id << ',' << v.q_id << ',' << format_double(v.est_p) << ','
        << format_double(v.est_q) << ',' << opt(v.est_ratio) << ',' << to_label(v.predicted_faster)
        << ',' << opt(v.meas_p_ns) << ',' << opt(v.meas_q_ns) << ',' << opt(v.meas_ratio) << ',';
    if (v.agree) out << (*v.agree ? "true" : "false");
    return out.str();
}

} // namespace protoperf
