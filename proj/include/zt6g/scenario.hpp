#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zt6g/crypto.hpp"
#include "zt6g/domain.hpp"
#include "zt6g/error.hpp"
#include "zt6g/tpss.hpp"
#include "zt6g/trust.hpp"

namespace zt6g {

struct NormalPhase {
    Second duration_s = 100;
    double cross_prob = 0.1;
    std::uint32_t rate_pps = 5;
    /// Background traffic keeps flowing while attacks run.
    bool continue_during_attack = true;
};

struct EpidemicConfig {
    std::uint32_t i0 = 100;
    double beta = 0.2;
    double gamma = 0.2;
    /// Defaults to the first attack stage's start.
    std::optional<Second> seed_at_s;
};

struct AttackStage {
    Second start_s = 0;
    std::vector<CommunityId> attackers;
    UeId victim;
    std::uint32_t intensity_pps = 10;
};

struct EngineConfig {
    Architecture architecture = Architecture::Zta6g;
    Second validity_period_s = 1;
    /// false evaluates every request afresh, ignoring the validity period.
    bool decision_cache = true;
    TrustParams trust;
    IndexWeights index_weights;
};

struct TpssConfig {
    Second cel_window_s = 30;
    Second report_latency_s = 1;
    /// Per-second chance that probing reveals a compromised UE's open zero-day.
    double vdb_probe_rate = 0.5;
    double abd_z_max = 5.0;
    double abd_sigma_floor = 1.0;
};

struct IdentityConfig {
    Second cert_lifetime_s = 3600;
    SignerKind signer = SignerKind::Hmac;
};

struct MonteCarloConfig {
    std::uint32_t runs = 100;
    std::uint64_t base_seed = 1;
};

struct Scenario {
    std::string name = "scenario";
    Asn asn = 64512;
    Topology topology;
    NormalPhase normal;
    EpidemicConfig epidemic;
    std::vector<AttackStage> stages;
    /// Stage whose victim is instrumented; defaults to the last stage.
    std::optional<std::size_t> metrics_stage;
    EngineConfig engine;
    TpssConfig tpss;
    IdentityConfig identity;
    MonteCarloConfig monte_carlo;
    Second max_time_s = 10000;

    std::size_t instrumented_stage() const { return metrics_stage.value_or(stages.empty() ? 0 : stages.size() - 1); }
    Second seed_time() const { return epidemic.seed_at_s.value_or(stages.empty() ? normal.duration_s : stages.front().start_s); }

    /// Communities sorted by name; all per-community outputs use this order.
    std::vector<const Community*> communities_by_name() const {
        std::vector<const Community*> out;
        for (const auto& c : topology.communities()) {
            out.push_back(&c);
        }
        std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->name < b->name; });
        return out;
    }
};

// ---------------------------------------------------------------------------
// Source locations for diagnostics
// ---------------------------------------------------------------------------

namespace detail {

/// Maps JSON pointers to the 1-based line where their value starts. Assumes
/// the text already parsed successfully.
class JsonLineMap {
public:
    explicit JsonLineMap(const std::string& text) : text_(text) {
        skip_ws();
        value("");
    }

    int line_of(const std::string& pointer) const {
        // Fall back to the nearest located ancestor.
        std::string p = pointer;
        while (true) {
            auto it = lines_.find(p);
            if (it != lines_.end()) {
                return it->second;
            }
            if (p.empty()) {
                return 1;
            }
            p.erase(p.rfind('/'));
        }
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') {
                ++line_;
            }
            ++pos_;
        }
    }

    std::string string() {
        std::string out;
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') {
                ++pos_;
            }
            out.push_back(text_[pos_++]);
        }
        ++pos_;
        return out;
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') {
                out += "~0";
            } else if (c == '/') {
                out += "~1";
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    void value(const std::string& pointer) {
        lines_.emplace(pointer, line_);
        if (pos_ >= text_.size()) {
            return;
        }
        const char c = text_[pos_];
        if (c == '{') {
            ++pos_;
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] != '}') {
                const auto key = string();
                skip_ws();
                ++pos_;  // ':'
                skip_ws();
                value(pointer + "/" + escape(key));
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                }
            }
            ++pos_;
        } else if (c == '[') {
            ++pos_;
            skip_ws();
            for (int i = 0; pos_ < text_.size() && text_[pos_] != ']'; ++i) {
                value(pointer + "/" + std::to_string(i));
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                }
            }
            ++pos_;
        } else if (c == '"') {
            string();
        } else {
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']') {
                ++pos_;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;
};

class ScenarioReader {
public:
    ScenarioReader(const nlohmann::json& root, const JsonLineMap* lines, std::string origin)
        : root_(root), lines_(lines), origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
        std::string where = origin_;
        if (lines_) {
            where += ":" + std::to_string(lines_->line_of(pointer));
        }
        throw InvalidScenario(where + ": " + (pointer.empty() ? "/" : pointer) + ": " + msg);
    }

    const nlohmann::json* find(const std::string& pointer) const {
        const nlohmann::json::json_pointer ptr(pointer);
        return root_.contains(ptr) ? &root_.at(ptr) : nullptr;
    }

    template <typename T>
    T get(const std::string& pointer, T fallback) const {
        const auto* node = find(pointer);
        if (!node) {
            return fallback;
        }
        return as<T>(*node, pointer);
    }

    template <typename T>
    T require(const std::string& pointer) const {
        const auto* node = find(pointer);
        if (!node) {
            fail(pointer, "required field is missing");
        }
        return as<T>(*node, pointer);
    }

    template <typename T>
    T as(const nlohmann::json& node, const std::string& pointer) const {
        if constexpr (std::is_same_v<T, bool>) {
            if (!node.is_boolean()) {
                fail(pointer, "expected a boolean");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!node.is_number_integer()) {
                fail(pointer, "expected an integer");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (!node.is_number_unsigned() && node.get<std::int64_t>() < 0) {
                    fail(pointer, "expected a non-negative integer");
                }
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!node.is_number()) {
                fail(pointer, "expected a number");
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!node.is_string()) {
                fail(pointer, "expected a string");
            }
        }
        return node.get<T>();
    }

private:
    const nlohmann::json& root_;
    const JsonLineMap* lines_;
    std::string origin_;
};

}  // namespace detail

inline const char* signer_name(SignerKind k) { return k == SignerKind::Ed25519 ? "ed25519" : "hmac"; }

/// Builds and validates a scenario. `text` is only used for line numbers.
inline Scenario scenario_from_json(const nlohmann::json& root, const std::string& origin = "<scenario>",
                                   const std::string* text = nullptr) {
    std::optional<detail::JsonLineMap> lines;
    if (text) {
        lines.emplace(*text);
    }
    const detail::ScenarioReader rd(root, lines ? &*lines : nullptr, origin);
    if (!root.is_object()) {
        rd.fail("", "scenario must be a JSON object");
    }

    Scenario s;
    s.name = rd.get<std::string>("/name", s.name);
    s.asn = rd.get<Asn>("/topology/asn", s.asn);

    const auto* comms = rd.find("/topology/communities");
    if (!comms || !comms->is_array() || comms->empty()) {
        rd.fail("/topology/communities", "expected a non-empty array of communities");
    }
    for (std::size_t i = 0; i < comms->size(); ++i) {
        const auto base = "/topology/communities/" + std::to_string(i);
        Community c;
        c.name = rd.require<std::string>(base + "/name");
        c.id = rd.get<CommunityId>(base + "/id", static_cast<CommunityId>(i + 1));
        c.population = rd.require<std::uint32_t>(base + "/population");
        c.dishonest = rd.get<bool>(base + "/dishonest", false);
        if (c.name.empty()) {
            rd.fail(base + "/name", "community name must not be empty");
        }
        try {
            s.topology.add_community(std::move(c));
        } catch (const InvalidScenario& e) {
            rd.fail(base, e.what());
        }
    }
    auto community_named = [&](const std::string& pointer) -> CommunityId {
        const auto name = rd.require<std::string>(pointer);
        const auto* c = s.topology.find_by_name(name);
        if (!c) {
            rd.fail(pointer, "unknown community '" + name + "'");
        }
        return c->id;
    };
    if (const auto* links = rd.find("/topology/links")) {
        if (!links->is_array()) {
            rd.fail("/topology/links", "expected an array of [name, name] pairs");
        }
        for (std::size_t i = 0; i < links->size(); ++i) {
            const auto base = "/topology/links/" + std::to_string(i);
            if (!(*links)[i].is_array() || (*links)[i].size() != 2) {
                rd.fail(base, "a link is a pair of community names");
            }
            const auto a = community_named(base + "/0");
            const auto b = community_named(base + "/1");
            try {
                s.topology.add_link(a, b);
            } catch (const InvalidScenario& e) {
                rd.fail(base, e.what());
            }
        }
    }
    if (!s.topology.is_connected()) {
        rd.fail("/topology/links", "topology is not connected");
    }

    s.normal.duration_s = rd.get<Second>("/normal_phase/duration_s", s.normal.duration_s);
    s.normal.cross_prob = rd.get<double>("/normal_phase/cross_prob", s.normal.cross_prob);
    s.normal.rate_pps = rd.get<std::uint32_t>("/normal_phase/rate_pps", s.normal.rate_pps);
    s.normal.continue_during_attack =
        rd.get<bool>("/normal_phase/continue_during_attack", s.normal.continue_during_attack);
    if (s.normal.duration_s < 0) {
        rd.fail("/normal_phase/duration_s", "must be >= 0");
    }
    if (!(s.normal.cross_prob >= 0.0 && s.normal.cross_prob <= 1.0)) {
        rd.fail("/normal_phase/cross_prob", "probability must lie in [0,1]");
    }

    s.epidemic.i0 = rd.get<std::uint32_t>("/epidemic/i0", s.epidemic.i0);
    s.epidemic.beta = rd.get<double>("/epidemic/beta", s.epidemic.beta);
    s.epidemic.gamma = rd.get<double>("/epidemic/gamma", s.epidemic.gamma);
    if (rd.find("/epidemic/seed_at_s")) {
        s.epidemic.seed_at_s = rd.require<Second>("/epidemic/seed_at_s");
    }
    if (!(s.epidemic.beta >= 0.0)) {
        rd.fail("/epidemic/beta", "must be >= 0");
    }
    if (!(s.epidemic.gamma >= 0.0 && s.epidemic.gamma <= 1.0)) {
        rd.fail("/epidemic/gamma", "probability must lie in [0,1]");
    }
    for (const auto& c : s.topology.communities()) {
        if (s.epidemic.i0 > c.population) {
            rd.fail("/epidemic/i0", "exceeds population of community '" + c.name + "'");
        }
    }

    const auto* stages = rd.find("/attack_stages");
    if (!stages || !stages->is_array() || stages->empty()) {
        rd.fail("/attack_stages", "expected a non-empty array of attack stages");
    }
    for (std::size_t i = 0; i < stages->size(); ++i) {
        const auto base = "/attack_stages/" + std::to_string(i);
        AttackStage st;
        st.start_s = rd.require<Second>(base + "/start_s");
        st.intensity_pps = rd.get<std::uint32_t>(base + "/intensity_pps", st.intensity_pps);
        const auto* att = rd.find(base + "/attackers");
        if (!att || !att->is_array() || att->empty()) {
            rd.fail(base + "/attackers", "expected a non-empty array of community names");
        }
        for (std::size_t k = 0; k < att->size(); ++k) {
            st.attackers.push_back(community_named(base + "/attackers/" + std::to_string(k)));
        }
        const auto victim_text = rd.require<std::string>(base + "/victim");
        try {
            st.victim = parse_ue_id(victim_text);
        } catch (const MalformedIdentity& e) {
            rd.fail(base + "/victim", e.what());
        }
        const auto* vc = s.topology.find(st.victim.community_id);
        if (st.victim.asn != s.asn || !vc) {
            rd.fail(base + "/victim", "victim community does not exist");
        }
        if (st.victim.cert_id < 1 || st.victim.cert_id > vc->population) {
            rd.fail(base + "/victim", "victim certificate id outside 1..population");
        }
        if (!s.stages.empty() && st.start_s <= s.stages.back().start_s) {
            rd.fail(base + "/start_s", "stages must start in strictly increasing order");
        }
        if (st.start_s < 0) {
            rd.fail(base + "/start_s", "must be >= 0");
        }
        s.stages.push_back(std::move(st));
    }
    if (rd.find("/metrics_stage")) {
        const auto ms = rd.require<std::size_t>("/metrics_stage");
        if (ms >= s.stages.size()) {
            rd.fail("/metrics_stage", "no such attack stage");
        }
        s.metrics_stage = ms;
    }
    if (s.seed_time() > s.stages.front().start_s) {
        rd.fail("/epidemic/seed_at_s", "infection must be seeded no later than the first attack stage");
    }

    auto& eng = s.engine;
    const auto arch_name = rd.get<std::string>("/engine/architecture", to_string(eng.architecture));
    if (auto a = parse_architecture(arch_name)) {
        eng.architecture = *a;
    } else {
        rd.fail("/engine/architecture",
                "unknown architecture '" + arch_name + "' (valid: " + kArchitectureNames + ")");
    }
    eng.validity_period_s = rd.get<Second>("/engine/validity_period_s", eng.validity_period_s);
    eng.decision_cache = rd.get<bool>("/engine/decision_cache", eng.decision_cache);
    if (eng.validity_period_s < 1) {
        rd.fail("/engine/validity_period_s", "must be >= 1");
    }
    auto& tp = eng.trust;
    tp.threshold = rd.get<double>("/engine/trust_threshold", tp.threshold);
    tp.prior_good = rd.get<double>("/engine/priors/good", tp.prior_good);
    tp.prior_bad = rd.get<double>("/engine/priors/bad", tp.prior_bad);
    tp.high_risk_multiplier = rd.get<double>("/engine/multipliers/high_risk", tp.high_risk_multiplier);
    tp.medium_risk_multiplier = rd.get<double>("/engine/multipliers/medium_risk", tp.medium_risk_multiplier);
    tp.low_risk_multiplier = rd.get<double>("/engine/multipliers/low_risk", tp.low_risk_multiplier);
    tp.contact_multiplier = rd.get<double>("/engine/multipliers/contact", tp.contact_multiplier);
    tp.anomaly_weight = rd.get<double>("/engine/multipliers/anomaly_weight", tp.anomaly_weight);
    if (!(tp.threshold >= 0.0 && tp.threshold <= 1.0)) {
        rd.fail("/engine/trust_threshold", "must lie in [0,1]");
    }
    if (!(tp.prior_good > 0.0) || !(tp.prior_bad > 0.0)) {
        rd.fail("/engine/priors", "priors must be > 0");
    }
    for (const auto& [ptr, v] : {std::pair{"/engine/multipliers/high_risk", tp.high_risk_multiplier},
                                 {"/engine/multipliers/medium_risk", tp.medium_risk_multiplier},
                                 {"/engine/multipliers/low_risk", tp.low_risk_multiplier},
                                 {"/engine/multipliers/contact", tp.contact_multiplier},
                                 {"/engine/multipliers/anomaly_weight", tp.anomaly_weight}}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            rd.fail(ptr, "must lie in [0,1]");
        }
    }
    eng.index_weights.vuln = rd.get<double>("/engine/index_weights/vuln", eng.index_weights.vuln);
    eng.index_weights.threat = rd.get<double>("/engine/index_weights/threat", eng.index_weights.threat);
    eng.index_weights.anomaly = rd.get<double>("/engine/index_weights/anomaly", eng.index_weights.anomaly);
    if (eng.index_weights.vuln < 0 || eng.index_weights.threat < 0 || eng.index_weights.anomaly < 0) {
        rd.fail("/engine/index_weights", "weights must be >= 0");
    }

    s.tpss.cel_window_s = rd.get<Second>("/tpss/cel_window_s", s.tpss.cel_window_s);
    s.tpss.report_latency_s = rd.get<Second>("/tpss/report_latency_s", s.tpss.report_latency_s);
    s.tpss.vdb_probe_rate = rd.get<double>("/tpss/vdb_probe_rate", s.tpss.vdb_probe_rate);
    s.tpss.abd_z_max = rd.get<double>("/tpss/abd/z_max", s.tpss.abd_z_max);
    s.tpss.abd_sigma_floor = rd.get<double>("/tpss/abd/sigma_floor", s.tpss.abd_sigma_floor);
    if (s.tpss.cel_window_s < 0) {
        rd.fail("/tpss/cel_window_s", "must be >= 0");
    }
    if (s.tpss.report_latency_s < 1) {
        rd.fail("/tpss/report_latency_s", "must be >= 1");
    }
    if (!(s.tpss.vdb_probe_rate >= 0.0 && s.tpss.vdb_probe_rate <= 1.0)) {
        rd.fail("/tpss/vdb_probe_rate", "probability must lie in [0,1]");
    }
    if (!(s.tpss.abd_z_max > 0.0) || !(s.tpss.abd_sigma_floor > 0.0)) {
        rd.fail("/tpss/abd", "z_max and sigma_floor must be > 0");
    }

    s.identity.cert_lifetime_s = rd.get<Second>("/identity/cert_lifetime_s", s.identity.cert_lifetime_s);
    if (s.identity.cert_lifetime_s < 1) {
        rd.fail("/identity/cert_lifetime_s", "must be >= 1");
    }
    const auto signer = rd.get<std::string>("/identity/signer", signer_name(s.identity.signer));
    if (signer == "hmac") {
        s.identity.signer = SignerKind::Hmac;
    } else if (signer == "ed25519") {
        s.identity.signer = SignerKind::Ed25519;
    } else {
        rd.fail("/identity/signer", "unknown signer '" + signer + "' (valid: hmac, ed25519)");
    }

    s.monte_carlo.runs = rd.get<std::uint32_t>("/monte_carlo/runs", s.monte_carlo.runs);
    s.monte_carlo.base_seed = rd.get<std::uint64_t>("/monte_carlo/base_seed", s.monte_carlo.base_seed);
    if (s.monte_carlo.runs < 1) {
        rd.fail("/monte_carlo/runs", "must be >= 1");
    }
    s.max_time_s = rd.get<Second>("/max_time_s", s.max_time_s);
    if (s.max_time_s < 1 || s.max_time_s > 10000) {
        rd.fail("/max_time_s", "must lie in 1..10000");
    }
    return s;
}

/// Every parameter, defaults included. Reading it back yields an equal scenario.
inline nlohmann::json scenario_to_json(const Scenario& s) {
    using nlohmann::json;
    json comms = json::array();
    for (const auto& c : s.topology.communities()) {
        comms.push_back({{"name", c.name}, {"id", c.id}, {"population", c.population}, {"dishonest", c.dishonest}});
    }
    json links = json::array();
    for (const auto& [a, b] : s.topology.links()) {
        links.push_back({s.topology.at(a).name, s.topology.at(b).name});
    }
    json stages = json::array();
    for (const auto& st : s.stages) {
        json att = json::array();
        for (auto c : st.attackers) {
            att.push_back(s.topology.at(c).name);
        }
        stages.push_back({{"start_s", st.start_s},
                          {"attackers", att},
                          {"victim", format_ue_id(st.victim)},
                          {"intensity_pps", st.intensity_pps}});
    }
    const auto& tp = s.engine.trust;
    return {
        {"name", s.name},
        {"topology", {{"asn", s.asn}, {"communities", comms}, {"links", links}}},
        {"normal_phase",
         {{"duration_s", s.normal.duration_s},
          {"cross_prob", s.normal.cross_prob},
          {"rate_pps", s.normal.rate_pps},
          {"continue_during_attack", s.normal.continue_during_attack}}},
        {"epidemic",
         {{"i0", s.epidemic.i0}, {"beta", s.epidemic.beta}, {"gamma", s.epidemic.gamma}, {"seed_at_s", s.seed_time()}}},
        {"attack_stages", stages},
        {"metrics_stage", s.instrumented_stage()},
        {"engine",
         {{"architecture", to_string(s.engine.architecture)},
          {"validity_period_s", s.engine.validity_period_s},
          {"decision_cache", s.engine.decision_cache},
          {"trust_threshold", tp.threshold},
          {"priors", {{"good", tp.prior_good}, {"bad", tp.prior_bad}}},
          {"multipliers",
           {{"high_risk", tp.high_risk_multiplier},
            {"medium_risk", tp.medium_risk_multiplier},
            {"low_risk", tp.low_risk_multiplier},
            {"contact", tp.contact_multiplier},
            {"anomaly_weight", tp.anomaly_weight}}},
          {"index_weights",
           {{"vuln", s.engine.index_weights.vuln},
            {"threat", s.engine.index_weights.threat},
            {"anomaly", s.engine.index_weights.anomaly}}}}},
        {"tpss",
         {{"cel_window_s", s.tpss.cel_window_s},
          {"report_latency_s", s.tpss.report_latency_s},
          {"vdb_probe_rate", s.tpss.vdb_probe_rate},
          {"abd", {{"z_max", s.tpss.abd_z_max}, {"sigma_floor", s.tpss.abd_sigma_floor}}}}},
        {"identity", {{"cert_lifetime_s", s.identity.cert_lifetime_s}, {"signer", signer_name(s.identity.signer)}}},
        {"monte_carlo", {{"runs", s.monte_carlo.runs}, {"base_seed", s.monte_carlo.base_seed}}},
        {"max_time_s", s.max_time_s},
    };
}

/// Parses JSON text; syntax and validation errors both surface as
/// InvalidScenario with a `origin:line:` prefix.
inline Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>") {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto ? upto - 1 : 0), '\n');
        throw InvalidScenario(origin + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    return scenario_from_json(root, origin, &text);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot read scenario file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace zt6g
