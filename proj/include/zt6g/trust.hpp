#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "zt6g/domain.hpp"
#include "zt6g/identity.hpp"
#include "zt6g/tpss.hpp"

namespace zt6g {

/// Beta-reputation counts. Value is the posterior mean of a Beta(good+pg, bad+pb).
struct BetaTrust {
    double good = 0.0;
    double bad = 0.0;
    double prior_good = 8.0;
    double prior_bad = 2.0;
};

inline double beta_trust_value(const BetaTrust& bt) {
    return (bt.good + bt.prior_good) / (bt.good + bt.bad + bt.prior_good + bt.prior_bad);
}

enum class Verdict : std::uint8_t { Permit, Deny };
enum class DenyReason : std::uint8_t { Ok, SelfEvaluationBlocked, BelowThreshold, Blacklisted, InvalidCertificate };

inline const char* to_string(DenyReason r) {
    switch (r) {
        case DenyReason::Ok: return "Ok";
        case DenyReason::SelfEvaluationBlocked: return "SelfEvaluationBlocked";
        case DenyReason::BelowThreshold: return "BelowThreshold";
        case DenyReason::Blacklisted: return "Blacklisted";
        case DenyReason::InvalidCertificate: return "InvalidCertificate";
    }
    return "?";
}

struct TrustDecision {
    Verdict verdict = Verdict::Permit;
    double score = 1.0;
    DenyReason reason = DenyReason::Ok;

    bool permitted() const { return verdict == Verdict::Permit; }

    static TrustDecision permit(double score) { return {Verdict::Permit, score, DenyReason::Ok}; }
    static TrustDecision deny(double score, DenyReason why) { return {Verdict::Deny, score, why}; }

    friend bool operator==(const TrustDecision&, const TrustDecision&) = default;
};

/// Tunables shared by the trust-based engines.
struct TrustParams {
    double threshold = 0.75;
    double prior_good = 8.0;
    double prior_bad = 2.0;
    double high_risk_multiplier = 0.8;
    double medium_risk_multiplier = 0.95;
    double low_risk_multiplier = 1.0;
    double contact_multiplier = 0.9;
    double anomaly_weight = 0.5;
};

inline double risk_multiplier(RiskLevel r, const TrustParams& p) {
    switch (r) {
        case RiskLevel::HighRisk: return p.high_risk_multiplier;
        case RiskLevel::MediumRisk: return p.medium_risk_multiplier;
        case RiskLevel::LowRisk: return p.low_risk_multiplier;
    }
    return 1.0;
}

/// Everything the destination's trust evaluation engine gathers for one request.
struct ZtaEvidence {
    VerifyResult certificate = VerifyResult::Valid;
    /// Home community saw an in-window attack report about the guest.
    bool home_flagged = false;
    BetaTrust trust;
    double home_combined_index = 1.0;
    RiskLevel risk = RiskLevel::LowRisk;
    CelFlags cel;
    double anomaly = 0.0;
};

inline double zta6g_score(const ZtaEvidence& ev, const TrustParams& p) {
    return beta_trust_value(ev.trust) * ev.home_combined_index * risk_multiplier(ev.risk, p) *
           (ev.cel.contacted_infected ? p.contact_multiplier : 1.0) * (1.0 - p.anomaly_weight * ev.anomaly);
}

/// Home self-evaluation first, then certificate, then the TPSS-weighted score.
inline TrustDecision evaluate_zta6g(const AccessRequest&, const ZtaEvidence& ev, const TrustParams& p) {
    if (ev.home_flagged) {
        return TrustDecision::deny(0.0, DenyReason::SelfEvaluationBlocked);
    }
    if (ev.certificate != VerifyResult::Valid) {
        return TrustDecision::deny(0.0, DenyReason::InvalidCertificate);
    }
    const double score = zta6g_score(ev, p);
    return score >= p.threshold ? TrustDecision::permit(score) : TrustDecision::deny(score, DenyReason::BelowThreshold);
}

inline TrustDecision evaluate_tbpf(const AccessRequest&, const BetaTrust& held, const TrustParams& p) {
    const double score = beta_trust_value(held);
    return score >= p.threshold ? TrustDecision::permit(score) : TrustDecision::deny(score, DenyReason::BelowThreshold);
}

inline TrustDecision evaluate_tris(const AccessRequest&, bool blacklisted) {
    return blacklisted ? TrustDecision::deny(0.0, DenyReason::Blacklisted) : TrustDecision::permit(1.0);
}

/// Reuses a decision while now - evaluated_at < validity period.
class DecisionCache {
public:
    explicit DecisionCache(Second validity_period) : period_(validity_period) {
        if (validity_period < 1) {
            throw std::invalid_argument("validity period must be >= 1 s");
        }
    }

    Second period() const { return period_; }
    std::uint64_t evaluator_calls() const { return calls_; }

    template <typename Evaluator>
    TrustDecision decide(const AccessRequest& req, Second now, Evaluator&& evaluate) {
        const Key key{req.guest, req.dst_community};
        auto it = entries_.find(key);
        if (it != entries_.end() && now - it->second.evaluated_at < period_) {
            return it->second.decision;
        }
        ++calls_;
        TrustDecision d = evaluate(req);
        entries_.insert_or_assign(key, Entry{d, now});
        return d;
    }

private:
    struct Key {
        UeId guest;
        CommunityId dst;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept { return UeIdHash{}(k.guest) * 31u + k.dst; }
    };
    struct Entry {
        TrustDecision decision;
        Second evaluated_at;
    };

    Second period_;
    std::uint64_t calls_ = 0;
    std::unordered_map<Key, Entry, KeyHash> entries_;
};

template <typename Evaluator>
TrustDecision cached_decide(DecisionCache& cache, const AccessRequest& req, Second now, Evaluator&& evaluate) {
    return cache.decide(req, now, std::forward<Evaluator>(evaluate));
}

// ---------------------------------------------------------------------------
// Access-decision engines
// ---------------------------------------------------------------------------

enum class Architecture { Zta6g, Tbpf, Tris, PermitAll };

inline const char* to_string(Architecture a) {
    switch (a) {
        case Architecture::Zta6g: return "zta6g";
        case Architecture::Tbpf: return "tbpf";
        case Architecture::Tris: return "tris";
        case Architecture::PermitAll: return "permit_all";
    }
    return "?";
}

inline constexpr const char* kArchitectureNames = "zta6g, tbpf, tris, permit_all";

inline std::optional<Architecture> parse_architecture(std::string_view s) {
    for (auto a : {Architecture::Zta6g, Architecture::Tbpf, Architecture::Tris, Architecture::PermitAll}) {
        if (s == to_string(a)) {
            return a;
        }
    }
    return std::nullopt;
}

/// A pluggable access-control policy. Observations arrive already delayed by
/// the reporting latency; engines never see packet labels.
class AccessEngine {
public:
    virtual ~AccessEngine() = default;
    /// Per-request check at the guest's home border, applied before (and never
    /// cached with) the destination's evaluation.
    virtual std::optional<TrustDecision> prescreen(const AccessRequest& /*req*/, Second /*now*/) { return std::nullopt; }
    /// The destination's evaluation; this is what a validity period caches.
    virtual TrustDecision evaluate(const AccessRequest& req, Second now) = 0;
    /// A permitted request from `src` into `dst` drew no attack report.
    virtual void observe_good(CommunityId /*dst*/, const UeId& /*src*/) {}
    /// A victim in `victim_community` reported `packets` attack packets from `src`.
    virtual void observe_attack(CommunityId /*victim_community*/, const UeId& /*src*/, std::uint32_t /*packets*/) {}
};

class PermitAllEngine final : public AccessEngine {
public:
    TrustDecision evaluate(const AccessRequest&, Second) override { return TrustDecision::permit(1.0); }
};

/// Beta-reputation tables, one per destination community. Good observations
/// stay local; attack reports are shared with every community.
class TrustTables {
public:
    TrustTables(std::vector<CommunityId> communities, const TrustParams& p) : params_(p) {
        for (auto c : communities) {
            tables_[c];
        }
    }

    BetaTrust held(CommunityId dst, const UeId& src) const {
        BetaTrust bt{0.0, 0.0, params_.prior_good, params_.prior_bad};
        auto t = tables_.find(dst);
        if (t != tables_.end()) {
            auto it = t->second.find(src);
            if (it != t->second.end()) {
                bt.good = it->second.good;
                bt.bad = it->second.bad;
            }
        }
        return bt;
    }

    void good(CommunityId dst, const UeId& src) { tables_[dst][src].good += 1.0; }

    void bad_everywhere(const UeId& src, std::uint32_t packets) {
        for (auto& [c, table] : tables_) {
            table[src].bad += packets;
        }
    }

private:
    struct Counts {
        double good = 0.0;
        double bad = 0.0;
    };
    TrustParams params_;
    std::map<CommunityId, std::unordered_map<UeId, Counts, UeIdHash>> tables_;
};

class TbpfEngine final : public AccessEngine {
public:
    TbpfEngine(std::vector<CommunityId> communities, const TrustParams& p) : params_(p), tables_(std::move(communities), p) {}

    TrustDecision evaluate(const AccessRequest& req, Second) override {
        return evaluate_tbpf(req, tables_.held(req.dst_community, req.guest), params_);
    }
    void observe_good(CommunityId dst, const UeId& src) override { tables_.good(dst, src); }
    void observe_attack(CommunityId, const UeId& src, std::uint32_t packets) override {
        tables_.bad_everywhere(src, packets);
    }

private:
    TrustParams params_;
    TrustTables tables_;
};

class TrisEngine final : public AccessEngine {
public:
    TrustDecision evaluate(const AccessRequest& req, Second) override {
        auto it = blacklists_.find(req.dst_community);
        return evaluate_tris(req, it != blacklists_.end() && it->second.count(req.guest));
    }
    void observe_attack(CommunityId victim_community, const UeId& src, std::uint32_t) override {
        blacklists_[victim_community].insert(src);
    }

private:
    std::map<CommunityId, std::unordered_set<UeId, UeIdHash>> blacklists_;
};

/// Control-plane view the ZTA-6G engine consults. Provided by the simulation.
struct ZtaServices {
    TpssService* tpss = nullptr;
    /// Certificate status of the guest as seen by the destination.
    std::function<VerifyResult(const UeId&, Second)> verify_guest;
    /// Combined trust index of a community at the current second.
    std::function<double(CommunityId)> combined_index;
    /// Communities whose controllers do not self-block their residents.
    std::set<CommunityId> dishonest;
};

class Zta6gEngine final : public AccessEngine {
public:
    Zta6gEngine(std::vector<CommunityId> communities, const TrustParams& p, ZtaServices services)
        : params_(p), tables_(std::move(communities), p), services_(std::move(services)) {}

    ZtaEvidence gather(const AccessRequest& req, Second now) const {
        ZtaEvidence ev;
        auto& tpss = *services_.tpss;
        ev.cel = tpss.cel(req.guest, now);
        ev.home_flagged = home_flags(req, now);
        ev.certificate = services_.verify_guest ? services_.verify_guest(req.guest, now) : VerifyResult::Valid;
        ev.trust = tables_.held(req.dst_community, req.guest);
        ev.home_combined_index = services_.combined_index ? services_.combined_index(req.home_community) : 1.0;
        ev.risk = tpss.vdb(req.guest, now);
        ev.anomaly = tpss.abd(req.guest, now);
        return ev;
    }

    bool home_flags(const AccessRequest& req, Second now) const {
        return services_.tpss->reported_attacker(req.guest, now) && !services_.dishonest.count(req.home_community);
    }

    std::optional<TrustDecision> prescreen(const AccessRequest& req, Second now) override {
        if (home_flags(req, now)) {
            return TrustDecision::deny(0.0, DenyReason::SelfEvaluationBlocked);
        }
        return std::nullopt;
    }

    TrustDecision evaluate(const AccessRequest& req, Second now) override {
        return evaluate_zta6g(req, gather(req, now), params_);
    }
    void observe_good(CommunityId dst, const UeId& src) override { tables_.good(dst, src); }
    void observe_attack(CommunityId, const UeId& src, std::uint32_t packets) override {
        tables_.bad_everywhere(src, packets);
    }

private:
    TrustParams params_;
    TrustTables tables_;
    ZtaServices services_;
};

}  // namespace zt6g
