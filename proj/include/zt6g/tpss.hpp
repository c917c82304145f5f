#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "zt6g/crypto.hpp"
#include "zt6g/domain.hpp"
#include "zt6g/error.hpp"

namespace zt6g {

// ---------------------------------------------------------------------------
// Cybersecurity event ledger
// ---------------------------------------------------------------------------

enum class EventKind : std::uint8_t {
    AttackReport,
    ContactWithInfected,
    VulnerabilityDisclosed,
    VulnerabilityFixed,
    AccessLogged,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::AttackReport: return "AttackReport";
        case EventKind::ContactWithInfected: return "ContactWithInfected";
        case EventKind::VulnerabilityDisclosed: return "VulnerabilityDisclosed";
        case EventKind::VulnerabilityFixed: return "VulnerabilityFixed";
        case EventKind::AccessLogged: return "AccessLogged";
    }
    return "?";
}

inline EventKind event_kind_from_string(std::string_view s) {
    for (auto k : {EventKind::AttackReport, EventKind::ContactWithInfected, EventKind::VulnerabilityDisclosed,
                   EventKind::VulnerabilityFixed, EventKind::AccessLogged}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

struct LedgerEvent {
    Second t = 0;
    EventKind kind = EventKind::AttackReport;
    UeId subject;
    std::map<std::string, std::string> detail;

    friend bool operator==(const LedgerEvent&, const LedgerEvent&) = default;
};

/// Field-ordered big-endian encoding; `detail` is emitted in key order.
inline Bytes serialize_event(const LedgerEvent& e) {
    ByteWriter w;
    w.str("zt6g-event-v1")
        .uint(static_cast<std::uint64_t>(e.t))
        .uint(static_cast<std::uint8_t>(e.kind))
        .uint(e.subject.asn)
        .uint(e.subject.community_id)
        .uint(e.subject.cert_id)
        .uint(static_cast<std::uint32_t>(e.detail.size()));
    for (const auto& [k, v] : e.detail) {
        w.str(k).str(v);
    }
    return std::move(w).data();
}

inline Digest chain_hash(const LedgerEvent& e, const Digest& prev) {
    ByteWriter w;
    w.raw(serialize_event(e)).raw(prev);
    return crypto::sha256(w.data());
}

struct LedgerEntry {
    LedgerEvent event;
    Digest prev_hash{};
    Digest entry_hash{};
};

/// Append-only hash chain. Truncating the tail is not detectable without an
/// externally anchored head hash.
class Ledger {
public:
    const LedgerEntry& append(LedgerEvent event) {
        if (!entries_.empty() && event.t < entries_.back().event.t) {
            throw TimeRegression("event at t=" + std::to_string(event.t) + " after tail at t=" +
                                 std::to_string(entries_.back().event.t));
        }
        LedgerEntry entry;
        entry.prev_hash = head();
        entry.entry_hash = chain_hash(event, entry.prev_hash);
        entry.event = std::move(event);
        entries_.push_back(std::move(entry));
        return entries_.back();
    }

    Digest head() const { return entries_.empty() ? Digest{} : entries_.back().entry_hash; }
    const std::vector<LedgerEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Adopts entries as stored (e.g. from an export); nothing is re-hashed.
    static Ledger from_entries(std::vector<LedgerEntry> entries) {
        Ledger l;
        l.entries_ = std::move(entries);
        return l;
    }

    void write_jsonl(std::ostream& os) const;
    static Ledger read_jsonl(std::istream& is);

private:
    std::vector<LedgerEntry> entries_;
};

inline bool verify_chain(const Ledger& ledger) {
    Digest prev{};
    for (const auto& e : ledger.entries()) {
        if (e.prev_hash != prev || chain_hash(e.event, prev) != e.entry_hash) {
            return false;
        }
        prev = e.entry_hash;
    }
    return true;
}

inline void Ledger::write_jsonl(std::ostream& os) const {
    for (const auto& e : entries_) {
        nlohmann::json j{
            {"t", e.event.t},
            {"kind", to_string(e.event.kind)},
            {"subject", format_ue_id(e.event.subject)},
            {"detail", e.event.detail},
            {"prev_hash", crypto::to_hex(e.prev_hash)},
            {"entry_hash", crypto::to_hex(e.entry_hash)},
        };
        os << j.dump() << '\n';
    }
}

inline Ledger Ledger::read_jsonl(std::istream& is) {
    std::vector<LedgerEntry> entries;
    std::string line;
    auto to_digest = [](const std::string& hex) {
        const auto raw = crypto::from_hex(hex);
        if (raw.size() != Digest{}.size()) {
            throw std::invalid_argument("hash must be 32 bytes");
        }
        Digest d{};
        std::copy(raw.begin(), raw.end(), d.begin());
        return d;
    };
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto j = nlohmann::json::parse(line);
        LedgerEntry e;
        e.event.t = j.at("t").get<Second>();
        e.event.kind = event_kind_from_string(j.at("kind").get<std::string>());
        e.event.subject = parse_ue_id(j.at("subject").get<std::string>());
        e.event.detail = j.at("detail").get<std::map<std::string, std::string>>();
        e.prev_hash = to_digest(j.at("prev_hash").get<std::string>());
        e.entry_hash = to_digest(j.at("entry_hash").get<std::string>());
        entries.push_back(std::move(e));
    }
    return from_entries(std::move(entries));
}

// ---------------------------------------------------------------------------
// Assessments
// ---------------------------------------------------------------------------

struct CelFlags {
    bool contacted_infected = false;
    bool attacked_victim = false;
};

/// Flags come from events about `guest` with t in [now - window, now].
inline CelFlags cel_assess(const Ledger& ledger, const UeId& guest, Second now, Second window) {
    CelFlags flags;
    for (const auto& e : ledger.entries()) {
        const auto& ev = e.event;
        if (ev.subject != guest || ev.t < now - window || ev.t > now) {
            continue;
        }
        if (ev.kind == EventKind::ContactWithInfected) {
            flags.contacted_infected = true;
        } else if (ev.kind == EventKind::AttackReport) {
            flags.attacked_victim = true;
        }
    }
    return flags;
}

enum class Severity : std::uint8_t { Low, High };
enum class RiskLevel : std::uint8_t { LowRisk, MediumRisk, HighRisk };

inline const char* to_string(RiskLevel r) {
    switch (r) {
        case RiskLevel::LowRisk: return "LowRisk";
        case RiskLevel::MediumRisk: return "MediumRisk";
        case RiskLevel::HighRisk: return "HighRisk";
    }
    return "?";
}

struct VulnRecord {
    UeId ue;
    Severity severity = Severity::High;
    Second disclosed_at = 0;
    std::optional<Second> fixed_at;

    bool open_at(Second now) const { return disclosed_at <= now && (!fixed_at || *fixed_at > now); }
};

inline RiskLevel vdb_assess(std::span<const VulnRecord> records, const UeId& guest, Second now) {
    RiskLevel risk = RiskLevel::LowRisk;
    for (const auto& r : records) {
        if (r.ue != guest || !r.open_at(now)) {
            continue;
        }
        if (r.severity == Severity::High) {
            return RiskLevel::HighRisk;
        }
        risk = RiskLevel::MediumRisk;
    }
    return risk;
}

/// Packets a UE attempted to send across community borders in one second.
struct AccessSample {
    Second t = 0;
    std::uint32_t packets = 0;
};

struct AbdParams {
    /// Samples before this second form the behavioural baseline.
    Second baseline_end = 100;
    double z_max = 5.0;
    double sigma_floor = 1.0;
};

struct AbdBaseline {
    std::size_t samples = 0;
    double mean = 0.0;
    double sigma = 0.0;
};

/// Mean and population standard deviation over active seconds before `until`.
inline AbdBaseline abd_baseline(std::span<const AccessSample> history, Second until) {
    AbdBaseline b;
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& s : history) {
        if (s.t >= until || s.packets == 0) {
            continue;
        }
        ++b.samples;
        sum += s.packets;
        sq += static_cast<double>(s.packets) * s.packets;
    }
    if (b.samples > 0) {
        b.mean = sum / static_cast<double>(b.samples);
        b.sigma = std::sqrt(std::max(0.0, sq / static_cast<double>(b.samples) - b.mean * b.mean));
    }
    return b;
}

inline double abd_from_baseline(const AbdBaseline& b, double current_rate, const AbdParams& p) {
    if (b.samples == 0) {
        return 0.5;
    }
    const double z = (current_rate - b.mean) / std::max(b.sigma, p.sigma_floor);
    return std::clamp(z / p.z_max, 0.0, 1.0);
}

/// Anomaly of the guest's most recent complete second (now - 1) against its
/// baseline. No baseline gives the neutral prior 0.5.
inline double abd_score(std::span<const AccessSample> history, Second now, const AbdParams& p) {
    std::uint32_t current = 0;
    for (const auto& s : history) {
        if (s.t == now - 1) {
            current += s.packets;
        }
    }
    return abd_from_baseline(abd_baseline(history, std::min(p.baseline_end, now - 1)), current, p);
}

struct IndexWeights {
    double vuln = 1.0;
    double threat = 1.0;
    double anomaly = 1.0;
};

struct CommunityTrustIndex {
    double vuln_risk_index = 0.0;
    double threat_index = 0.0;
    double anomaly_index = 0.0;
    double combined = 1.0;
};

inline double combine_indices(double vuln, double threat, double anomaly, const IndexWeights& w) {
    const double total = w.vuln + w.threat + w.anomaly;
    if (total <= 0.0) {
        return 1.0;
    }
    return std::clamp(1.0 - (w.vuln * vuln + w.threat * threat + w.anomaly * anomaly) / total, 0.0, 1.0);
}

using AccessLogs = std::unordered_map<UeId, std::vector<AccessSample>, UeIdHash>;

/// Reference evaluation straight from the raw ledger, records and logs.
inline CommunityTrustIndex community_indices(const Ledger& ledger, std::span<const VulnRecord> vulns,
                                             const AccessLogs& logs, std::span<const UeId> residents, Second now,
                                             Second window, const IndexWeights& weights = {},
                                             const AbdParams& abd = {}) {
    CommunityTrustIndex idx;
    if (residents.empty()) {
        return idx;
    }
    const double n = static_cast<double>(residents.size());
    std::size_t vulnerable = 0;
    for (const auto& ue : residents) {
        if (vdb_assess(vulns, ue, now) != RiskLevel::LowRisk) {
            ++vulnerable;
        }
    }
    std::vector<UeId> attackers;
    for (const auto& e : ledger.entries()) {
        if (e.event.kind == EventKind::AttackReport && e.event.t >= now - window && e.event.t <= now) {
            attackers.push_back(e.event.subject);
        }
    }
    std::sort(attackers.begin(), attackers.end());
    attackers.erase(std::unique(attackers.begin(), attackers.end()), attackers.end());
    std::size_t threats = 0;
    for (const auto& ue : residents) {
        if (std::binary_search(attackers.begin(), attackers.end(), ue)) {
            ++threats;
        }
    }
    double anomaly_sum = 0.0;
    std::size_t active = 0;
    for (const auto& ue : residents) {
        auto it = logs.find(ue);
        if (it == logs.end()) {
            continue;
        }
        const bool is_active = std::any_of(it->second.begin(), it->second.end(), [&](const AccessSample& s) {
            return s.packets > 0 && s.t >= now - window && s.t < now;
        });
        if (is_active) {
            ++active;
            anomaly_sum += abd_score(it->second, now, abd);
        }
    }
    idx.vuln_risk_index = static_cast<double>(vulnerable) / n;
    idx.threat_index = static_cast<double>(threats) / n;
    idx.anomaly_index = active ? anomaly_sum / static_cast<double>(active) : 0.0;
    idx.combined = combine_indices(idx.vuln_risk_index, idx.threat_index, idx.anomaly_index, weights);
    return idx;
}

// ---------------------------------------------------------------------------
// Indexed service used by the simulation hot path
// ---------------------------------------------------------------------------

/// Owns the ledger, vulnerability records and access logs for one run, and
/// keeps per-UE indices so assessments cost O(1) instead of a ledger scan.
/// Answers match the reference functions above on the same data.
class TpssService {
public:
    TpssService(std::vector<std::vector<UeId>> residents, Second window, AbdParams abd, IndexWeights weights)
        : residents_(std::move(residents)), window_(window), abd_(abd), weights_(weights) {
        for (std::size_t c = 0; c < residents_.size(); ++c) {
            for (const auto& ue : residents_[c]) {
                slot_.emplace(ue, states_.size());
                states_.emplace_back();
            }
        }
    }

    const Ledger& ledger() const { return ledger_; }
    const std::vector<VulnRecord>& vuln_records() const { return vulns_; }
    Second window() const { return window_; }
    const AbdParams& abd_params() const { return abd_; }
    const std::vector<std::vector<UeId>>& residents() const { return residents_; }

    AccessLogs access_logs() const {
        AccessLogs logs;
        for (const auto& [ue, i] : slot_) {
            if (!states_[i].log.empty()) {
                logs.emplace(ue, states_[i].log);
            }
        }
        return logs;
    }

    void append(LedgerEvent event) {
        auto& st = state(event.subject);
        if (event.kind == EventKind::AttackReport) {
            st.last_report = event.t;
        } else if (event.kind == EventKind::ContactWithInfected) {
            st.last_contact = event.t;
        }
        ledger_.append(std::move(event));
    }

    /// Registers an open vulnerability and records its disclosure on the ledger.
    void disclose(const UeId& ue, Severity severity, Second t) {
        auto& st = state(ue);
        st.open_records.push_back(vulns_.size());
        vulns_.push_back(VulnRecord{ue, severity, t, std::nullopt});
        append(LedgerEvent{t, EventKind::VulnerabilityDisclosed, ue,
                           {{"severity", severity == Severity::High ? "high" : "low"}}});
    }

    /// Closes every open record of the UE; no-op if none are open.
    void fix(const UeId& ue, Second t) {
        auto& st = state(ue);
        if (st.open_records.empty()) {
            return;
        }
        for (auto r : st.open_records) {
            vulns_[r].fixed_at = t;
        }
        st.open_records.clear();
        append(LedgerEvent{t, EventKind::VulnerabilityFixed, ue, {}});
    }

    bool has_open_vulnerability(const UeId& ue) const { return !state(ue).open_records.empty(); }

    void log_access(const UeId& ue, Second t, std::uint32_t packets) {
        if (packets == 0) {
            return;
        }
        auto& st = state(ue);
        if (!st.log.empty() && st.log.back().t == t) {
            st.log.back().packets += packets;
        } else {
            st.log.push_back(AccessSample{t, packets});
        }
    }

    CelFlags cel(const UeId& guest, Second now) const {
        const auto& st = state(guest);
        return CelFlags{in_window(st.last_contact, now), in_window(st.last_report, now)};
    }

    bool reported_attacker(const UeId& guest, Second now) const { return in_window(state(guest).last_report, now); }

    /// Records are only ever added at their disclosure time, so the open set is current.
    RiskLevel vdb(const UeId& guest, Second now) const {
        const auto& st = state(guest);
        RiskLevel risk = RiskLevel::LowRisk;
        for (auto r : st.open_records) {
            if (!vulns_[r].open_at(now)) {
                continue;
            }
            if (vulns_[r].severity == Severity::High) {
                return RiskLevel::HighRisk;
            }
            risk = RiskLevel::MediumRisk;
        }
        return risk;
    }

    double abd(const UeId& guest, Second now) { return abd_at(state(guest), now); }

    CommunityTrustIndex indices(std::size_t community, Second now) {
        CommunityTrustIndex idx;
        const auto& res = residents_[community];
        if (res.empty()) {
            return idx;
        }
        std::size_t vulnerable = 0;
        std::size_t threats = 0;
        std::size_t active = 0;
        double anomaly_sum = 0.0;
        for (const auto& ue : res) {
            auto& st = state(ue);
            if (vdb(ue, now) != RiskLevel::LowRisk) {
                ++vulnerable;
            }
            if (in_window(st.last_report, now)) {
                ++threats;
            }
            if (active_in_window(st, now)) {
                ++active;
                anomaly_sum += abd_at(st, now);
            }
        }
        const double n = static_cast<double>(res.size());
        idx.vuln_risk_index = static_cast<double>(vulnerable) / n;
        idx.threat_index = static_cast<double>(threats) / n;
        idx.anomaly_index = active ? anomaly_sum / static_cast<double>(active) : 0.0;
        idx.combined = combine_indices(idx.vuln_risk_index, idx.threat_index, idx.anomaly_index, weights_);
        return idx;
    }

private:
    struct UeState {
        std::optional<Second> last_report;
        std::optional<Second> last_contact;
        std::vector<std::size_t> open_records;
        std::vector<AccessSample> log;
        std::optional<AbdBaseline> frozen_baseline;
    };

    UeState& state(const UeId& ue) {
        auto it = slot_.find(ue);
        if (it == slot_.end()) {
            throw std::out_of_range("UE " + format_ue_id(ue) + " is not a registered resident");
        }
        return states_[it->second];
    }
    const UeState& state(const UeId& ue) const { return const_cast<TpssService*>(this)->state(ue); }

    bool in_window(const std::optional<Second>& t, Second now) const {
        return t && *t >= now - window_ && *t <= now;
    }

    bool active_in_window(const UeState& st, Second now) const {
        for (auto it = st.log.rbegin(); it != st.log.rend(); ++it) {
            if (it->t < now - window_) {
                return false;
            }
            if (it->t < now) {
                return true;
            }
        }
        return false;
    }

    double abd_at(UeState& st, Second now) {
        std::uint32_t current = 0;
        for (auto it = st.log.rbegin(); it != st.log.rend() && it->t >= now - 1; ++it) {
            if (it->t == now - 1) {
                current += it->packets;
            }
        }
        const Second until = std::min(abd_.baseline_end, now - 1);
        AbdBaseline b;
        if (until == abd_.baseline_end) {
            if (!st.frozen_baseline) {
                st.frozen_baseline = abd_baseline(st.log, until);
            }
            b = *st.frozen_baseline;
        } else {
            b = abd_baseline(st.log, until);
        }
        return abd_from_baseline(b, current, abd_);
    }

    std::vector<std::vector<UeId>> residents_;
    Second window_;
    AbdParams abd_;
    IndexWeights weights_;
    Ledger ledger_;
    std::vector<VulnRecord> vulns_;
    std::unordered_map<UeId, std::size_t, UeIdHash> slot_;
    std::vector<UeState> states_;
};

}  // namespace zt6g
