#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zt6g/domain.hpp"
#include "zt6g/epidemic.hpp"
#include "zt6g/identity.hpp"
#include "zt6g/rng.hpp"
#include "zt6g/scenario.hpp"
#include "zt6g/tpss.hpp"
#include "zt6g/trust.hpp"

namespace zt6g {

struct SirCounts {
    std::uint32_t s = 0;
    std::uint32_t i = 0;
    std::uint32_t r = 0;
    friend bool operator==(const SirCounts&, const SirCounts&) = default;
};

/// One second at the instrumented victim.
struct SecondRow {
    Second t = 0;
    std::uint64_t attack_total = 0;
    std::uint64_t attack_blocked = 0;
    std::uint64_t attack_delivered = 0;
    double filtering_rate = 1.0;
    double accum_filtering_rate = 1.0;
    std::uint64_t missed_cum = 0;
    std::vector<SirCounts> sir;  // communities in name order

    friend bool operator==(const SecondRow&, const SecondRow&) = default;
};

struct RunSummary {
    std::uint64_t seed = 0;
    double accum_filtering_rate = 1.0;
    std::uint64_t attack_total = 0;
    std::uint64_t attack_blocked = 0;
    std::uint64_t missed_packets = 0;
    /// First second of the instrumented stage and the second after the last simulated one.
    Second attack_start = 0;
    Second end_time = 0;
    /// First second with no infected UE anywhere, if reached.
    std::optional<Second> extinction_time;
    std::uint32_t final_recovered = 0;
    std::uint64_t evaluator_calls = 0;
    /// Distinct sources whose first attack request reached the instrumented community.
    std::uint64_t first_attack_requests = 0;
    std::uint64_t first_attack_denied = 0;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct RunMetrics {
    std::vector<std::string> communities;  // name order
    std::vector<SecondRow> rows;           // t = 0 .. end_time - 1
    RunSummary summary;

    friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

inline double rate_or_one(std::uint64_t blocked, std::uint64_t total) {
    return total == 0 ? 1.0 : static_cast<double>(blocked) / static_cast<double>(total);
}

namespace detail {

/// Deterministic per-run key material.
inline Digest derive_key(std::string_view purpose, std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    ByteWriter w;
    w.str(purpose).uint(seed).uint(a).uint(b);
    return crypto::sha256(w.data());
}

class Simulation {
public:
    Simulation(const Scenario& sc, std::uint64_t seed)
        : sc_(sc),
          seed_(seed),
          comms_(sc.communities_by_name()),
          traffic_rng_(make_stream(seed, Stream::Traffic)),
          epidemic_rng_(make_stream(seed, Stream::Epidemic)),
          tpss_rng_(make_stream(seed, Stream::Tpss)),
          epidemic_(populations(), sc.epidemic.beta, sc.epidemic.gamma),
          cache_(sc.engine.validity_period_s) {
        for (std::size_t c = 0; c < comms_.size(); ++c) {
            index_of_id_[comms_[c]->id] = c;
        }
        for (std::size_t c = 0; c < comms_.size(); ++c) {
            std::vector<std::size_t> linked;
            for (auto n : sc.topology.neighbours(comms_[c]->id)) {
                linked.push_back(index_of_id_.at(n));
            }
            neighbours_.push_back(std::move(linked));
        }
        register_population();
        std::vector<std::vector<UeId>> residents;
        for (std::size_t c = 0; c < comms_.size(); ++c) {
            residents.push_back(certificate_holders(c));
        }
        AbdParams abd{sc.normal.duration_s, sc.tpss.abd_z_max, sc.tpss.abd_sigma_floor};
        tpss_ = std::make_unique<TpssService>(std::move(residents), sc.tpss.cel_window_s, abd,
                                              sc.engine.index_weights);
        combined_.assign(comms_.size(), 1.0);
        make_engine();
    }

    const TpssService& tpss() const { return *tpss_; }

    RunMetrics run() {
        RunMetrics m;
        for (auto* c : comms_) {
            m.communities.push_back(c->name);
        }
        const auto metrics_stage = sc_.instrumented_stage();
        const auto& mstage = sc_.stages[metrics_stage];
        const Second seed_at = sc_.seed_time();
        m.summary.seed = seed_;
        m.summary.attack_start = mstage.start_s;

        std::uint64_t cum_total = 0;
        std::uint64_t cum_blocked = 0;
        std::uint64_t cum_delivered = 0;
        Second t = 0;
        for (; t < sc_.max_time_s; ++t) {
            deliver_pending(t);
            if (t == seed_at) {
                seed_infection(epidemic_, sc_.epidemic.i0, epidemic_rng_);
            } else if (t > seed_at) {
                auto tr = step_sir(epidemic_, epidemic_rng_);
                for (std::size_t c = 0; c < comms_.size(); ++c) {
                    for (auto ue : tr.recovered[c]) {
                        // Every compromised UE carried the zero-day; an unprobed one is
                        // recorded at fix time.
                        const auto id = ue_id(c, ue);
                        if (!tpss_->has_open_vulnerability(id)) {
                            tpss_->disclose(id, Severity::High, t);
                        }
                        tpss_->fix(id, t);
                    }
                }
            }
            if (t >= seed_at && is_extinct(epidemic_)) {
                m.summary.extinction_time = t;
                break;
            }
            if (t >= seed_at) {
                probe_vulnerabilities(t);
            }
            if (arch_ == Architecture::Zta6g) {
                for (std::size_t c = 0; c < comms_.size(); ++c) {
                    combined_[c] = tpss_->indices(c, t).combined;
                }
            }

            const auto stage = active_stage(t);
            const bool instrumented = stage && *stage == metrics_stage;
            auto requests = generate_traffic(t, stage);
            SecondRow row;
            row.t = t;
            for (auto& req : requests) {
                decide_and_deliver(req, t, instrumented ? &mstage.victim : nullptr, row, m.summary);
            }
            row.attack_delivered = row.attack_total - row.attack_blocked;
            cum_total += row.attack_total;
            cum_blocked += row.attack_blocked;
            cum_delivered += row.attack_delivered;
            row.filtering_rate = rate_or_one(row.attack_blocked, row.attack_total);
            row.accum_filtering_rate = rate_or_one(cum_blocked, cum_total);
            row.missed_cum = cum_delivered;
            for (std::size_t c = 0; c < comms_.size(); ++c) {
                const auto& ce = epidemic_.community(c);
                row.sir.push_back(SirCounts{ce.s(), ce.i(), ce.r()});
            }
            m.rows.push_back(std::move(row));
        }
        m.summary.end_time = t;
        m.summary.attack_total = cum_total;
        m.summary.attack_blocked = cum_blocked;
        m.summary.missed_packets = cum_delivered;
        m.summary.accum_filtering_rate = rate_or_one(cum_blocked, cum_total);
        m.summary.evaluator_calls = cache_.evaluator_calls() + uncached_calls_;
        for (std::size_t c = 0; c < comms_.size(); ++c) {
            m.summary.final_recovered += epidemic_.community(c).r();
        }
        return m;
    }

private:
    /// Traffic from one source into one destination community in one second.
    struct Request {
        std::size_t src_comm = 0;
        std::uint32_t src_ue = 0;
        std::size_t dst_comm = 0;
        std::uint32_t normal_packets = 0;
        std::uint32_t attack_packets = 0;
        std::vector<std::uint32_t> normal_targets;
        std::optional<UeId> attack_target;
    };

    enum class PendingKind : std::uint8_t { Report, Good, Contact };
    struct Pending {
        PendingKind kind;
        UeId subject;
        std::size_t community = 0;  // victim community (Report) or destination (Good)
        UeId peer;                  // victim (Report) or infected peer (Contact)
        std::uint32_t packets = 0;
    };

    std::vector<std::uint32_t> populations() const {
        std::vector<std::uint32_t> p;
        for (auto* c : comms_) {
            p.push_back(c->population);
        }
        return p;
    }

    UeId ue_id(std::size_t c, std::uint32_t ue) const { return UeId{sc_.asn, comms_[c]->id, ue + 1u}; }

    std::vector<UeId> certificate_holders(std::size_t c) const {
        std::vector<UeId> ids;
        for (const auto& cert : certs_[c]) {
            ids.push_back(cert.holder());
        }
        return ids;
    }

    void register_population() {
        for (std::size_t c = 0; c < comms_.size(); ++c) {
            const auto key = derive_key("zt6g-ca", seed_, sc_.asn, comms_[c]->id);
            std::shared_ptr<const Signer> signer = make_signer(sc_.identity.signer, key);
            registries_.emplace_back(sc_.asn, comms_[c]->id, signer, sc_.identity.cert_lifetime_s);
            certs_.emplace_back();
            for (std::uint32_t i = 0; i < comms_[c]->population; ++i) {
                const auto pk = derive_key("zt6g-ue-key", seed_, comms_[c]->id, i);
                CertificateRequest req;
                req.subject_public_key.assign(pk.begin(), pk.end());
                req.ue_type = UeType::IoT;
                req.os_version = "ue-os-1.0";
                req.proof_of_identity = {0x01};
                req.origin = CertOrigin::HomeGenerated;
                certs_.back().push_back(registries_.back().register_certificate(req, 0));
                assert(certs_.back().back().cert_id == i + 1u);
            }
        }
    }

    void make_engine() {
        arch_ = sc_.engine.architecture;
        std::vector<CommunityId> ids;
        for (auto* c : comms_) {
            ids.push_back(c->id);
        }
        switch (arch_) {
            case Architecture::PermitAll:
                engine_ = std::make_unique<PermitAllEngine>();
                break;
            case Architecture::Tris:
                engine_ = std::make_unique<TrisEngine>();
                break;
            case Architecture::Tbpf:
                engine_ = std::make_unique<TbpfEngine>(ids, sc_.engine.trust);
                break;
            case Architecture::Zta6g: {
                ZtaServices svc;
                svc.tpss = tpss_.get();
                svc.verify_guest = [this](const UeId& ue, Second now) {
                    const auto c = index_of_id_.at(ue.community_id);
                    return registries_[c].verify_certificate(certs_[c][ue.cert_id - 1], now);
                };
                svc.combined_index = [this](CommunityId id) { return combined_[index_of_id_.at(id)]; };
                for (auto* c : comms_) {
                    if (c->dishonest) {
                        svc.dishonest.insert(c->id);
                    }
                }
                engine_ = std::make_unique<Zta6gEngine>(ids, sc_.engine.trust, std::move(svc));
                break;
            }
        }
    }

    std::optional<std::size_t> active_stage(Second t) const {
        std::optional<std::size_t> active;
        for (std::size_t s = 0; s < sc_.stages.size(); ++s) {
            if (sc_.stages[s].start_s <= t) {
                active = s;
            }
        }
        return active;
    }

    void schedule(Second at, Pending p) { pending_[at].push_back(std::move(p)); }

    void deliver_pending(Second t) {
        auto it = pending_.find(t);
        if (it == pending_.end()) {
            return;
        }
        for (const auto& p : it->second) {
            switch (p.kind) {
                case PendingKind::Report:
                    tpss_->append(LedgerEvent{t, EventKind::AttackReport, p.subject,
                                              {{"packets", std::to_string(p.packets)}, {"victim", format_ue_id(p.peer)}}});
                    engine_->observe_attack(comms_[p.community]->id, p.subject, p.packets);
                    break;
                case PendingKind::Good:
                    engine_->observe_good(comms_[p.community]->id, p.subject);
                    break;
                case PendingKind::Contact:
                    tpss_->append(LedgerEvent{t, EventKind::ContactWithInfected, p.subject,
                                              {{"peer", format_ue_id(p.peer)}}});
                    break;
            }
        }
        pending_.erase(it);
    }

    /// Random probing exposes the open zero-day on compromised UEs.
    void probe_vulnerabilities(Second t) {
        if (sc_.tpss.vdb_probe_rate <= 0.0) {
            return;
        }
        std::bernoulli_distribution hit(sc_.tpss.vdb_probe_rate);
        for (std::size_t c = 0; c < comms_.size(); ++c) {
            auto members = epidemic_.community(c).infected_members();
            std::sort(members.begin(), members.end());
            for (auto ue : members) {
                const auto id = ue_id(c, ue);
                if (!tpss_->has_open_vulnerability(id) && hit(tpss_rng_)) {
                    tpss_->disclose(id, Severity::High, t);
                }
            }
        }
    }

    std::vector<Request> generate_traffic(Second t, std::optional<std::size_t> stage) {
        std::map<std::pair<std::uint64_t, std::size_t>, Request> reqs;
        auto slot = [&](std::size_t sc, std::uint32_t ue, std::size_t dc) -> Request& {
            const std::uint64_t src_key = (std::uint64_t{sc} << 32) | ue;
            auto [it, fresh] = reqs.try_emplace({src_key, dc});
            if (fresh) {
                it->second.src_comm = sc;
                it->second.src_ue = ue;
                it->second.dst_comm = dc;
            }
            return it->second;
        };
        const bool attacking = stage.has_value();
        if (t < sc_.normal.duration_s || sc_.normal.continue_during_attack) {
            std::bernoulli_distribution active(sc_.normal.cross_prob);
            for (std::size_t c = 0; c < comms_.size(); ++c) {
                const auto& nb = neighbours_[c];
                for (std::uint32_t ue = 0; ue < comms_[c]->population; ++ue) {
                    if (!active(traffic_rng_) || nb.empty()) {
                        continue;
                    }
                    const auto dc = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(traffic_rng_)];
                    const auto dst = std::uniform_int_distribution<std::uint32_t>(0, comms_[dc]->population - 1)(traffic_rng_);
                    auto& r = slot(c, ue, dc);
                    r.normal_packets += sc_.normal.rate_pps;
                    r.normal_targets.push_back(dst);
                }
            }
        }
        if (attacking) {
            const auto& st = sc_.stages[*stage];
            const auto vc = index_of_id_.at(st.victim.community_id);
            for (auto att : st.attackers) {
                const auto c = index_of_id_.at(att);
                auto members = epidemic_.community(c).infected_members();
                std::sort(members.begin(), members.end());
                for (auto ue : members) {
                    auto& r = slot(c, ue, vc);
                    r.attack_packets += st.intensity_pps;
                    r.attack_target = st.victim;
                }
            }
        }
        std::vector<Request> out;
        out.reserve(reqs.size());
        for (auto& [key, r] : reqs) {
            out.push_back(std::move(r));
        }
        return out;
    }

    void decide_and_deliver(const Request& r, Second t, const UeId* metrics_victim, SecondRow& row,
                            RunSummary& summary) {
        const auto src = ue_id(r.src_comm, r.src_ue);
        const std::uint32_t packets = r.normal_packets + r.attack_packets;
        const bool counts = metrics_victim && r.attack_target && *r.attack_target == *metrics_victim;
        if (counts) {
            row.attack_total += r.attack_packets;
        }
        tpss_->log_access(src, t, packets);

        TrustDecision decision = TrustDecision::permit(1.0);
        if (r.src_comm != r.dst_comm) {
            AccessRequest req{src, comms_[r.src_comm]->id, comms_[r.dst_comm]->id, t, packets};
            if (auto blocked = engine_->prescreen(req, t)) {
                decision = *blocked;
            } else if (sc_.engine.decision_cache) {
                decision = cached_decide(cache_, req, t, [&](const AccessRequest& q) { return engine_->evaluate(q, t); });
            } else {
                ++uncached_calls_;
                decision = engine_->evaluate(req, t);
            }
        }
        if (r.attack_packets > 0 && metrics_victim && r.dst_comm == index_of_id_.at(metrics_victim->community_id) &&
            first_attack_seen_.insert(src).second) {
            ++summary.first_attack_requests;
            if (!decision.permitted()) {
                ++summary.first_attack_denied;
            }
        }
        if (!decision.permitted()) {
            if (counts) {
                row.attack_blocked += r.attack_packets;
            }
            return;
        }
        const Second at = t + sc_.tpss.report_latency_s;
        if (r.attack_packets > 0) {
            schedule(at, Pending{PendingKind::Report, src, r.dst_comm, *r.attack_target, r.attack_packets});
        } else {
            schedule(at, Pending{PendingKind::Good, src, r.dst_comm, {}, 0});
        }
        // Forensics: cross-community exchanges with compromised UEs.
        if (r.src_comm == r.dst_comm) {
            return;
        }
        const bool src_infected = epidemic_.community(r.src_comm).infected(r.src_ue);
        bool src_flagged = false;
        for (auto dst : r.normal_targets) {
            const bool dst_infected = epidemic_.community(r.dst_comm).infected(dst);
            if (dst_infected && !src_flagged) {
                schedule(at, Pending{PendingKind::Contact, src, r.dst_comm, ue_id(r.dst_comm, dst), 0});
                src_flagged = true;
            }
            if (src_infected) {
                schedule(at, Pending{PendingKind::Contact, ue_id(r.dst_comm, dst), r.dst_comm, src, 0});
            }
        }
    }

    const Scenario& sc_;
    std::uint64_t seed_;
    std::vector<const Community*> comms_;
    std::unordered_map<CommunityId, std::size_t> index_of_id_;
    std::vector<std::vector<std::size_t>> neighbours_;
    Rng traffic_rng_;
    Rng epidemic_rng_;
    Rng tpss_rng_;
    EpidemicState epidemic_;
    std::vector<IdentityRegistry> registries_;
    std::vector<std::vector<Certificate>> certs_;
    std::unique_ptr<TpssService> tpss_;
    std::vector<double> combined_;
    Architecture arch_ = Architecture::PermitAll;
    std::unique_ptr<AccessEngine> engine_;
    DecisionCache cache_;
    std::uint64_t uncached_calls_ = 0;
    std::map<Second, std::vector<Pending>> pending_;
    std::unordered_set<UeId, UeIdHash> first_attack_seen_;
};

}  // namespace detail

/// One deterministic run. Identical (scenario, seed) gives identical metrics.
inline RunMetrics run(const Scenario& scenario, std::uint64_t seed) {
    detail::Simulation sim(scenario, seed);
    return sim.run();
}

/// As run(), also handing back the run's event ledger.
inline RunMetrics run(const Scenario& scenario, std::uint64_t seed, Ledger& ledger) {
    detail::Simulation sim(scenario, seed);
    auto m = sim.run();
    ledger = sim.tpss().ledger();
    return m;
}

struct Stat {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;

    double standard_error() const { return n > 1 ? sd / std::sqrt(static_cast<double>(n)) : 0.0; }
};

inline Stat describe(const std::vector<double>& xs) {
    Stat s;
    s.n = xs.size();
    if (xs.empty()) {
        return s;
    }
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

struct AveragedRow {
    Second t = 0;
    double attack_total = 0.0;
    double attack_blocked = 0.0;
    double attack_delivered = 0.0;
    double filtering_rate = 0.0;
    double accum_filtering_rate = 0.0;
    double missed_cum = 0.0;
    std::vector<std::array<double, 3>> sir;
};

struct AveragedMetrics {
    std::vector<std::string> communities;
    std::vector<AveragedRow> rows;
    Stat accum_filtering_rate;
    Stat missed_packets;
    Stat extinction_time;
    Stat evaluator_calls;
    std::vector<RunMetrics> runs;  // seed order
};

/// Arithmetic mean over runs aligned on t. Shorter runs are padded with an
/// idle second: zero packets, rate 1.0, cumulative columns and S/I/R carried.
inline AveragedMetrics average(std::vector<RunMetrics> runs) {
    AveragedMetrics out;
    if (runs.empty()) {
        return out;
    }
    out.communities = runs.front().communities;
    std::size_t len = 0;
    for (const auto& r : runs) {
        len = std::max(len, r.rows.size());
    }
    const double n = static_cast<double>(runs.size());
    out.rows.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        auto& row = out.rows[i];
        row.t = static_cast<Second>(i);
        row.sir.assign(out.communities.size(), {0.0, 0.0, 0.0});
        for (const auto& r : runs) {
            if (r.rows.empty()) {
                row.filtering_rate += 1.0;
                row.accum_filtering_rate += 1.0;
                continue;
            }
            const bool pad = i >= r.rows.size();
            const auto& src = pad ? r.rows.back() : r.rows[i];
            if (!pad) {
                row.attack_total += static_cast<double>(src.attack_total);
                row.attack_blocked += static_cast<double>(src.attack_blocked);
                row.attack_delivered += static_cast<double>(src.attack_delivered);
            }
            row.filtering_rate += pad ? 1.0 : src.filtering_rate;
            row.accum_filtering_rate += src.accum_filtering_rate;
            row.missed_cum += static_cast<double>(src.missed_cum);
            for (std::size_t c = 0; c < row.sir.size(); ++c) {
                // A padded second is post-extinction: nobody is infected.
                const auto& sir = src.sir[c];
                row.sir[c][0] += sir.s;
                row.sir[c][1] += pad ? 0.0 : sir.i;
                row.sir[c][2] += pad ? sir.r + sir.i : sir.r;
            }
        }
        row.attack_total /= n;
        row.attack_blocked /= n;
        row.attack_delivered /= n;
        row.filtering_rate /= n;
        row.accum_filtering_rate /= n;
        row.missed_cum /= n;
        for (auto& sir : row.sir) {
            for (auto& v : sir) {
                v /= n;
            }
        }
    }
    std::vector<double> acc, missed, ext, calls;
    for (const auto& r : runs) {
        acc.push_back(r.summary.accum_filtering_rate);
        missed.push_back(static_cast<double>(r.summary.missed_packets));
        ext.push_back(static_cast<double>(r.summary.extinction_time.value_or(r.summary.end_time)));
        calls.push_back(static_cast<double>(r.summary.evaluator_calls));
    }
    out.accum_filtering_rate = describe(acc);
    out.missed_packets = describe(missed);
    out.extinction_time = describe(ext);
    out.evaluator_calls = describe(calls);
    out.runs = std::move(runs);
    return out;
}

/// Runs `runs` seeds base_seed, base_seed+1, ... on up to `jobs` threads and
/// reduces them in seed order.
inline AveragedMetrics run_monte_carlo(const Scenario& scenario, std::uint32_t runs, std::uint64_t base_seed,
                                       unsigned jobs = 1) {
    if (runs < 1) {
        throw std::invalid_argument("runs must be >= 1");
    }
    std::vector<RunMetrics> results(runs);
    jobs = std::clamp<unsigned>(jobs, 1, runs);
    if (jobs == 1) {
        for (std::uint32_t i = 0; i < runs; ++i) {
            results[i] = run(scenario, base_seed + i);
        }
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (auto i = next++; i < runs; i = next++) {
                        results[i] = run(scenario, base_seed + i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : workers) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    return average(std::move(results));
}

/// One Monte Carlo batch per validity period, same seed schedule for each.
inline std::map<Second, AveragedMetrics> sweep_validity(const Scenario& scenario, const std::vector<Second>& periods,
                                                        std::uint32_t runs, std::uint64_t base_seed,
                                                        unsigned jobs = 1) {
    std::map<Second, AveragedMetrics> out;
    for (auto p : periods) {
        if (p < 1) {
            throw std::invalid_argument("validity periods must be >= 1");
        }
    }
    for (auto p : periods) {
        Scenario s = scenario;
        s.engine.validity_period_s = p;
        out.emplace(p, run_monte_carlo(s, runs, base_seed, jobs));
    }
    return out;
}

}  // namespace zt6g
