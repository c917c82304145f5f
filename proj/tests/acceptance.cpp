// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "sir_oracle.hpp"
#include "zt6g/cli.hpp"
#include "zt6g/engine.hpp"

using namespace zt6g;
namespace fs = std::filesystem;

namespace {

const std::string kDir = ZT6G_SCENARIO_DIR;

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Outcome& o) {
    std::printf("[%s] criterion %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Scenario with_arch(Scenario s, Architecture a) {
    s.engine.architecture = a;
    return s;
}

// Mean per-second filtering rate over the first and last third of each run's
// attack window (seconds of the instrumented stage that carried attack
// traffic), averaged over runs.
std::pair<double, double> ramp(const AveragedMetrics& m) {
    double first = 0.0, last = 0.0;
    for (const auto& r : m.runs) {
        std::vector<double> xs;
        for (const auto& row : r.rows) {
            if (row.t >= r.summary.attack_start && row.attack_total > 0) {
                xs.push_back(row.filtering_rate);
            }
        }
        const std::size_t k = xs.size() / 3;
        if (k == 0) {
            continue;
        }
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            a += xs[i];
            b += xs[xs.size() - k + i];
        }
        first += a / static_cast<double>(k);
        last += b / static_cast<double>(k);
    }
    const double n = static_cast<double>(m.runs.size());
    return {first / n, last / n};
}

std::map<Architecture, AveragedMetrics> fig5;

Outcome ordering() {
    const auto sc = load_scenario(kDir + "/paper_fig5.json");
    const auto t0 = std::chrono::steady_clock::now();
    for (auto a : {Architecture::Zta6g, Architecture::Tbpf, Architecture::Tris}) {
        fig5[a] = run_monte_carlo(with_arch(sc, a), 100, sc.monte_carlo.base_seed, jobs());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& z = fig5[Architecture::Zta6g].accum_filtering_rate;
    const auto& t = fig5[Architecture::Tbpf].accum_filtering_rate;
    const auto& r = fig5[Architecture::Tris].accum_filtering_rate;
    const double se = std::sqrt(z.standard_error() * z.standard_error() + t.standard_error() * t.standard_error());
    Outcome o;
    o.pass = z.mean > t.mean && t.mean > r.mean && z.mean - t.mean > 2.0 * se;
    o.detail = "zta6g " + fmt("%.4f", z.mean) + " > tbpf " + fmt("%.4f", t.mean) + " > tris " + fmt("%.4f", r.mean) +
               "; zta6g-tbpf " + fmt("%.4f", z.mean - t.mean) + " vs 2 SE " + fmt("%.4f", 2 * se) + "; " +
               fmt("%.0f", secs) + " s on " + std::to_string(jobs()) + " thread(s)";
    return o;
}

Outcome ramp_up() {
    Outcome o{true, ""};
    for (auto a : {Architecture::Zta6g, Architecture::Tbpf, Architecture::Tris}) {
        const auto [first, last] = ramp(fig5.at(a));
        o.pass = o.pass && last > first;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string(to_string(a)) + " " + fmt("%.4f", first) + " -> " +
                    fmt("%.4f", last);
    }
    return o;
}

Outcome tris_first_attack() {
    std::uint64_t requests = 0, denied = 0;
    for (const auto& r : fig5.at(Architecture::Tris).runs) {
        requests += r.summary.first_attack_requests;
        denied += r.summary.first_attack_denied;
    }
    return {requests > 0 && denied == 0,
            std::to_string(requests) + " first attack requests at D over 100 runs, " + std::to_string(denied) +
                " denied"};
}

Outcome validity_sweep() {
    const auto sc = load_scenario(kDir + "/paper_fig6.json");
    const auto sweep = sweep_validity(sc, {1, 3, 5, 7}, 100, sc.monte_carlo.base_seed, jobs());
    Outcome o{true, ""};
    double prev = 2.0;
    for (const auto& [p, m] : sweep) {
        const double v = m.accum_filtering_rate.mean;
        o.pass = o.pass && v <= prev + 0.02;
        prev = v;
        o.detail += "p=" + std::to_string(p) + " " + fmt("%.4f", v) + "; ";
    }
    const double p3 = sweep.at(3).accum_filtering_rate.mean;
    const double p5 = sweep.at(5).accum_filtering_rate.mean;
    o.pass = o.pass && p3 > 0.90 - 0.05 && p5 > 0.90 - 0.05;
    o.detail += "target p=3,5 > 0.90 (tolerance 0.05)";
    return o;
}

Outcome sir_oracle() {
    const int runs = 1000;
    double ext = 0, rec = 0, o_ext = 0, o_rec = 0;
    std::mt19937_64 oracle_rng(20240601);
    for (int k = 0; k < runs; ++k) {
        EpidemicState st({1000}, 0.2, 0.2);
        auto rng = make_stream(static_cast<std::uint64_t>(k) + 1, Stream::Epidemic);
        seed_infection(st, 100, rng);
        long t = 0;
        while (!is_extinct(st)) {
            step_sir(st, rng);
            ++t;
        }
        ext += static_cast<double>(t);
        rec += st.community(0).r();
        const auto o = oracle::run_sir(1000, 100, 0.2, 0.2, oracle_rng);
        o_ext += static_cast<double>(o.extinction_time);
        o_rec += static_cast<double>(o.final_recovered);
    }
    const double e1 = std::abs(ext / o_ext - 1.0);
    const double e2 = std::abs(rec / o_rec - 1.0);
    return {e1 < 0.02 && e2 < 0.02,
            "extinction " + fmt("%.3f", ext / runs) + " vs oracle " + fmt("%.3f", o_ext / runs) + " (" +
                fmt("%.2f", 100 * e1) + "%), final R " + fmt("%.2f", rec / runs) + " vs " + fmt("%.2f", o_rec / runs) +
                " (" + fmt("%.2f", 100 * e2) + "%)"};
}

Outcome sir_one_step() {
    const double analytic = 900.0 * (1.0 - std::pow(1.0 - 0.2 / 1000.0, 100));
    const int trials = 10000;
    double sum = 0.0, o_sum = 0.0;
    std::mt19937_64 oracle_rng(77);
    for (int k = 0; k < trials; ++k) {
        EpidemicState st({1000}, 0.2, 0.2);
        auto rng = make_stream(static_cast<std::uint64_t>(k) + 1, Stream::Epidemic);
        seed_infection(st, 100, rng);
        sum += static_cast<double>(step_sir(st, rng).infected[0].size());
        o_sum += oracle::one_step_new_infections(900, 100, 1000, 0.2, oracle_rng);
    }
    const double mean = sum / trials;
    const double o_mean = o_sum / trials;
    const double err = std::abs(mean / analytic - 1.0);
    const double o_err = std::abs(o_mean / analytic - 1.0);
    return {err < 0.02 && o_err < 0.02, "mean " + fmt("%.3f", mean) + " (oracle " + fmt("%.3f", o_mean) +
                                            ") vs analytic " + fmt("%.3f", analytic) + ", error " +
                                            fmt("%.2f", 100 * err) + "%"};
}

Outcome ledger_integrity() {
    Ledger base;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        base.append(LedgerEvent{i / 2, static_cast<EventKind>(rng() % 5), UeId{64512, static_cast<CommunityId>(rng() % 4 + 1), rng() % 1000 + 1},
                                {{"packets", std::to_string(rng() % 50)}, {"victim", "64512:4:1"}}});
    }
    if (!verify_chain(base)) {
        return {false, "untouched ledger does not verify"};
    }
    std::uint64_t mutations = 0, detected = 0;
    auto check = [&](const std::function<void(LedgerEntry&)>& mutate, std::size_t i) {
        auto entries = base.entries();
        mutate(entries[i]);
        ++mutations;
        detected += verify_chain(Ledger::from_entries(std::move(entries))) ? 0 : 1;
    };
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (int b = 0; b < 64; ++b) {
            check([b](LedgerEntry& e) { e.event.t ^= Second{1} << b; }, i);
            check([b](LedgerEntry& e) { e.event.subject.cert_id ^= CertId{1} << b; }, i);
        }
        for (int b = 0; b < 32; ++b) {
            check([b](LedgerEntry& e) { e.event.subject.asn ^= Asn{1} << b; }, i);
            check([b](LedgerEntry& e) { e.event.subject.community_id ^= CommunityId{1} << b; }, i);
        }
        for (int b = 0; b < 8; ++b) {
            check([b](LedgerEntry& e) {
                e.event.kind = static_cast<EventKind>(static_cast<std::uint8_t>(e.event.kind) ^ (1u << b));
            }, i);
        }
        for (const auto& [key, value] : base.entries()[i].event.detail) {
            for (std::size_t c = 0; c < key.size() * 8; ++c) {
                check([&, c](LedgerEntry& e) {
                    auto node = e.event.detail.extract(key);
                    node.key()[c / 8] ^= static_cast<char>(1u << (c % 8));
                    e.event.detail.insert(std::move(node));
                }, i);
            }
            for (std::size_t c = 0; c < value.size() * 8; ++c) {
                check([&, c](LedgerEntry& e) { e.event.detail[key][c / 8] ^= static_cast<char>(1u << (c % 8)); }, i);
            }
        }
        for (std::size_t c = 0; c < 256; ++c) {
            check([c](LedgerEntry& e) { e.prev_hash[c / 8] ^= static_cast<std::uint8_t>(1u << (c % 8)); }, i);
            check([c](LedgerEntry& e) { e.entry_hash[c / 8] ^= static_cast<std::uint8_t>(1u << (c % 8)); }, i);
        }
    }
    return {detected == mutations, std::to_string(detected) + "/" + std::to_string(mutations) +
                                       " single-bit mutations detected"};
}

Outcome certificate_lifecycle() {
    std::mt19937_64 rng(8);
    std::uint64_t violations = 0, checks = 0;
    auto expect = [&](VerifyResult got, VerifyResult want) {
        ++checks;
        violations += got == want ? 0 : 1;
    };
    auto flip = [&](Bytes& b) { b[rng() % b.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8)); };
    for (int i = 0; i < 1000; ++i) {
        Digest seed{};
        for (auto& x : seed) {
            x = static_cast<std::uint8_t>(rng());
        }
        const auto kind = i % 2 ? SignerKind::Ed25519 : SignerKind::Hmac;
        IdentityRegistry reg(static_cast<Asn>(rng() % 65536), static_cast<CommunityId>(rng() % 100 + 1),
                             make_signer(kind, seed), static_cast<Second>(rng() % 5000 + 1));
        CertificateRequest req;
        req.subject_public_key.resize(rng() % 64 + 1);
        for (auto& x : req.subject_public_key) {
            x = static_cast<std::uint8_t>(rng());
        }
        req.ue_type = static_cast<UeType>(rng() % 4);
        req.os_version = "os-" + std::to_string(rng() % 100);
        req.proof_of_identity = Bytes(rng() % 16 + 1, static_cast<std::uint8_t>(rng()));
        req.origin = static_cast<CertOrigin>(rng() % 2);
        const Second now = static_cast<Second>(rng() % 100000);
        const auto cert = reg.register_certificate(req, now);
        expect(reg.verify_certificate(cert, now), VerifyResult::Valid);
        expect(reg.verify_certificate(cert, cert.valid_until), VerifyResult::Valid);
        expect(reg.verify_certificate(cert, cert.valid_until + 1 + static_cast<Second>(rng() % 1000)),
               VerifyResult::Expired);

        std::vector<std::function<void(Certificate&)>> mutations{
            [&](Certificate& c) { c.cert_id ^= CertId{1} << (rng() % 64); },
            [&](Certificate& c) { c.community_id ^= CommunityId{1} << (rng() % 32); },
            [&](Certificate& c) { c.asn ^= Asn{1} << (rng() % 32); },
            [&](Certificate& c) { flip(c.subject_public_key); },
            [&](Certificate& c) { c.issued_at ^= Second{1} << (rng() % 63); },
            [&](Certificate& c) { c.valid_until ^= Second{1} << (rng() % 63); },
            [&](Certificate& c) { c.status = CertStatus::Revoked; },
            [&](Certificate& c) { flip(c.issuer_signature); },
        };
        for (const auto& m : mutations) {
            auto bad = cert;
            m(bad);
            expect(reg.verify_certificate(bad, now), VerifyResult::SignatureMismatch);
        }

        reg.revoke_certificate(cert.cert_id);
        expect(reg.verify_certificate(cert, now), VerifyResult::Revoked);
        expect(reg.verify_certificate(cert, cert.valid_until + 10), VerifyResult::Revoked);
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) +
                                 " checks over 1000 random requests"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "zt6g_acceptance_determinism";
    fs::remove_all(root);
    std::ostringstream sink;
    cli::BatchOptions o;
    o.scenario_path = kDir + "/paper_fig5.json";
    o.archs = "zta6g,tbpf,tris";
    o.runs = 5;
    o.seed = 1;
    o.jobs = jobs();
    o.per_run = true;
    o.out_dir = (root / "a").string();
    const int ca = cli::cmd_compare(o, sink);
    o.jobs = 1;
    o.out_dir = (root / "b").string();
    const int cb = cli::cmd_compare(o, sink);
    if (ca != 0 || cb != 0) {
        return {false, "cmd_compare failed: " + sink.str()};
    }
    std::size_t files = 0, identical = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        ++files;
        const auto other = root / "b" / entry.path().filename();
        identical += fs::exists(other) && slurp(entry.path()) == slurp(other) ? 1 : 0;
    }
    std::size_t files_b = std::distance(fs::directory_iterator(root / "b"), fs::directory_iterator{});
    fs::remove_all(root);
    return {files > 0 && identical == files && files_b == files,
            std::to_string(identical) + "/" + std::to_string(files) + " bundle files byte-identical"};
}

Outcome cache_contract() {
    // Continuous request streams for many (guest, destination) keys: every
    // window of 5 consecutive seconds holds exactly one evaluation per key.
    std::mt19937_64 rng(12);
    std::size_t windows = 0, bad_windows = 0;
    for (int key = 0; key < 200; ++key) {
        DecisionCache cache(5);
        const UeId guest{64512, 2, static_cast<CertId>(key + 1)};
        const Second start = static_cast<Second>(rng() % 200);
        const Second len = static_cast<Second>(rng() % 60 + 5);
        std::vector<Second> evaluated;
        for (Second t = start; t < start + len; ++t) {
            AccessRequest req{guest, 2, 4, t, 10};
            cached_decide(cache, req, t, [&](const AccessRequest&) {
                evaluated.push_back(t);
                return TrustDecision::permit(0.8);
            });
        }
        for (Second w = start; w + 5 <= start + len; ++w) {
            ++windows;
            const auto n = std::count_if(evaluated.begin(), evaluated.end(), [&](Second e) { return e >= w && e < w + 5; });
            bad_windows += n == 1 ? 0 : 1;
        }
    }
    // Period 1: the full simulation gives identical output with and without the cache.
    const auto sc = load_scenario(kDir + "/paper_fig5.json");
    std::size_t compared = 0, equal = 0;
    for (auto a : {Architecture::Zta6g, Architecture::Tbpf, Architecture::Tris, Architecture::PermitAll}) {
        for (std::uint64_t seed = 1; seed <= 2; ++seed) {
            auto cached = with_arch(sc, a);
            cached.engine.validity_period_s = 1;
            auto uncached = cached;
            uncached.engine.decision_cache = false;
            ++compared;
            equal += run(cached, seed) == run(uncached, seed) ? 1 : 0;
        }
    }
    return {bad_windows == 0 && equal == compared,
            std::to_string(windows - bad_windows) + "/" + std::to_string(windows) +
                " five-second windows with exactly one evaluation at p=5; " + std::to_string(equal) + "/" +
                std::to_string(compared) + " p=1 runs identical with and without cache"};
}

}  // namespace

int main() {
    report(1, "architecture ordering", ordering());
    report(2, "ramp-up", ramp_up());
    report(3, "TRIS first-attack", tris_first_attack());
    report(4, "validity-period sweep", validity_sweep());
    report(5, "SIR oracle equivalence", sir_oracle());
    report(6, "one-step SIR expectation", sir_one_step());
    report(7, "ledger integrity", ledger_integrity());
    report(8, "certificate lifecycle", certificate_lifecycle());
    report(9, "determinism", determinism());
    report(10, "cache contract", cache_contract());
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
