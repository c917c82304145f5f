#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "zt6g/error.hpp"
#include "zt6g/rng.hpp"

namespace zt6g {

enum class Compartment : std::uint8_t { Susceptible, Infected, Recovered };

/// S/I/R partition of one community's UEs, indexed 0..population-1.
class CommunityEpidemic {
public:
    explicit CommunityEpidemic(std::uint32_t population = 0) : status_(population, Compartment::Susceptible) {
        susceptible_.reserve(population);
        for (std::uint32_t i = 0; i < population; ++i) {
            susceptible_.push_back(i);
        }
    }

    std::uint32_t population() const { return static_cast<std::uint32_t>(status_.size()); }
    std::uint32_t s() const { return static_cast<std::uint32_t>(susceptible_.size()); }
    std::uint32_t i() const { return static_cast<std::uint32_t>(infected_.size()); }
    std::uint32_t r() const { return recovered_; }

    Compartment status(std::uint32_t ue) const { return status_[ue]; }
    bool infected(std::uint32_t ue) const { return status_[ue] == Compartment::Infected; }

    /// Currently infected UE indices (order is an implementation detail).
    const std::vector<std::uint32_t>& infected_members() const { return infected_; }

    /// Moves `k` uniformly chosen susceptibles to I; returns them.
    std::vector<std::uint32_t> infect_random(std::uint32_t k, Rng& rng) {
        auto picked = take_random(susceptible_, k, rng);
        for (auto ue : picked) {
            status_[ue] = Compartment::Infected;
            infected_.push_back(ue);
        }
        return picked;
    }

    /// Moves `k` uniformly chosen infected UEs to R; returns them.
    std::vector<std::uint32_t> recover_random(std::uint32_t k, Rng& rng) {
        auto picked = take_random(infected_, k, rng);
        for (auto ue : picked) {
            status_[ue] = Compartment::Recovered;
        }
        recovered_ += static_cast<std::uint32_t>(picked.size());
        return picked;
    }

    bool consistent() const { return s() + i() + r() == population(); }

private:
    static std::vector<std::uint32_t> take_random(std::vector<std::uint32_t>& pool, std::uint32_t k, Rng& rng) {
        std::vector<std::uint32_t> picked;
        picked.reserve(k);
        for (std::uint32_t n = 0; n < k; ++n) {
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            const auto j = pick(rng);
            picked.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
        }
        return picked;
    }

    std::vector<Compartment> status_;
    std::vector<std::uint32_t> susceptible_;
    std::vector<std::uint32_t> infected_;
    std::uint32_t recovered_ = 0;
};

/// Changes produced by one step, per community.
struct SirTransitions {
    std::vector<std::vector<std::uint32_t>> infected;
    std::vector<std::vector<std::uint32_t>> recovered;
};

/// Well-mixed discrete-time stochastic SIR, one independent pool per community.
class EpidemicState {
public:
    EpidemicState(const std::vector<std::uint32_t>& populations, double beta, double gamma)
        : beta_(beta), gamma_(gamma) {
        if (!(beta >= 0.0) || !(gamma >= 0.0 && gamma <= 1.0)) {
            throw std::invalid_argument("beta must be >= 0 and gamma in [0,1]");
        }
        for (auto n : populations) {
            communities_.emplace_back(n);
        }
    }

    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    std::size_t size() const { return communities_.size(); }
    const CommunityEpidemic& community(std::size_t c) const { return communities_[c]; }

    std::uint64_t total_infected() const {
        std::uint64_t n = 0;
        for (const auto& c : communities_) {
            n += c.i();
        }
        return n;
    }

    /// Per-susceptible infection probability 1 - (1 - beta/N)^I.
    static double infection_probability(double beta, std::uint32_t population, std::uint32_t infected) {
        if (infected == 0 || population == 0) {
            return 0.0;
        }
        const double per_contact = std::min(1.0, beta / static_cast<double>(population));
        return 1.0 - std::pow(1.0 - per_contact, static_cast<double>(infected));
    }

private:
    friend std::vector<std::vector<std::uint32_t>> seed_infection(EpidemicState&, std::uint32_t, Rng&);
    friend SirTransitions step_sir(EpidemicState&, Rng&);

    double beta_;
    double gamma_;
    std::vector<CommunityEpidemic> communities_;
};

/// Moves exactly `count` uniformly chosen susceptibles to I in every community.
inline std::vector<std::vector<std::uint32_t>> seed_infection(EpidemicState& state, std::uint32_t count, Rng& rng) {
    for (const auto& c : state.communities_) {
        if (count > c.s()) {
            throw InsufficientSusceptibles("cannot seed " + std::to_string(count) + " infections into " +
                                           std::to_string(c.s()) + " susceptibles");
        }
    }
    std::vector<std::vector<std::uint32_t>> seeded;
    for (auto& c : state.communities_) {
        seeded.push_back(c.infect_random(count, rng));
    }
    return seeded;
}

/// One simulated second. Every susceptible is infected independently with the
/// well-mixed probability and every infected UE recovers independently with
/// probability gamma; counts are drawn as binomials over the exchangeable pool.
/// Infection pressure uses the infected count from before the step and never
/// crosses communities.
inline SirTransitions step_sir(EpidemicState& state, Rng& rng) {
    SirTransitions tr;
    for (auto& c : state.communities_) {
        const double p_inf = EpidemicState::infection_probability(state.beta_, c.population(), c.i());
        std::uint32_t new_inf = 0;
        std::uint32_t new_rec = 0;
        if (c.i() > 0) {
            new_inf = std::binomial_distribution<std::uint32_t>(c.s(), p_inf)(rng);
            new_rec = std::binomial_distribution<std::uint32_t>(c.i(), state.gamma_)(rng);
        }
        // Recover from the pre-step infected pool before adding new infections.
        tr.recovered.push_back(c.recover_random(new_rec, rng));
        tr.infected.push_back(c.infect_random(new_inf, rng));
        assert(c.consistent());
    }
    return tr;
}

inline bool is_extinct(const EpidemicState& state) { return state.total_infected() == 0; }

}  // namespace zt6g
