#pragma once

// Straight-line reimplementation of the per-UE SIR rule, written without the
// library's pools or binomial draws. Used as an independent reference.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

struct SirOutcome {
    long extinction_time = 0;  // steps until no UE is infected
    long final_recovered = 0;
};

// One community of n UEs, i0 initially infected.
inline SirOutcome run_sir(int n, int i0, double beta, double gamma, std::mt19937_64& rng) {
    enum { S, I, R };
    std::vector<int> state(n, S);
    for (int k = 0; k < i0; ++k) {
        state[k] = I;  // UEs are exchangeable, so which ones does not matter
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long t = 0;
    while (true) {
        int infected = 0;
        for (int s : state) {
            infected += s == I;
        }
        if (infected == 0) {
            break;
        }
        const double p_inf = 1.0 - std::pow(1.0 - beta / n, infected);
        std::vector<int> next = state;
        for (int k = 0; k < n; ++k) {
            if (state[k] == S && u(rng) < p_inf) {
                next[k] = I;
            } else if (state[k] == I && u(rng) < gamma) {
                next[k] = R;
            }
        }
        state = next;
        ++t;
    }
    SirOutcome out;
    out.extinction_time = t;
    for (int s : state) {
        out.final_recovered += s == R;
    }
    return out;
}

inline int one_step_new_infections(int s, int i, int n, double beta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = 1.0 - std::pow(1.0 - beta / n, i);
    int fresh = 0;
    for (int k = 0; k < s; ++k) {
        fresh += u(rng) < p;
    }
    return fresh;
}

}  // namespace oracle
