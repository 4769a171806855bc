#pragma once

// shared helpers for the test suites: seeded random games and effort profiles

#include <random>

#include "netcontest/netcontest.hpp"

namespace nctest {

using namespace netcontest;

struct RandomGameOptions {
    int min_m = 2;
    int max_m = 6;
    bool gamma_one_only = false;
    double density = 0.35;
    double max_weight = 1.4;
};

inline ContestGame random_game(std::mt19937& rng, RandomGameOptions opt = {}) {
    std::uniform_int_distribution<int> m_dist(opt.min_m, opt.max_m);
    const int m = m_dist(rng);

    double gamma = 1.0;
    if (!opt.gamma_one_only) {
        const double choices[3] = {0.5, 0.8, 1.0};
        gamma = choices[std::uniform_int_distribution<int>(0, 2)(rng)];
    }

    std::uniform_real_distribution<double> cost_dist(0.5, 2.5);
    std::uniform_real_distribution<double> value_dist(0.5, 3.0);
    std::uniform_real_distribution<double> weight_dist(0.05, opt.max_weight);
    std::bernoulli_distribution edge(opt.density);

    Vec values(m);
    for (int k = 0; k < m; ++k) values[k] = value_dist(rng);

    auto random_rho = [&] {
        Mat rho = Mat::Zero(m, m);
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l)
                if (k != l && edge(rng)) rho(k, l) = weight_dist(rng);
        return rho;
    };

    return make_game(gamma, cost_dist(rng), cost_dist(rng), values, random_rho(), random_rho());
}

inline EffortProfile random_profile(std::mt19937& rng, int m, double lo = 0.05, double hi = 1.5) {
    std::uniform_real_distribution<double> e_dist(lo, hi);
    EffortProfile e{Vec(m), Vec(m)};
    for (int k = 0; k < m; ++k) {
        e.e1[k] = e_dist(rng);
        e.e2[k] = e_dist(rng);
    }
    return e;
}

}  // namespace nctest
