#pragma once

#include <array>

#include "qmarl/rng.hpp"

namespace qmarl::envs {

// One round of the CHSH game: inputs x, y are i.i.d. uniform bits, the pair
// wins iff a XOR b == x AND y.
struct ChshRound {
    int x = 0, y = 0;
    int a = 0, b = 0;
    int reward = 0;
};

int chsh_step(int x, int y, int a, int b);

std::array<int, 2> chsh_sample_inputs(Rng& rng);

struct ChshClassicalSearch {
    double best_win_rate = 0.0;
    int n_optimal_pairs = 0;           // deterministic pairs attaining the max
    std::array<double, 16> win_rates;  // indexed by (alice_fn * 4 + bob_fn)
};

// Exhaustive search over all 16 deterministic strategy pairs (each agent
// picks one of the 4 functions bit -> bit). The maximum is the classical
// bound 0.75, and grounds every classical-ceiling assertion in the tests.
ChshClassicalSearch chsh_enumerate_deterministic();

double chsh_classical_optimum();  // == chsh_enumerate_deterministic().best_win_rate

}  // namespace qmarl::envs
