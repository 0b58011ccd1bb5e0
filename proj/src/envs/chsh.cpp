#include "qmarl/envs/chsh.hpp"

#include <stdexcept>

namespace qmarl::envs {

int chsh_step(int x, int y, int a, int b) {
    if ((x | y | a | b) & ~1) {
        throw std::invalid_argument("chsh_step: arguments must be bits");
    }
    return ((a ^ b) == (x & y)) ? 1 : 0;
}

std::array<int, 2> chsh_sample_inputs(Rng& rng) {
    return {rng.uniform_int(2), rng.uniform_int(2)};
}

ChshClassicalSearch chsh_enumerate_deterministic() {
    // the 4 functions bit -> bit: constant 0, constant 1, identity, negation
    auto apply_fn = [](int fn, int bit) {
        switch (fn) {
            case 0: return 0;
            case 1: return 1;
            case 2: return bit;
            default: return 1 - bit;
        }
    };
    ChshClassicalSearch result;
    for (int fa = 0; fa < 4; ++fa) {
        for (int fb = 0; fb < 4; ++fb) {
            int wins = 0;
            for (int x = 0; x < 2; ++x) {
                for (int y = 0; y < 2; ++y) {
                    wins += chsh_step(x, y, apply_fn(fa, x), apply_fn(fb, y));
                }
            }
            result.win_rates[fa * 4 + fb] = wins / 4.0;
        }
    }
    for (double w : result.win_rates) {
        if (w > result.best_win_rate) result.best_win_rate = w;
    }
    for (double w : result.win_rates) {
        if (w == result.best_win_rate) result.n_optimal_pairs += 1;
    }
    return result;
}

double chsh_classical_optimum() {
    return chsh_enumerate_deterministic().best_win_rate;
}

}  // namespace qmarl::envs
