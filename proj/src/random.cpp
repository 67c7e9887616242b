#include "ifb/random.hpp"

#include <cmath>

namespace ifb {

std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::initializer_list<std::uint64_t> indices) {
    std::uint64_t state = mix64(base_seed);
    std::uint64_t position = 0;
    for (std::uint64_t index : indices) {
        ++position;
        state = mix64(state ^ mix64(index + position * 0x9e3779b97f4a7c15ULL));
    }
    return state;
}

double GaussianStream::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, w, s;
    do {
        u = 2.0 * uniform() - 1.0;
        w = 2.0 * uniform() - 1.0;
        s = u * u + w * w;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = w * scale;
    has_spare_ = true;
    return u * scale;
}

}  // namespace ifb
