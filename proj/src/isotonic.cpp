#include "membrane/isotonic.hpp"

#include <array>

namespace membrane {

void isotonic_project_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    if (n < 2) return;
    // blocks of pooled entries: running mean and length, merged while the
    // previous block mean falls below the new one
    constexpr std::size_t kStack = 8;
    std::array<double, kStack> mean_s;
    std::array<std::size_t, kStack> len_s;
    double* mean = mean_s.data();
    std::size_t* len = len_s.data();
    std::vector<double> mean_h;
    std::vector<std::size_t> len_h;
    if (n > kStack) {
        mean_h.resize(n);
        len_h.resize(n);
        mean = mean_h.data();
        len = len_h.data();
    }
    std::size_t top = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean[top] = v[i];
        len[top] = 1;
        ++top;
        while (top > 1 && mean[top - 2] < mean[top - 1]) {
            const std::size_t l = len[top - 2] + len[top - 1];
            mean[top - 2] =
                (mean[top - 2] * len[top - 2] + mean[top - 1] * len[top - 1]) / l;
            len[top - 2] = l;
            --top;
        }
    }
    std::size_t pos = 0;
    for (std::size_t b = 0; b < top; ++b)
        for (std::size_t j = 0; j < len[b]; ++j) v[pos++] = mean[b];
}

std::vector<double> isotonic_project(std::vector<double> v) {
    isotonic_project_inplace(v);
    return v;
}

}  // namespace membrane
