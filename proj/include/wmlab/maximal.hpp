#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <span>
#include <vector>

#include "wmlab/error.hpp"
#include "wmlab/grid.hpp"

namespace wmlab {

/// Cubes used for the maximal sup: unions of whole grid cells, side
/// 2^k cells (dyadic) or any number of cells (all), every position inside
/// the box.
enum class WindowFamily { dyadic, all };

namespace detail {

inline std::vector<std::size_t> window_lengths(std::size_t M, WindowFamily fam) {
    std::vector<std::size_t> L;
    if (fam == WindowFamily::all) {
        for (std::size_t l = 1; l <= M; ++l) L.push_back(l);
    } else {
        for (std::size_t l = 1; l <= M; l *= 2) L.push_back(l);
    }
    return L;
}

/// out[i] = max(out[i], max_{s in [i-len+1, i], 0 <= s <= M-len} v[s]).
inline void sliding_max_into(std::span<const double> v, std::size_t len, std::span<double> out) {
    const std::size_t M = out.size();
    const std::size_t S = M - len + 1;  // number of window starts
    std::deque<std::size_t> dq;
    std::size_t next = 0;
    for (std::size_t i = 0; i < M; ++i) {
        while (next < S && next <= i) {
            while (!dq.empty() && v[dq.back()] <= v[next]) dq.pop_back();
            dq.push_back(next++);
        }
        while (!dq.empty() && dq.front() + len <= i) dq.pop_front();
        if (!dq.empty()) out[i] = std::max(out[i], v[dq.front()]);
    }
}

/// Window averages of |f| for all starts, 1-D or square 2-D windows.
class WindowAverager {
public:
    explicit WindowAverager(const SampledFunction& f) : dim_(f.spec().dim()), M_(f.spec().points_per_axis()) {
        require(f.side() == Side::physical, ErrorKind::contract, "maximal operators act on physical-side functions");
        const std::size_t P = M_ + 1;
        raw_.resize(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) raw_[i] = std::abs(f[i]);
        prefix_.assign(dim_ == 1 ? P : P * P, 0.0);
        if (dim_ == 1) {
            for (std::size_t i = 0; i < M_; ++i) prefix_[i + 1] = prefix_[i] + std::abs(f[i]);
        } else {
            for (std::size_t i = 0; i < M_; ++i)
                for (std::size_t j = 0; j < M_; ++j)
                    prefix_[(i + 1) * P + j + 1] = std::abs(f[i * M_ + j]) + prefix_[i * P + j + 1] +
                                                   prefix_[(i + 1) * P + j] - prefix_[i * P + j];
        }
    }

    double average(std::size_t s0, std::size_t s1, std::size_t len) const {
        if (len == 1) return raw_[dim_ == 1 ? s0 : s0 * M_ + s1];
        if (dim_ == 1) return (prefix_[s0 + len] - prefix_[s0]) / static_cast<double>(len);
        const std::size_t P = M_ + 1;
        const double sum = prefix_[(s0 + len) * P + s1 + len] - prefix_[s0 * P + s1 + len] -
                           prefix_[(s0 + len) * P + s1] + prefix_[s0 * P + s1];
        return sum / static_cast<double>(len * len);
    }

private:
    int dim_;
    std::size_t M_;
    std::vector<double> raw_;
    std::vector<double> prefix_;
};

/// out = max over windows containing each node of prod_k avg_k.
inline std::vector<double> maximal_sweep(std::span<const SampledFunction> f, WindowFamily fam) {
    require(!f.empty(), ErrorKind::contract, "maximal operator needs at least one input");
    const auto& spec = f[0].spec();
    for (const auto& g : f) require(g.spec() == spec, ErrorKind::contract, "maximal operator: grid mismatch");
    const std::size_t M = spec.points_per_axis();
    std::vector<WindowAverager> avg;
    for (const auto& g : f) avg.emplace_back(g);
    std::vector<double> out(spec.total(), 0.0);
    for (std::size_t len : window_lengths(M, fam)) {
        const std::size_t S = M - len + 1;
        if (spec.dim() == 1) {
            std::vector<double> v(S);
            for (std::size_t s = 0; s < S; ++s) {
                double p = 1.0;
                for (const auto& a : avg) p *= a.average(s, 0, len);
                v[s] = p;
            }
            sliding_max_into(v, len, out);
            continue;
        }
        // separable: max over starts along axis 1, then axis 0
        std::vector<double> rows(S * M, 0.0);
        std::vector<double> v(S);
        for (std::size_t s0 = 0; s0 < S; ++s0) {
            for (std::size_t s1 = 0; s1 < S; ++s1) {
                double p = 1.0;
                for (const auto& a : avg) p *= a.average(s0, s1, len);
                v[s1] = p;
            }
            sliding_max_into(v, len, std::span<double>(rows.data() + s0 * M, M));
        }
        std::vector<double> col(S), colmax(M);
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t s0 = 0; s0 < S; ++s0) col[s0] = rows[s0 * M + j];
            std::fill(colmax.begin(), colmax.end(), 0.0);
            sliding_max_into(col, len, colmax);
            for (std::size_t i = 0; i < M; ++i) out[i * M + j] = std::max(out[i * M + j], colmax[i]);
        }
    }
    return out;
}

inline SampledFunction as_function(const GridSpec& spec, const std::vector<double>& v) {
    std::vector<cplx> z(v.begin(), v.end());
    return SampledFunction(spec, Side::physical, std::move(z));
}

}  // namespace detail

/// Mf(x) = sup over family windows containing x of the average of |f|.
inline SampledFunction hl_maximal(const SampledFunction& f, WindowFamily fam = WindowFamily::dyadic) {
    const SampledFunction in[] = {f};
    return detail::as_function(f.spec(), detail::maximal_sweep(in, fam));
}

/// sup over windows containing x of prod_k avg |f_k|.
inline SampledFunction multilinear_maximal(std::span<const SampledFunction> f, WindowFamily fam = WindowFamily::dyadic) {
    return detail::as_function(f[0].spec(), detail::maximal_sweep(f, fam));
}

/// The same sup at one node by enumerating every window that contains it.
inline double multilinear_maximal_at(std::span<const SampledFunction> f, std::size_t idx,
                                     WindowFamily fam = WindowFamily::dyadic) {
    const auto& spec = f[0].spec();
    for (const auto& g : f) require(g.spec() == spec, ErrorKind::contract, "maximal operator: grid mismatch");
    const std::size_t M = spec.points_per_axis();
    const auto ax = spec.axis_index(idx);
    double best = 0.0;
    for (std::size_t len : detail::window_lengths(M, fam)) {
        auto starts = [&](std::size_t i) {
            const std::size_t lo = i + 1 >= len ? i + 1 - len : 0;
            const std::size_t hi = std::min(i, M - len);
            return std::pair{lo, hi};
        };
        const auto [a0, b0] = starts(ax[0]);
        const auto [a1, b1] = spec.dim() == 2 ? starts(ax[1]) : std::pair<std::size_t, std::size_t>{0, 0};
        for (std::size_t s0 = a0; s0 <= b0; ++s0)
            for (std::size_t s1 = a1; s1 <= b1; ++s1) {
                double p = 1.0;
                for (const auto& g : f) {
                    double sum = 0.0;
                    for (std::size_t i = s0; i < s0 + len; ++i) {
                        if (spec.dim() == 1) {
                            sum += std::abs(g[i]);
                            continue;
                        }
                        for (std::size_t j = s1; j < s1 + len; ++j) sum += std::abs(g[i * M + j]);
                    }
                    p *= sum / std::pow(static_cast<double>(len), spec.dim());
                }
                best = std::max(best, p);
            }
    }
    return best;
}

}  // namespace wmlab
