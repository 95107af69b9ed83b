#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "wmlab/error.hpp"

namespace wmlab::fft {

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {
// FFTW planning is not thread safe; execution of distinct plans is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Unnormalized in-place complex DFT over a row-major array of rank 1 or 2.
/// FFTW_ESTIMATE keeps plan selection (and therefore rounding) deterministic.
class Plan {
public:
    Plan(std::span<const std::size_t> shape, Direction dir) : size_(1) {
        require(shape.size() == 1 || shape.size() == 2, ErrorKind::contract,
                "fft::Plan supports rank 1 and 2 only");
        std::vector<int> n;
        for (auto s : shape) {
            n.push_back(static_cast<int>(s));
            size_ *= s;
        }
        buffer_ = fftw_alloc_complex(size_);
        std::lock_guard lock(detail::planner_mutex());
        plan_ = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buffer_, buffer_,
                              static_cast<int>(dir), FFTW_ESTIMATE);
        require(plan_ != nullptr, ErrorKind::numerical, "fftw_plan_dft failed");
    }

    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    ~Plan() {
        std::lock_guard lock(detail::planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(buffer_);
    }

    void execute(std::span<std::complex<double>> data) {
        require(data.size() == size_, ErrorKind::contract, "fft size mismatch");
        auto* raw = reinterpret_cast<std::complex<double>*>(buffer_);
        std::copy(data.begin(), data.end(), raw);
        fftw_execute(plan_);
        std::copy(raw, raw + size_, data.begin());
    }

private:
    std::size_t size_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan plan_ = nullptr;
};

inline void transform(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
                      Direction dir) {
    Plan plan(shape, dir);
    plan.execute(data);
}

}  // namespace wmlab::fft
