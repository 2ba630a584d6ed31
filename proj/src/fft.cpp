#include "detail/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace glancing::fft {
namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run(std::vector<cd>& a, int rank, const int* dims, int howmany, int dist, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        plan = fftw_plan_many_dft(rank, dims, howmany, p, nullptr, 1, dist, p, nullptr, 1, dist,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fftw: planning failed");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(plan);
}
}  // namespace

void rows(std::vector<cd>& a, int nrows, int n, int sign) {
    if (static_cast<std::size_t>(nrows) * static_cast<std::size_t>(n) != a.size()) throw std::invalid_argument("fft::rows: size mismatch");
    run(a, 1, &n, nrows, n, sign);
}

void two_d(std::vector<cd>& a, int n0, int n1, int sign) {
    if (static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1) != a.size()) throw std::invalid_argument("fft::two_d: size mismatch");
    const int dims[2] = {n0, n1};
    run(a, 2, dims, 1, n0 * n1, sign);
}

}  // namespace glancing::fft
