#include "qclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "qclab/errors.hpp"

namespace qclab::fft {

namespace {

// fftw's planner is not thread safe; execution with new-array execute is.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex plan_mutex;

PlanPair plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
  if (!p.forward || !p.backward) throw ConfigError("fftw could not plan a " + std::to_string(n) + "^2 transform");
  cache.emplace(n, p);
  return p;
}

void check(std::span<std::complex<double>> data, int n) {
  if (n <= 0 || data.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw ConfigError("fft buffer does not hold n^2 samples");
}

}  // namespace

void forward(std::span<std::complex<double>> data, int n) {
  check(data, n);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(n).forward, buf, buf);
}

void inverse(std::span<std::complex<double>> data, int n) {
  check(data, n);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(n).backward, buf, buf);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (auto& v : data) v *= scale;
}

}  // namespace qclab::fft
