#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "qclab/beltrami.hpp"
#include "qclab/errors.hpp"

// Layout (native endianness, version 1):
//   "QCLABSOL" | u32 version | f64 L | i32 N | f64 bound | i32 symmetry | i32 interpolation
//   | f64 residual | i32 iterations | f64 decay_max | f64 decay_median
//   | u32 history_len | f64[history_len]
//   | u32 disks | (f64 re, f64 im, f64 r)* | u32 squares | (f64 re, f64 im, f64 half)*
//   | c128[N*N] mu | c128[N*N] h | c128[N*N] displacement

namespace qclab {

namespace {

constexpr char kMagic[8] = {'Q', 'C', 'L', 'A', 'B', 'S', 'O', 'L'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigError("truncated solution file");
  return value;
}

void put_field(std::ostream& out, const ComplexField& f) {
  out.write(reinterpret_cast<const char*>(f.samples().data()),
            static_cast<std::streamsize>(f.samples().size() * sizeof(cplx)));
}

ComplexField get_field(std::istream& in, const GridSpec& spec) {
  std::vector<cplx> data(spec.sample_count());
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(cplx)));
  if (!in) throw ConfigError("truncated solution file");
  return ComplexField(spec, std::move(data));
}

}  // namespace

void save_solution(const PrincipalMapSolution& f, std::ostream& out) {
  const GridSpec& spec = f.spec();
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<double>(out, spec.half_width());
  put<std::int32_t>(out, spec.resolution());
  put<double>(out, f.coefficient.bound);
  put<std::int32_t>(out, static_cast<std::int32_t>(f.coefficient.symmetry));
  put<std::int32_t>(out, static_cast<std::int32_t>(f.interpolation));
  put<double>(out, f.residual);
  put<std::int32_t>(out, f.iterations);
  put<double>(out, f.decay_max);
  put<double>(out, f.decay_median);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.residual_history.size()));
  for (double r : f.residual_history) put<double>(out, r);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.coefficient.support.disks().size()));
  for (const Disk& d : f.coefficient.support.disks()) {
    put<double>(out, d.center.real());
    put<double>(out, d.center.imag());
    put<double>(out, d.radius);
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.coefficient.support.squares().size()));
  for (const AxisSquare& s : f.coefficient.support.squares()) {
    put<double>(out, s.center.real());
    put<double>(out, s.center.imag());
    put<double>(out, s.half_side);
  }
  put_field(out, f.coefficient.field);
  put_field(out, f.h_field);
  put_field(out, f.displacement);
  if (!out) throw ConfigError("failed writing solution");
}

PrincipalMapSolution load_solution(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw ConfigError("not a qclab solution file");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw ConfigError("unsupported solution file version " + std::to_string(version));
  const double L = get<double>(in);
  const int N = get<std::int32_t>(in);
  const GridSpec spec(L, N);
  const double bound = get<double>(in);
  const auto symmetry = static_cast<Symmetry>(get<std::int32_t>(in));
  const auto interp = static_cast<Interpolation>(get<std::int32_t>(in));
  const double residual = get<double>(in);
  const int iterations = get<std::int32_t>(in);
  const double decay_max = get<double>(in);
  const double decay_median = get<double>(in);
  std::vector<double> history(get<std::uint32_t>(in));
  for (double& r : history) r = get<double>(in);
  Region support;
  const auto disks = get<std::uint32_t>(in);
  for (std::uint32_t d = 0; d < disks; ++d) {
    const double re = get<double>(in), im = get<double>(in), r = get<double>(in);
    support.add(Disk{{re, im}, r});
  }
  const auto squares = get<std::uint32_t>(in);
  for (std::uint32_t s = 0; s < squares; ++s) {
    const double re = get<double>(in), im = get<double>(in), half = get<double>(in);
    support.add(AxisSquare{{re, im}, half});
  }
  ComplexField mu = get_field(in, spec);
  ComplexField h = get_field(in, spec);
  ComplexField displacement = get_field(in, spec);
  PrincipalMapSolution sol{BeltramiCoefficient{std::move(mu), bound, symmetry, std::move(support)}, std::move(h),
                           std::move(displacement)};
  sol.residual = residual;
  sol.iterations = iterations;
  sol.residual_history = std::move(history);
  sol.decay_max = decay_max;
  sol.decay_median = decay_median;
  sol.interpolation = interp;
  return sol;
}

void save_solution(const PrincipalMapSolution& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  save_solution(f, out);
}

PrincipalMapSolution load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return load_solution(in);
}

}  // namespace qclab
