#include "qmr/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qmr {

static_assert(std::endian::native == std::endian::little,
              "instance files are little-endian; big-endian hosts need byte swaps");

namespace {

constexpr char kMagic[4] = {'Q', 'M', 'R', 'B'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ofstream& out, const void* p, std::size_t n, const std::string& path) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void read_bytes(std::ifstream& in, void* p, std::size_t n, const std::string& path) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n))
    throw std::runtime_error("truncated instance file: " + path);
}

template <typename T>
void write_pod(std::ofstream& out, T v, const std::string& path) {
  write_bytes(out, &v, sizeof(T), path);
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
  T v;
  read_bytes(in, &v, sizeof(T), path);
  return v;
}

}  // namespace

void save_instance(const MeasurementSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  write_bytes(out, kMagic, 4, path);
  write_pod<std::uint32_t>(out, kVersion, path);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(set.spec.kind), path);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(set.truth.domain), path);
  write_pod<std::uint64_t>(out, set.spec.p, path);
  write_pod<std::uint64_t>(out, set.spec.n, path);
  write_pod<std::uint64_t>(out, set.d, path);
  write_pod<double>(out, set.spec.sigma, path);
  write_pod<double>(out, set.spec.noise_sigma, path);
  write_pod<std::uint64_t>(out, set.spec.seed, path);
  write_bytes(out, set.truth.values.data(), set.truth.values.size() * sizeof(double), path);
  write_bytes(out, set.b.data(), set.b.size() * sizeof(double), path);
  write_bytes(out, set.mats.data(), set.mats.size() * sizeof(double), path);
}

MeasurementSet load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);

  char magic[4];
  read_bytes(in, magic, 4, path);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a QMR instance file: " + path);
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kVersion)
    throw std::runtime_error("unsupported instance version " + std::to_string(version) +
                             ": " + path);

  MeasurementSet set;
  const auto kind = read_pod<std::uint32_t>(in, path);
  if (kind > 2) throw std::runtime_error("bad ensemble kind in " + path);
  set.spec.kind = static_cast<EnsembleKind>(kind);
  const auto domain = read_pod<std::uint32_t>(in, path);
  if (domain > 1) throw std::runtime_error("bad domain in " + path);
  set.truth.domain = static_cast<Domain>(domain);
  set.spec.p = read_pod<std::uint64_t>(in, path);
  set.spec.n = read_pod<std::uint64_t>(in, path);
  set.d = read_pod<std::uint64_t>(in, path);
  set.spec.sigma = read_pod<double>(in, path);
  set.spec.noise_sigma = read_pod<double>(in, path);
  set.spec.seed = read_pod<std::uint64_t>(in, path);
  set.spec.validate();
  set.truth.p = set.spec.p;

  const std::size_t wd = set.truth.working_dim();
  if (set.d != wd) throw std::runtime_error("inconsistent dimensions in " + path);
  set.truth.values.resize(wd);
  set.b.resize(set.spec.n);
  set.mats.resize(set.spec.n * set.d * set.d);
  read_bytes(in, set.truth.values.data(), wd * sizeof(double), path);
  read_bytes(in, set.b.data(), set.b.size() * sizeof(double), path);
  read_bytes(in, set.mats.data(), set.mats.size() * sizeof(double), path);
  return set;
}

}  // namespace qmr
