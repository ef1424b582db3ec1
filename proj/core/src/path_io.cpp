#include "dslt/path_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dslt {

namespace {

constexpr char kMagic[4] = {'F', 'B', 'M', 'P'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated FBMP stream");
  return v;
}

}  // namespace

void write_fbmp(std::ostream& os, const PathBatch& batch) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kFormatVersion);
  put<double>(os, batch.H);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(batch.d));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(batch.n_steps));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(batch.n_paths));
  put<double>(os, batch.dt);
  put<std::uint64_t>(os, batch.seed);
  os.write(reinterpret_cast<const char*>(batch.values.data()),
           static_cast<std::streamsize>(batch.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("failed to write FBMP stream");
}

void write_fbmp(const std::string& path, const PathBatch& batch) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_fbmp(os, batch);
}

PathBatch read_fbmp(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not an FBMP stream (bad magic)");
  const auto version = get<std::uint32_t>(is);
  if (version != kFormatVersion)
    throw std::runtime_error("unsupported FBMP version " + std::to_string(version));

  PathBatch batch;
  batch.H = get<double>(is);
  batch.d = static_cast<int>(get<std::uint32_t>(is));
  batch.n_steps = static_cast<int>(get<std::uint64_t>(is));
  batch.n_paths = static_cast<int>(get<std::uint64_t>(is));
  batch.dt = get<double>(is);
  batch.seed = get<std::uint64_t>(is);
  if (batch.d < 1 || batch.n_steps < 1 || batch.n_paths < 1)
    throw std::runtime_error("corrupt FBMP header");

  const std::size_t count =
      static_cast<std::size_t>(batch.n_paths) * (batch.n_steps + 1) * batch.d;
  batch.values.resize(count);
  is.read(reinterpret_cast<char*>(batch.values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw std::runtime_error("truncated FBMP payload");
  return batch;
}

PathBatch read_fbmp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_fbmp(is);
}

void write_paths_csv(std::ostream& os, const PathBatch& batch) {
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "path_id,t";
  for (int c = 0; c < batch.d; ++c) os << ",x_" << (c + 1);
  os << "\n";
  for (int p = 0; p < batch.n_paths; ++p) {
    for (int node = 0; node <= batch.n_steps; ++node) {
      os << p << "," << node * batch.dt;
      for (int c = 0; c < batch.d; ++c) os << "," << batch.at(p, node, c);
      os << "\n";
    }
  }
}

}  // namespace dslt
