#include "fitsim/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fitsim::nn {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("checkpoint truncated");
    return v;
}

}  // namespace

void save_checkpoint(const ParamVector& params, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    os.write(kMagic, 4);
    write_raw(os, kVersion);
    write_raw(os, static_cast<std::uint64_t>(params.tensors().size()));
    for (const TensorInfo& t : params.tensors()) {
        write_raw(os, static_cast<std::uint64_t>(t.name.size()));
        os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_raw(os, static_cast<std::uint64_t>(t.rows));
        write_raw(os, static_cast<std::uint64_t>(t.cols));
    }
    os.write(reinterpret_cast<const char*>(params.data()),
             static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

ParamVector load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not a checkpoint file: " + path);
    }
    const auto version = read_raw<std::uint32_t>(is);
    if (version != kVersion) {
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    }
    const auto count = read_raw<std::uint64_t>(is);
    ParamVector params;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto len = read_raw<std::uint64_t>(is);
        std::string name(len, '\0');
        is.read(name.data(), static_cast<std::streamsize>(len));
        const auto rows = read_raw<std::uint64_t>(is);
        const auto cols = read_raw<std::uint64_t>(is);
        if (!is) throw std::runtime_error("checkpoint truncated");
        params.add_tensor(name, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    }
    is.read(reinterpret_cast<char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!is) throw std::runtime_error("checkpoint truncated");
    return params;
}

}  // namespace fitsim::nn
