#include "lfsal/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "lfsal/errors.hpp"

namespace lfsal {
namespace {

constexpr char kMagic[6] = {'L', 'F', 'S', 'A', 'L', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
    out.write((const char*)b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
    out.write((const char*)b, 8);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read((char*)b, 4)) throw FormatError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= (std::uint32_t)b[i] << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    if (!in.read((char*)b, 8)) throw FormatError("checkpoint truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= (std::uint64_t)b[i] << (8 * i);
    return v;
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::map<std::string, Tensor>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write checkpoint " + path);
    out.write(kMagic, sizeof(kMagic));
    // std::map iterates sorted by name, so the byte stream is canonical.
    for (const auto& [name, t] : tensors) {
        put_u32(out, (std::uint32_t)name.size());
        out.write(name.data(), (std::streamsize)name.size());
        put_u32(out, (std::uint32_t)t.shape.size());
        for (std::size_t d : t.shape) put_u64(out, d);
        for (double v : t.data) put_f64(out, v);
    }
    if (!out) throw FormatError("write failure on checkpoint " + path);
}

std::map<std::string, Tensor> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open checkpoint " + path);
    char magic[sizeof(kMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw FormatError("bad checkpoint magic in " + path);

    std::map<std::string, Tensor> tensors;
    while (true) {
        const int peek = in.peek();
        if (peek == std::char_traits<char>::eof()) break;
        const std::uint32_t name_len = get_u32(in);
        if (name_len == 0 || name_len > 4096) throw FormatError("implausible tensor name length");
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) throw FormatError("checkpoint truncated");
        const std::uint32_t ndim = get_u32(in);
        if (ndim == 0 || ndim > 8) throw FormatError("implausible tensor rank");
        std::vector<std::size_t> shape(ndim);
        for (auto& d : shape) d = (std::size_t)get_u64(in);
        Tensor t(shape);
        for (double& v : t.data) v = get_f64(in);
        if (!tensors.emplace(std::move(name), std::move(t)).second)
            throw FormatError("duplicate tensor name in checkpoint");
    }
    return tensors;
}

}  // namespace lfsal
