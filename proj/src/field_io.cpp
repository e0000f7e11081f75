#include "hyperwave/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace hyperwave {

namespace {

constexpr char kMagic[8] = {'H', 'W', 'F', 'I', 'E', 'L', 'D', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 64;

void put_u32(unsigned char* p, std::uint32_t v) {
    p[0] = v & 0xff;
    p[1] = (v >> 8) & 0xff;
    p[2] = (v >> 16) & 0xff;
    p[3] = (v >> 24) & 0xff;
}
std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
           std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
void put_f64(unsigned char* p, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) p[i] = (bits >> (8 * i)) & 0xff;
}
double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void save_field(const std::string& path, const SpaceTimeField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    unsigned char header[kHeaderSize] = {};
    std::memcpy(header, kMagic, 8);
    put_u32(header + 8, kVersion);
    put_u32(header + 12, static_cast<std::uint32_t>(f.d));
    put_u32(header + 16, static_cast<std::uint32_t>(f.n));
    put_u32(header + 20, static_cast<std::uint32_t>(f.m));
    put_f64(header + 24, f.T);
    out.write(reinterpret_cast<const char*>(header), kHeaderSize);

    std::vector<unsigned char> buf(f.data.size() * 8);
    for (std::size_t i = 0; i < f.data.size(); ++i)
        put_f64(buf.data() + 8 * i, f.data[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("short write to '" + path + "'");
}

SpaceTimeField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    unsigned char header[kHeaderSize];
    in.read(reinterpret_cast<char*>(header), kHeaderSize);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderSize))
        throw Error("field file '" + path + "': truncated header");
    if (std::memcmp(header, kMagic, 8) != 0)
        throw Error("field file '" + path + "': magic mismatch");
    if (get_u32(header + 8) != kVersion)
        throw Error("field file '" + path + "': unsupported version " +
                    std::to_string(get_u32(header + 8)));
    SpaceTimeField f;
    f.d = static_cast<int>(get_u32(header + 12));
    f.n = static_cast<int>(get_u32(header + 16));
    f.m = static_cast<int>(get_u32(header + 20));
    f.T = get_f64(header + 24);
    if (f.d < 1 || f.d > kMaxDim || f.n < 1 || f.m < 1)
        throw Error("field file '" + path + "': invalid header dimensions");

    std::size_t count = (f.m + 1) * f.num_points() * f.d;
    std::vector<unsigned char> buf(count * 8);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw Error("field file '" + path + "': truncated payload (expected " +
                    std::to_string(buf.size()) + " bytes)");
    f.data.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        f.data[i] = get_f64(buf.data() + 8 * i);
    return f;
}

SpaceTimeField load_field(const std::string& path, const Grid& expect) {
    SpaceTimeField f = load_field(path);
    auto mismatch = [&](const char* what, double exp, double got) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "field file '%s': %s mismatch (expected %g, got %g)",
                      path.c_str(), what, exp, got);
        throw Error(buf);
    };
    if (f.d != expect.d) mismatch("dimension d", expect.d, f.d);
    if (f.n != expect.n) mismatch("grid size n", expect.n, f.n);
    if (f.m != expect.m) mismatch("step count m", expect.m, f.m);
    if (f.T != expect.T) mismatch("time horizon T", expect.T, f.T);
    return f;
}

void save_field_csv(const std::string& path, const SpaceTimeField& f) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "step";
    for (int a = 0; a < f.d; ++a) out << ",i" << a;
    out << ",component,value\n";
    char line[64];
    for (int k = 0; k <= f.m; ++k)
        for (std::size_t p = 0; p < f.num_points(); ++p)
            for (int c = 0; c < f.d; ++c) {
                out << k;
                std::size_t q = p;
                for (int a = 0; a < f.d; ++a) {
                    out << ',' << q % f.n;
                    q /= f.n;
                }
                std::snprintf(line, sizeof(line), ",%d,%.17g", c,
                              f.at(k, p, c));
                out << line << '\n';
            }
}

}  // namespace hyperwave
