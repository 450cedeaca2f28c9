#include "s25/grid.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

namespace s25 {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

const char* to_string(Precision p) { return p == Precision::Single ? "f32" : "f64"; }

Precision parse_precision(const std::string& s) {
    if (s == "f32" || s == "single" || s == "float") return Precision::Single;
    if (s == "f64" || s == "double") return Precision::Double;
    throw ConfigError("unknown precision '" + s + "' (expected f32 or f64)");
}

namespace {

constexpr std::array<char, 4> kMagic = {'W', 'V', 'F', '1'};

template <class U>
void put(std::ostream& os, U v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

class Reader {
public:
    explicit Reader(std::istream& is) : is_(is) {}

    template <class U>
    U get(const char* what) {
        U v{};
        read_bytes(reinterpret_cast<char*>(&v), sizeof(U), what);
        return v;
    }

    void read_bytes(char* dst, std::size_t n, const char* what) {
        is_.read(dst, std::streamsize(n));
        const auto got = std::size_t(is_.gcount());
        if (got != n)
            throw FormatError(std::string("truncated snapshot while reading ") + what,
                              offset_ + got);
        offset_ += n;
    }

    std::uint64_t offset() const { return offset_; }

private:
    std::istream& is_;
    std::uint64_t offset_ = 0;
};

template <class T>
Grid3<T> read_payload(Reader& rd, Extents e, int pad) {
    Grid3<T> g(e, pad);
    for (int k = 0; k < e.nz; ++k)
        for (int j = 0; j < e.ny; ++j)
            rd.read_bytes(reinterpret_cast<char*>(&g.at(0, j, k)), sizeof(T) * std::size_t(e.nx),
                          "payload");
    return g;
}

}  // namespace

template <class T>
void snapshot_write(const Grid3<T>& g, std::uint64_t step, std::ostream& sink) {
    const auto& e = g.extents();
    sink.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(sink, std::uint32_t(e.nx));
    put<std::uint32_t>(sink, std::uint32_t(e.ny));
    put<std::uint32_t>(sink, std::uint32_t(e.nz));
    put<std::uint8_t>(sink, std::uint8_t(sizeof(T)));
    put<std::uint64_t>(sink, step);
    for (int k = 0; k < e.nz; ++k)
        for (int j = 0; j < e.ny; ++j)
            sink.write(reinterpret_cast<const char*>(&g.at(0, j, k)),
                       std::streamsize(sizeof(T) * std::size_t(e.nx)));
    if (!sink) throw std::runtime_error("snapshot write failed");
}

template void snapshot_write<float>(const Grid3<float>&, std::uint64_t, std::ostream&);
template void snapshot_write<double>(const Grid3<double>&, std::uint64_t, std::ostream&);

Snapshot snapshot_read(std::istream& source, int pad) {
    Reader rd(source);
    std::array<char, 4> magic{};
    rd.read_bytes(magic.data(), magic.size(), "magic");
    if (magic != kMagic) throw FormatError("bad snapshot magic", 0);

    Extents e;
    const auto read_extent = [&](const char* name) {
        const auto at = rd.offset();
        const auto v = rd.get<std::uint32_t>(name);
        if (v == 0 || v > std::uint32_t(std::numeric_limits<int>::max()))
            throw FormatError(std::string("invalid extent ") + name, at);
        return int(v);
    };
    e.nx = read_extent("nx");
    e.ny = read_extent("ny");
    e.nz = read_extent("nz");

    const auto code_at = rd.offset();
    const auto code = rd.get<std::uint8_t>("precision code");
    const auto step = rd.get<std::uint64_t>("step");

    Snapshot snap;
    snap.step = step;
    if (code == 4)
        snap.grid = read_payload<float>(rd, e, pad);
    else if (code == 8)
        snap.grid = read_payload<double>(rd, e, pad);
    else
        throw FormatError("unknown precision code " + std::to_string(int(code)), code_at);
    return snap;
}

}  // namespace s25
