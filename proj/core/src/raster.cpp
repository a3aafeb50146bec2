#include "swcrack/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "swcrack/error.hpp"
#include "swcrack/png_io.hpp"

namespace swcrack {

namespace {

void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) throw EmptyImage("raster dimensions must be positive");
}

constexpr char kPmapMagic[4] = {'P', 'M', 'A', 'P'};

std::uint32_t read_u32_le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

float float_from_le(const std::uint8_t* p) {
    std::uint32_t bits = read_u32_le(p);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

void write_float_le(std::ostream& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    write_u32_le(out, bits);
}

}  // namespace

BinaryMask::BinaryMask(int w, int h, std::uint8_t fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t BinaryMask::crack_count() const {
    return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t(1)));
}

ProbabilityMap::ProbabilityMap(int w, int h, float fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

BinaryMask load_mask(const std::filesystem::path& path, int binarize_cutoff) {
    png_io::Gray8Image img = png_io::read_gray8(path);
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        mask.data[i] = img.pixels[i] > binarize_cutoff ? 1 : 0;
    return mask;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    check_dims(mask.width, mask.height);
    std::vector<std::uint8_t> gray(mask.data.size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.data[i] ? 255 : 0;
    png_io::write_gray8(path, mask.width, mask.height, gray.data());
}

namespace {

ProbabilityMap load_probmap_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());

    std::uint8_t header[12];
    in.read(reinterpret_cast<char*>(header), 12);
    if (in.gcount() != 12 || std::memcmp(header, kPmapMagic, 4) != 0)
        throw DecodeError("bad PMAP header: " + path.string());

    std::uint32_t w = read_u32_le(header + 4);
    std::uint32_t h = read_u32_le(header + 8);
    if (w == 0 || h == 0) throw EmptyImage("PMAP has a zero dimension: " + path.string());
    if (static_cast<std::uint64_t>(w) * h > (1u << 30))
        throw DecodeError("implausible PMAP dimensions: " + path.string());

    std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<std::uint8_t> payload(4 * n);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size())
        throw DecodeError("truncated PMAP payload: " + path.string());

    ProbabilityMap map(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < n; ++i) {
        float p = float_from_le(payload.data() + 4 * i);
        if (!(p >= 0.0f && p <= 1.0f))  // also rejects NaN
            throw ValueOutOfRange("probability outside [0,1] at pixel " + std::to_string(i) +
                                  " in " + path.string());
        map.data[i] = p;
    }
    return map;
}

ProbabilityMap load_probmap_png16(const std::filesystem::path& path) {
    png_io::Gray16Image img = png_io::read_gray16(path);
    ProbabilityMap map(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        map.data[i] = static_cast<float>(img.pixels[i] / 65535.0);
    return map;
}

}  // namespace

ProbabilityMap load_probmap(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw FileNotFound("no such file: " + path.string());

    std::ifstream probe(path, std::ios::binary);
    char sig[4] = {};
    probe.read(sig, 4);
    if (probe.gcount() == 4 && std::memcmp(sig, kPmapMagic, 4) == 0)
        return load_probmap_raw(path);
    if (png_io::has_png_signature(path)) return load_probmap_png16(path);
    throw DecodeError("neither PMAP nor PNG: " + path.string());
}

void save_probmap(const ProbabilityMap& map, const std::filesystem::path& path,
                  ProbmapFormat format) {
    check_dims(map.width, map.height);
    if (format == ProbmapFormat::raw) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + path.string());
        out.write(kPmapMagic, 4);
        write_u32_le(out, static_cast<std::uint32_t>(map.width));
        write_u32_le(out, static_cast<std::uint32_t>(map.height));
        for (float p : map.data) write_float_le(out, p);
        if (!out) throw IoError("write failed: " + path.string());
    } else {
        std::vector<std::uint16_t> gray(map.data.size());
        for (std::size_t i = 0; i < gray.size(); ++i) {
            long v = std::lround(static_cast<double>(map.data[i]) * 65535.0);
            gray[i] = static_cast<std::uint16_t>(std::clamp(v, 0l, 65535l));
        }
        png_io::write_gray16(path, map.width, map.height, gray.data());
    }
}

}  // namespace swcrack
