#include "swcrack/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "swcrack/error.hpp"

namespace swcrack::png_io {

namespace {

struct FileHandle {
    std::FILE* fp = nullptr;
    ~FileHandle() {
        if (fp) std::fclose(fp);
    }
};

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, &info);
    }
};

void open_for_read(FileHandle& file, const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw FileNotFound("no such file: " + path.string());
    file.fp = std::fopen(path.string().c_str(), "rb");
    if (!file.fp) throw IoError("cannot open for reading: " + path.string());
}

// All png_* row buffers are allocated before setjmp so a longjmp back into
// the frame leaves only fully constructed objects to unwind.
void read_rows(const std::filesystem::path& path, int transforms, PngReader& reader,
               std::vector<std::uint8_t>& raw, std::vector<png_bytep>& row_ptrs,
               int& width, int& height, int& bit_depth, int& color_type, int& channels) {
    FileHandle file;
    open_for_read(file, path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw DecodeError("not a PNG file: " + path.string());

    reader.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!reader.png) throw DecodeError("libpng init failed");
    reader.info = png_create_info_struct(reader.png);
    if (!reader.info) throw DecodeError("libpng init failed");

    if (setjmp(png_jmpbuf(reader.png)))
        throw DecodeError("corrupt PNG: " + path.string());

    png_init_io(reader.png, file.fp);
    png_set_sig_bytes(reader.png, 8);
    png_read_info(reader.png, reader.info);

    width = static_cast<int>(png_get_image_width(reader.png, reader.info));
    height = static_cast<int>(png_get_image_height(reader.png, reader.info));
    if (width <= 0 || height <= 0)
        throw EmptyImage("PNG has a zero dimension: " + path.string());

    if (transforms & PNG_TRANSFORM_EXPAND) png_set_expand(reader.png);
    if (transforms & PNG_TRANSFORM_STRIP_16) png_set_strip_16(reader.png);
    if (transforms & PNG_TRANSFORM_STRIP_ALPHA) png_set_strip_alpha(reader.png);
    (void)png_set_interlace_handling(reader.png);
    png_read_update_info(reader.png, reader.info);

    bit_depth = png_get_bit_depth(reader.png, reader.info);
    color_type = png_get_color_type(reader.png, reader.info);
    channels = png_get_channels(reader.png, reader.info);

    std::size_t rowbytes = png_get_rowbytes(reader.png, reader.info);
    raw.resize(rowbytes * static_cast<std::size_t>(height));
    row_ptrs.resize(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r)
        row_ptrs[static_cast<std::size_t>(r)] = raw.data() + rowbytes * static_cast<std::size_t>(r);

    png_read_image(reader.png, row_ptrs.data());
    png_read_end(reader.png, nullptr);
}

}  // namespace

Gray8Image read_gray8(const std::filesystem::path& path) {
    PngReader reader;
    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    int w = 0, h = 0, depth = 0, color = 0, channels = 0;
    read_rows(path, PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_STRIP_ALPHA,
              reader, raw, rows, w, h, depth, color, channels);

    if (depth != 8 || (channels != 1 && channels != 3))
        throw DecodeError("unsupported PNG layout in " + path.string());

    Gray8Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    if (channels == 1) {
        std::memcpy(img.pixels.data(), raw.data(), img.pixels.size());
    } else {
        // integer luma; the weights sum to 256 so the shift is exact
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            unsigned r = raw[3 * i], g = raw[3 * i + 1], b = raw[3 * i + 2];
            img.pixels[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b) >> 8);
        }
    }
    return img;
}

Gray16Image read_gray16(const std::filesystem::path& path) {
    PngReader reader;
    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    int w = 0, h = 0, depth = 0, color = 0, channels = 0;
    read_rows(path, 0, reader, raw, rows, w, h, depth, color, channels);

    if (depth != 16 || color != PNG_COLOR_TYPE_GRAY || channels != 1)
        throw DecodeError("expected a 16-bit grayscale PNG: " + path.string());

    Gray16Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        // PNG stores 16-bit samples big-endian
        img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
    return img;
}

namespace {

void write_png(const std::filesystem::path& path, int width, int height, int bit_depth,
               int color_type, const std::vector<std::uint8_t>& raw, std::size_t rowbytes) {
    if (width <= 0 || height <= 0) throw EmptyImage("refusing to write a zero-sized PNG");

    FileHandle file;
    file.fp = std::fopen(path.string().c_str(), "wb");
    if (!file.fp) throw IoError("cannot open for writing: " + path.string());

    PngWriter writer;
    writer.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!writer.png) throw IoError("libpng init failed");
    writer.info = png_create_info_struct(writer.png);
    if (!writer.info) throw IoError("libpng init failed");

    std::vector<png_bytep> row_ptrs(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r)
        row_ptrs[static_cast<std::size_t>(r)] =
            const_cast<png_bytep>(raw.data() + rowbytes * static_cast<std::size_t>(r));

    if (setjmp(png_jmpbuf(writer.png)))
        throw IoError("PNG write failed: " + path.string());

    png_init_io(writer.png, file.fp);
    png_set_IHDR(writer.png, writer.info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(writer.png, writer.info);
    png_write_image(writer.png, row_ptrs.data());
    png_write_end(writer.png, nullptr);
}

}  // namespace

void write_gray8(const std::filesystem::path& path, int width, int height,
                 const std::uint8_t* pixels) {
    std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> raw(pixels, pixels + n);
    write_png(path, width, height, 8, PNG_COLOR_TYPE_GRAY, raw, static_cast<std::size_t>(width));
}

void write_gray16(const std::filesystem::path& path, int width, int height,
                  const std::uint16_t* pixels) {
    std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> raw(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        raw[2 * i] = static_cast<std::uint8_t>(pixels[i] >> 8);
        raw[2 * i + 1] = static_cast<std::uint8_t>(pixels[i] & 0xff);
    }
    write_png(path, width, height, 16, PNG_COLOR_TYPE_GRAY, raw,
              2 * static_cast<std::size_t>(width));
}

void write_rgb8(const std::filesystem::path& path, int width, int height,
                const std::uint8_t* pixels) {
    std::size_t n = 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> raw(pixels, pixels + n);
    write_png(path, width, height, 8, PNG_COLOR_TYPE_RGB, raw,
              3 * static_cast<std::size_t>(width));
}

bool has_png_signature(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

bool peek_dimensions(const std::filesystem::path& path, int& width, int& height) {
    // signature (8) + IHDR length/type (8) + big-endian width and height
    std::ifstream in(path, std::ios::binary);
    unsigned char head[24] = {};
    in.read(reinterpret_cast<char*>(head), 24);
    if (in.gcount() != 24 || png_sig_cmp(head, 0, 8) != 0) return false;
    if (std::memcmp(head + 12, "IHDR", 4) != 0) return false;
    width = (head[16] << 24) | (head[17] << 16) | (head[18] << 8) | head[19];
    height = (head[20] << 24) | (head[21] << 16) | (head[22] << 8) | head[23];
    return true;
}

}  // namespace swcrack::png_io
