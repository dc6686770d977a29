#include "polarkit/image_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include <png.h>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

// Next token after whitespace and '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') {
                c = in.get();
            }
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    return token;
}

int parse_pgm_int(std::istream& in, const char* what) {
    const std::string token = next_pgm_token(in);
    try {
        std::size_t pos = 0;
        const int value = std::stoi(token, &pos);
        if (pos != token.size() || value < 0) {
            throw std::invalid_argument(token);
        }
        return value;
    } catch (const std::exception&) {
        throw SchemaError(std::string("pgm: invalid ") + what + " field '" + token + "'");
    }
}

// ---------------------------------------------------------------------------
// libpng plumbing
// ---------------------------------------------------------------------------

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return f;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) {
            info = png_create_info_struct(png);
        }
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    bool ok() const { return png && info; }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) {
            info = png_create_info_struct(png);
        }
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    bool ok() const { return png && info; }
};

void write_png_rows(const std::filesystem::path& path, int width, int height, int bit_depth,
                    int color_type, const std::vector<png_bytep>& rows) {
    FilePtr f = open_file(path, "wb");
    PngWriter w;
    if (!w.ok()) {
        throw IoError("png: writer allocation failed");
    }
    if (setjmp(png_jmpbuf(w.png))) {
        throw IoError("png: failed to write '" + path.string() + "'");
    }
    png_init_io(w.png, f.get());
    // Pinned filter and compression level keep the byte stream canonical:
    // identical pixels give identical files across libpng builds.
    png_set_filter(w.png, 0, PNG_FILTER_NONE);
    png_set_compression_level(w.png, 6);
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    png_write_image(w.png, const_cast<png_bytepp>(rows.data()));
    png_write_end(w.png, nullptr);
}

} // namespace

RawFrame read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    const std::string magic = next_pgm_token(in);
    if (magic != "P5") {
        throw SchemaError("pgm: '" + path.string() + "' is not binary PGM (magic '" + magic + "')");
    }
    RawFrame frame;
    frame.width = parse_pgm_int(in, "width");
    frame.height = parse_pgm_int(in, "height");
    const int maxval = parse_pgm_int(in, "maxval");
    if (maxval < 1 || maxval > 65535) {
        throw SchemaError("pgm: maxval " + std::to_string(maxval) + " out of range");
    }
    frame.max_value = static_cast<std::uint16_t>(maxval);
    // Header ends with exactly one whitespace byte, already consumed by the
    // token reader.
    const std::size_t count =
        static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height);
    frame.data.resize(count);
    if (maxval < 256) {
        std::vector<std::uint8_t> bytes(count);
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw SchemaError("pgm: truncated raster in '" + path.string() + "'");
        }
        for (std::size_t i = 0; i < count; ++i) {
            frame.data[i] = bytes[i];
        }
    } else {
        std::vector<std::uint8_t> bytes(count * 2);
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count * 2));
        if (static_cast<std::size_t>(in.gcount()) != count * 2) {
            throw SchemaError("pgm: truncated raster in '" + path.string() + "'");
        }
        for (std::size_t i = 0; i < count; ++i) {
            frame.data[i] = static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
        }
    }
    return frame;
}

void write_pgm(const RawFrame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "P5\n" << frame.width << ' ' << frame.height << '\n' << frame.max_value << '\n';
    if (frame.max_value < 256) {
        for (std::uint16_t v : frame.data) {
            out.put(static_cast<char>(v & 0xff));
        }
    } else {
        for (std::uint16_t v : frame.data) {
            out.put(static_cast<char>(v >> 8));
            out.put(static_cast<char>(v & 0xff));
        }
    }
    if (!out) {
        throw IoError("pgm: failed to write '" + path.string() + "'");
    }
}

RawFrame read_png_gray(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    PngReader r;
    if (!r.ok()) {
        throw IoError("png: reader allocation failed");
    }
    if (setjmp(png_jmpbuf(r.png))) {
        throw SchemaError("png: failed to decode '" + path.string() + "'");
    }
    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);
    const png_byte color_type = png_get_color_type(r.png, r.info);
    png_byte bit_depth = png_get_bit_depth(r.png, r.info);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        throw SchemaError("png: '" + path.string() + "' is not single-channel grayscale");
    }
    if (bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(r.png);
        bit_depth = 8;
    }
    png_read_update_info(r.png, r.info);

    RawFrame frame;
    frame.width = static_cast<int>(png_get_image_width(r.png, r.info));
    frame.height = static_cast<int>(png_get_image_height(r.png, r.info));
    frame.max_value = bit_depth == 16 ? 65535 : 255;
    const std::size_t count =
        static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height);
    frame.data.resize(count);

    const std::size_t stride = png_get_rowbytes(r.png, r.info);
    std::vector<std::uint8_t> raster(stride * static_cast<std::size_t>(frame.height));
    std::vector<png_bytep> rows(static_cast<std::size_t>(frame.height));
    for (int y = 0; y < frame.height; ++y) {
        rows[static_cast<std::size_t>(y)] = raster.data() + stride * static_cast<std::size_t>(y);
    }
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    for (int y = 0; y < frame.height; ++y) {
        const std::uint8_t* row = rows[static_cast<std::size_t>(y)];
        for (int x = 0; x < frame.width; ++x) {
            if (bit_depth == 16) {
                // PNG streams 16-bit samples big-endian.
                frame.at(x, y) = static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
            } else {
                frame.at(x, y) = row[x];
            }
        }
    }
    return frame;
}

void write_png_gray16(const Plane<std::uint16_t>& plane, const std::filesystem::path& path) {
    const int w = plane.width();
    const int h = plane.height();
    std::vector<std::uint8_t> raster(static_cast<std::size_t>(w) * h * 2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint16_t v = plane.at(x, y);
            const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 2;
            raster[i] = static_cast<std::uint8_t>(v >> 8);
            raster[i + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        rows[static_cast<std::size_t>(y)] =
            raster.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(w) * 2;
    }
    write_png_rows(path, w, h, 16, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png_rgb8(int width, int height, std::span<const std::uint8_t> interleaved,
                    const std::filesystem::path& path) {
    const std::size_t expected =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    if (interleaved.size() != expected) {
        throw SchemaError("png: interleaved buffer size does not match dimensions");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(
            interleaved.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width) * 3);
    }
    write_png_rows(path, width, height, 8, PNG_COLOR_TYPE_RGB, rows);
}

Rgb8Image read_png_rgb8(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    PngReader r;
    if (!r.ok()) {
        throw IoError("png: reader allocation failed");
    }
    if (setjmp(png_jmpbuf(r.png))) {
        throw SchemaError("png: failed to decode '" + path.string() + "'");
    }
    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);
    if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_RGB ||
        png_get_bit_depth(r.png, r.info) != 8) {
        throw SchemaError("png: '" + path.string() + "' is not 8-bit RGB");
    }
    png_read_update_info(r.png, r.info);

    Rgb8Image img;
    img.width = static_cast<int>(png_get_image_width(r.png, r.info));
    img.height = static_cast<int>(png_get_image_height(r.png, r.info));
    img.interleaved.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            img.interleaved.data() +
            static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) * 3;
    }
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

RawFrame read_raw_frame(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm" || ext == ".PGM") {
        return read_pgm(path);
    }
    if (ext == ".png" || ext == ".PNG") {
        return read_png_gray(path);
    }
    throw SchemaError("unsupported raw frame format '" + ext + "' (expected .pgm or .png)");
}

} // namespace polarkit
