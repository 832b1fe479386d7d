#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "mort/error.hpp"
#include "mort/grid.hpp"
#include "mort/patches.hpp"

namespace mort {

namespace detail {

inline int pgm_token(std::istream& is, const std::string& path) {
    // skip whitespace and '#' comments
    int c = is.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = is.get();
        } else if (std::isspace(c)) {
            c = is.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        raise(errc::parse_error, path + ": malformed PGM header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = is.get();
    }
    return value;
}

} // namespace detail

/// Read a binary (P5) 8-bit PGM.
inline gray_grid read_pgm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(errc::missing_file, path + ": cannot open");
    char magic[2] = {0, 0};
    is.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        raise(errc::parse_error, path + ": not a binary PGM (P5)");
    const int w = detail::pgm_token(is, path);
    const int h = detail::pgm_token(is, path);
    const int maxval = detail::pgm_token(is, path);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        raise(errc::parse_error, path + ": unsupported PGM geometry or maxval");
    gray_grid g(w, h, 0);
    is.read(reinterpret_cast<char*>(g.data()), static_cast<std::streamsize>(g.size()));
    if (is.gcount() != static_cast<std::streamsize>(g.size()))
        raise(errc::parse_error, path + ": truncated PGM pixel data");
    return g;
}

inline void write_pgm(const std::string& path, const gray_grid& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(errc::io_error, path + ": cannot open for writing");
    os << "P5\n" << g.width() << ' ' << g.height() << "\n255\n";
    os.write(reinterpret_cast<const char*>(g.data()), static_cast<std::streamsize>(g.size()));
    if (!os) raise(errc::io_error, path + ": write failed");
}

/// Read a PNG as 8-bit grayscale (RGB and 16-bit inputs are converted).
inline gray_grid read_png(const std::string& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "rb"), &std::fclose);
    if (!fp) raise(errc::missing_file, path + ": cannot open");
    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        raise(errc::parse_error, path + ": not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(errc::io_error, path + ": libpng init failed");
    }
    gray_grid out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        raise(errc::parse_error, path + ": PNG decode failed");
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if ((png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) != 0)
        png_set_rgb_to_gray(png, PNG_ERROR_ACTION_NONE, -1.0, -1.0);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    out = gray_grid(w, h, 0);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = out.data() + static_cast<size_t>(y) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

/// Load a grayscale image by extension (.pgm or .png).
inline gray_grid read_image(const std::string& path) {
    auto ends_with = [&](const char* suffix) {
        const size_t n = std::strlen(suffix);
        return path.size() >= n &&
               std::equal(path.end() - static_cast<long>(n), path.end(), suffix,
                          [](char a, char b) { return std::tolower(a) == b; });
    };
    if (ends_with(".pgm")) return read_pgm(path);
    if (ends_with(".png")) return read_png(path);
    raise(errc::parse_error, path + ": unsupported image format (expect .pgm or .png)");
}

/// Debug export of a patch label map: pixel value = patch id + 1 (0 is
/// background), 16-bit PGM when ids exceed 254, plus a sidecar text file
/// mapping each id to its kind.
inline void export_label_map(const std::string& pgm_path, const std::string& sidecar_path,
                             const patch_label_map& map) {
    const int maxval = map.patch_count();
    std::ofstream os(pgm_path, std::ios::binary);
    if (!os) raise(errc::io_error, pgm_path + ": cannot open for writing");
    if (maxval <= 255) {
        os << "P5\n" << map.width << ' ' << map.height << "\n255\n";
        for (int y = 0; y < map.height; ++y)
            for (int x = 0; x < map.width; ++x)
                os.put(static_cast<char>(map.labels.at(x, y) + 1));
    } else {
        os << "P5\n" << map.width << ' ' << map.height << "\n65535\n";
        for (int y = 0; y < map.height; ++y)
            for (int x = 0; x < map.width; ++x) {
                const uint16_t v = static_cast<uint16_t>(map.labels.at(x, y) + 1);
                os.put(static_cast<char>(v >> 8));
                os.put(static_cast<char>(v & 0xFF));
            }
    }
    if (!os) raise(errc::io_error, pgm_path + ": write failed");

    std::ofstream sc(sidecar_path);
    if (!sc) raise(errc::io_error, sidecar_path + ": cannot open for writing");
    sc << "# pixel value = patch id + 1; 0 = background\n";
    for (int id = 0; id < map.patch_count(); ++id)
        sc << (id + 1) << '\t'
           << (map.kinds[id] == patch_kind::interior ? "interior" : "complementary") << '\n';
    if (!sc) raise(errc::io_error, sidecar_path + ": write failed");
}

} // namespace mort
