#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "mort/image_io.hpp"
#include "mort/patches.hpp"
#include "test_support.hpp"

using namespace mort;

namespace {

class ImageIoTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() / ("mort_imgio_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::string path(const char* name) const { return (dir_ / name).string(); }
    std::filesystem::path dir_;
};

TEST_F(ImageIoTest, PgmRoundTrip) {
    gray_grid g(7, 5, 0);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x) g.at(x, y) = static_cast<uint8_t>(x * 31 + y * 7);
    const std::string file = path("img.pgm");
    write_pgm(file, g);
    const gray_grid back = read_pgm(file);
    EXPECT_TRUE(g == back);
}

TEST_F(ImageIoTest, PgmHandlesComments) {
    const std::string file = path("comment.pgm");
    std::ofstream os(file, std::ios::binary);
    os << "P5\n# a comment\n2 2\n255\n";
    os.put(10).put(20).put(30).put(40);
    os.close();
    const gray_grid g = read_pgm(file);
    EXPECT_EQ(g.width(), 2);
    EXPECT_EQ(g.at(1, 1), 40);
}

TEST_F(ImageIoTest, PgmRejectsAscii) {
    const std::string file = path("ascii.pgm");
    std::ofstream(file) << "P2\n2 2\n255\n1 2 3 4\n";
    try {
        read_pgm(file);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
    }
}

TEST_F(ImageIoTest, PgmRejectsTruncation) {
    const std::string file = path("short.pgm");
    std::ofstream os(file, std::ios::binary);
    os << "P5\n4 4\n255\n";
    os.put(1).put(2);
    os.close();
    try {
        read_pgm(file);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
    }
}

TEST_F(ImageIoTest, MissingFileReportsPath) {
    try {
        read_pgm(path("ghost.pgm"));
        FAIL() << "expected missing_file";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::missing_file);
        EXPECT_NE(std::string(e.what()).find("ghost.pgm"), std::string::npos);
    }
}

TEST_F(ImageIoTest, PngRoundTripViaLibpng) {
    // write a small grayscale PNG with libpng, read it back
    const std::string file = path("img.png");
    gray_grid g(9, 6, 0);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 9; ++x) g.at(x, y) = static_cast<uint8_t>(17 * x + 3 * y);

    FILE* fp = std::fopen(file.c_str(), "wb");
    ASSERT_NE(fp, nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    ASSERT_EQ(setjmp(png_jmpbuf(png)), 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, 9, 6, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < 6; ++y) png_write_row(png, g.data() + static_cast<size_t>(y) * 9);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);

    const gray_grid back = read_png(file);
    EXPECT_TRUE(g == back);
    const gray_grid via_dispatch = read_image(file);
    EXPECT_TRUE(g == via_dispatch);
}

TEST_F(ImageIoTest, ReadImageRejectsUnknownExtension) {
    const std::string file = path("img.bmp");
    std::ofstream(file) << "BM";
    try {
        read_image(file);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
    }
}

TEST_F(ImageIoTest, BinarizeThreshold) {
    gray_grid g(4, 1, 0);
    g.at(0, 0) = 127;
    g.at(1, 0) = 128;
    g.at(2, 0) = 255;
    g.at(3, 0) = 0;
    const binary_mask m = binarize(g, 128);
    EXPECT_FALSE(m.is_set(0, 0));
    EXPECT_TRUE(m.is_set(1, 0));
    EXPECT_TRUE(m.is_set(2, 0));
    EXPECT_FALSE(m.is_set(3, 0));
    EXPECT_EQ(m.foreground_count, 2);
}

TEST_F(ImageIoTest, LabelMapExportWithSidecar) {
    auto [mask, src] = testsup::make_shape(8, 72, 2);
    const auto labels =
        segment_patches(filled_support(mask), src, {patch_policy_kind::threshold, 128});
    const std::string pgm = path("labels.pgm");
    const std::string sidecar = path("labels.txt");
    export_label_map(pgm, sidecar, labels);

    const gray_grid img = read_pgm(pgm);
    EXPECT_EQ(img.width(), labels.width);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x)
            ASSERT_EQ(img.at(x, y), static_cast<uint8_t>(labels.labels.at(x, y) + 1));

    std::ifstream sc(sidecar);
    std::string line;
    std::getline(sc, line); // comment
    int rows = 0;
    while (std::getline(sc, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, labels.patch_count());
}

} // namespace
