#include "mcbench/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace mcbench {

namespace {

struct FileHandle {
    FILE* f = nullptr;
    explicit FileHandle(const std::filesystem::path& path, const char* mode)
        : f(std::fopen(path.string().c_str(), mode)) {}
    ~FileHandle() {
        if (f) std::fclose(f);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

// All mutable read/write state lives on the heap so it stays valid across
// libpng/libjpeg longjmp error returns.
struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

TextureImage load_png(FILE* f, const std::filesystem::path& path) {
    auto ctx = std::make_unique<PngReader>();
    ctx->png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx->png) throw std::runtime_error("libpng initialization failed");
    ctx->info = png_create_info_struct(ctx->png);
    if (!ctx->info) throw std::runtime_error("libpng initialization failed");

    if (setjmp(png_jmpbuf(ctx->png)))
        throw std::runtime_error("corrupt PNG file: " + path.string());

    png_init_io(ctx->png, f);
    png_read_info(ctx->png, ctx->info);

    const png_uint_32 width = png_get_image_width(ctx->png, ctx->info);
    const png_uint_32 height = png_get_image_height(ctx->png, ctx->info);
    const int color_type = png_get_color_type(ctx->png, ctx->info);
    const int bit_depth = png_get_bit_depth(ctx->png, ctx->info);

    // Normalize every variant to 8-bit RGB.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx->png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx->png);
    if (png_get_valid(ctx->png, ctx->info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(ctx->png);
    if (bit_depth == 16) png_set_strip_16(ctx->png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(ctx->png);
    png_set_strip_alpha(ctx->png);
    png_read_update_info(ctx->png, ctx->info);

    const std::size_t rowbytes = png_get_rowbytes(ctx->png, ctx->info);
    if (rowbytes != std::size_t(3) * width)
        throw std::runtime_error("unexpected PNG channel layout: " + path.string());

    ctx->pixels.resize(rowbytes * height);
    ctx->rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r)
        ctx->rows[r] = ctx->pixels.data() + r * rowbytes;
    png_read_image(ctx->png, ctx->rows.data());
    png_read_end(ctx->png, nullptr);

    TextureImage image;
    image.width = static_cast<int>(width);
    image.height = static_cast<int>(height);
    image.data.resize(std::size_t(3) * width * height);
    for (png_uint_32 r = 0; r < height; ++r) {
        // libpng rows are top-down; row 0 of the texture is the bottom.
        const unsigned char* src = ctx->rows[height - 1 - r];
        float* dst = image.data.data() + std::size_t(3) * width * r;
        for (std::size_t i = 0; i < rowbytes; ++i) dst[i] = src[i] / 255.0f;
    }
    return image;
}

struct JpegError {
    jpeg_error_mgr mgr;
    std::jmp_buf jb;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    std::longjmp(reinterpret_cast<JpegError*>(cinfo->err)->jb, 1);
}

struct JpegReader {
    jpeg_decompress_struct cinfo;
    JpegError err;
    bool created = false;
    std::vector<unsigned char> pixels;
    ~JpegReader() {
        if (created) jpeg_destroy_decompress(&cinfo);
    }
};

TextureImage load_jpeg(FILE* f, const std::filesystem::path& path) {
    auto ctx = std::make_unique<JpegReader>();
    ctx->cinfo.err = jpeg_std_error(&ctx->err.mgr);
    ctx->err.mgr.error_exit = jpeg_error_exit;

    if (setjmp(ctx->err.jb))
        throw std::runtime_error("corrupt JPEG file: " + path.string());

    jpeg_create_decompress(&ctx->cinfo);
    ctx->created = true;
    jpeg_stdio_src(&ctx->cinfo, f);
    jpeg_read_header(&ctx->cinfo, TRUE);
    ctx->cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&ctx->cinfo);

    const int width = ctx->cinfo.output_width;
    const int height = ctx->cinfo.output_height;
    const std::size_t rowbytes = std::size_t(3) * width;
    ctx->pixels.resize(rowbytes * height);
    while (ctx->cinfo.output_scanline < ctx->cinfo.output_height) {
        unsigned char* row = ctx->pixels.data() + rowbytes * ctx->cinfo.output_scanline;
        jpeg_read_scanlines(&ctx->cinfo, &row, 1);
    }
    jpeg_finish_decompress(&ctx->cinfo);
    if (ctx->err.mgr.num_warnings > 0)
        throw std::runtime_error("corrupt JPEG file: " + path.string());

    TextureImage image;
    image.width = width;
    image.height = height;
    image.data.resize(rowbytes * height);
    for (int r = 0; r < height; ++r) {
        const unsigned char* src = ctx->pixels.data() + rowbytes * (height - 1 - r);
        float* dst = image.data.data() + rowbytes * r;
        for (std::size_t i = 0; i < rowbytes; ++i) dst[i] = src[i] / 255.0f;
    }
    return image;
}

}  // namespace

TextureImage load_texture(const std::filesystem::path& path) {
    FileHandle file(path, "rb");
    if (!file.f) throw std::runtime_error("cannot open image file: " + path.string());

    unsigned char magic[3] = {0, 0, 0};
    if (std::fread(magic, 1, 3, file.f) != 3)
        throw std::runtime_error("corrupt image file: " + path.string());
    std::rewind(file.f);

    if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N')
        return load_png(file.f, path);
    if (magic[0] == 0xff && magic[1] == 0xd8 && magic[2] == 0xff)
        return load_jpeg(file.f, path);
    throw std::runtime_error("unsupported image format (need PNG or JPEG): " +
                             path.string());
}

void save_texture_png(const TextureImage& image, const std::filesystem::path& path) {
    if (image.width < 1 || image.height < 1)
        throw std::runtime_error("cannot save empty texture: " + path.string());
    FileHandle file(path, "wb");
    if (!file.f) throw std::runtime_error("cannot create image file: " + path.string());

    auto ctx = std::make_unique<PngWriter>();
    ctx->png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx->png) throw std::runtime_error("libpng initialization failed");
    ctx->info = png_create_info_struct(ctx->png);
    if (!ctx->info) throw std::runtime_error("libpng initialization failed");

    const std::size_t rowbytes = std::size_t(3) * image.width;
    ctx->pixels.resize(rowbytes * image.height);
    ctx->rows.resize(image.height);
    for (int r = 0; r < image.height; ++r) {
        // Texture rows are bottom-up; PNG rows are top-down.
        const float* src = image.data.data() + rowbytes * (image.height - 1 - r);
        unsigned char* dst = ctx->pixels.data() + rowbytes * r;
        ctx->rows[r] = dst;
        for (std::size_t i = 0; i < rowbytes; ++i) {
            float v = src[i] < 0.0f ? 0.0f : (src[i] > 1.0f ? 1.0f : src[i]);
            dst[i] = static_cast<unsigned char>(v * 255.0f + 0.5f);
        }
    }

    if (setjmp(png_jmpbuf(ctx->png)))
        throw std::runtime_error("PNG write failed: " + path.string());
    png_init_io(ctx->png, file.f);
    png_set_IHDR(ctx->png, ctx->info, image.width, image.height, 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx->png, ctx->info);
    png_write_image(ctx->png, ctx->rows.data());
    png_write_end(ctx->png, nullptr);
}

}  // namespace mcbench
