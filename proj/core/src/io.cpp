#include "lfhybrid/io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "lfhybrid/kv_file.hpp"

namespace lfhybrid {

namespace {

namespace fs = std::filesystem;

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

std::string view_name(int u, int v) {
  return "view_" + std::to_string(u) + "_" + std::to_string(v) + ".png";
}

}  // namespace

Image load_png(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error("cannot open PNG: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("failed to decode PNG: " + path);
  }
  png_init_io(png, f.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // stored big-endian in the file
  png_read_update_info(png, info);

  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);
  const int channels =
      (color_type == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
  const size_t rowbytes = png_get_rowbytes(png, info);

  std::vector<unsigned char> raw(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = raw.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(channels, static_cast<int>(height), static_cast<int>(width));
  const float scale = bit_depth == 16 ? 1.0f / 65535.0f : 1.0f / 255.0f;
  for (png_uint_32 y = 0; y < height; ++y) {
    if (bit_depth == 16) {
      const uint16_t* src = reinterpret_cast<const uint16_t*>(rows[y]);
      for (png_uint_32 x = 0; x < width; ++x)
        for (int c = 0; c < channels; ++c)
          img.at(c, y, x) = src[x * channels + c] * scale;
    } else {
      const unsigned char* src = rows[y];
      for (png_uint_32 x = 0; x < width; ++x)
        for (int c = 0; c < channels; ++c)
          img.at(c, y, x) = src[x * channels + c] * scale;
    }
  }
  return img;
}

void save_png(const std::string& path, const Image& img) {
  if (img.channels != 1 && img.channels != 3)
    throw std::runtime_error("PNG output supports 1 or 3 channels");
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("cannot write PNG: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed to encode PNG: " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, img.width, img.height, 16,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_swap(png);  // we fill rows little-endian

  std::vector<uint16_t> row(static_cast<size_t>(img.width) * img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        float v = img.at(c, y, x);
        v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
        row[static_cast<size_t>(x) * img.channels + c] =
            static_cast<uint16_t>(v * 65535.0f + 0.5f);
      }
    png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image load_f32(const std::string& path, int height, int width) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open raster: " + path);
  Image img(1, height, width);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size() * sizeof(float)))
    throw std::runtime_error("raster shorter than expected: " + path);
  return img;
}

void save_f32(const std::string& path, const Image& img) {
  if (img.channels != 1) throw std::runtime_error("f32 rasters are single channel");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write raster: " + path);
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(float)));
}

void save_light_field(const std::string& dir, const LightField& lf, int scale) {
  fs::create_directories(dir);
  KvFile manifest;
  manifest.set_int("M", lf.rows);
  manifest.set_int("N", lf.cols);
  manifest.set_int("H", lf.height());
  manifest.set_int("W", lf.width());
  manifest.set_int("C", lf.channels());
  manifest.set_int("scale", scale);
  manifest.save((fs::path(dir) / "manifest.txt").string());
  for (int u = 1; u <= lf.rows; ++u)
    for (int v = 1; v <= lf.cols; ++v)
      save_png((fs::path(dir) / view_name(u, v)).string(), lf.view(u, v));
}

LightField load_light_field(const std::string& dir) {
  KvFile manifest = KvFile::load((fs::path(dir) / "manifest.txt").string());
  const int M = static_cast<int>(manifest.get_int("M"));
  const int N = static_cast<int>(manifest.get_int("N"));
  std::vector<Image> grid;
  grid.reserve(static_cast<size_t>(M) * N);
  for (int u = 1; u <= M; ++u)
    for (int v = 1; v <= N; ++v)
      grid.push_back(load_png((fs::path(dir) / view_name(u, v)).string()));
  return make_light_field(std::move(grid), M, N);
}

void save_hybrid_input(const std::string& dir, const HybridInput& hybrid) {
  fs::create_directories(dir);
  KvFile manifest;
  manifest.set_int("M", hybrid.rows);
  manifest.set_int("N", hybrid.cols);
  manifest.set_int("H", hybrid.lr_height());
  manifest.set_int("W", hybrid.lr_width());
  manifest.set_int("C", hybrid.central_hr.channels);
  manifest.set_int("scale", hybrid.scale);
  manifest.save((fs::path(dir) / "manifest.txt").string());
  const AngularCoord u0 = hybrid.central();
  save_png((fs::path(dir) / view_name(u0.u, u0.v)).string(), hybrid.central_hr);
  const auto coords = side_coords(hybrid.rows, hybrid.cols);
  for (size_t i = 0; i < coords.size(); ++i)
    save_png((fs::path(dir) / view_name(coords[i].u, coords[i].v)).string(),
             hybrid.side_views[i]);
}

HybridInput load_hybrid_input(const std::string& dir) {
  KvFile manifest = KvFile::load((fs::path(dir) / "manifest.txt").string());
  const int M = static_cast<int>(manifest.get_int("M"));
  const int N = static_cast<int>(manifest.get_int("N"));
  const int scale = static_cast<int>(manifest.get_int("scale"));
  const int u0 = (M + 1) / 2, v0 = (N + 1) / 2;
  Image central = load_png((fs::path(dir) / view_name(u0, v0)).string());
  std::vector<Image> sides;
  for (const AngularCoord& a : side_coords(M, N))
    sides.push_back(load_png((fs::path(dir) / view_name(a.u, a.v)).string()));
  return make_hybrid_input(std::move(central), std::move(sides), M, N, scale);
}

void save_disparity_field(const std::string& dir, const DisparityField& field) {
  fs::create_directories(dir);
  const auto coords = side_coords(field.rows, field.cols);
  for (size_t i = 0; i < coords.size(); ++i) {
    const std::string name = "disp_" + std::to_string(coords[i].u) + "_" +
                             std::to_string(coords[i].v) + ".f32";
    save_f32((fs::path(dir) / name).string(), field.maps[i]);
  }
}

}  // namespace lfhybrid
