// Copyright 2026 The UVGPT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "uvgpt/gateway/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <boost/beast/core/detail/base64.hpp>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "uvgpt/compositor/compositor.hpp"

namespace uvgpt {

MediaKind media_kind_from_name(std::string_view filename) {
  std::string ext = std::filesystem::path(std::string(filename)).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".ppm") return MediaKind::Ppm;
  if (ext == ".png") return MediaKind::Png;
  static const char* kVideo[] = {".mp4", ".avi", ".mov", ".mkv", ".webm", ".m4v", ".mpg", ".mpeg"};
  for (const char* v : kVideo) {
    if (ext == v) return MediaKind::Video;
  }
  return MediaKind::Unknown;
}

MediaKind media_kind_from_bytes(std::string_view bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return MediaKind::Ppm;
  if (bytes.size() >= 8 &&
      png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0) {
    return MediaKind::Png;
  }
  return MediaKind::Unknown;
}

RasterImage decode_png(std::string_view bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw RasterError(RasterErrc::UnsupportedFormat, std::string("PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RasterImage out(static_cast<int>(image.width), static_cast<int>(image.height));
  const png_color black{0, 0, 0};
  if (!png_image_finish_read(&image, &black, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw RasterError(RasterErrc::TruncatedData, std::string("PNG: ") + image.message);
  }
  return out;
}

RasterImage decode_image(std::string_view bytes) {
  switch (media_kind_from_bytes(bytes)) {
    case MediaKind::Ppm: return decode_ppm(bytes);
    case MediaKind::Png: return decode_png(bytes);
    default: throw RasterError(RasterErrc::UnsupportedFormat, "not a PPM or PNG image");
  }
}

std::string read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace b64 = boost::beast::detail::base64;

std::string base64_encode(std::string_view bytes) {
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::string base64_decode(std::string_view text) {
  std::string out(b64::decoded_size(text.size()), '\0');
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
  // the decoder stops at the first byte outside the alphabet
  std::size_t consumed = read;
  while (consumed < text.size() && text[consumed] == '=') ++consumed;
  if (consumed != text.size()) throw std::invalid_argument("malformed base64");
  out.resize(written);
  return out;
}

}  // namespace uvgpt
