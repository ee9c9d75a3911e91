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


#pragma once

#include <string>
#include <string_view>

#include "uvgpt/core/raster.hpp"

namespace uvgpt {

enum class MediaKind { Ppm, Png, Video, Unknown };

/// By file extension, case-insensitive.
MediaKind media_kind_from_name(std::string_view filename);

/// By magic bytes; Video is never returned.
MediaKind media_kind_from_bytes(std::string_view bytes);

/// 8-bit RGB decode through libpng. Alpha is composited onto black and
/// grayscale is expanded. Throws RasterError on corrupt data.
RasterImage decode_png(std::string_view bytes);

/// PPM or PNG by content. Throws RasterError(UnsupportedFormat) otherwise.
RasterImage decode_image(std::string_view bytes);

std::string read_binary_file(const std::string& path);

std::string base64_encode(std::string_view bytes);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view text);

}  // namespace uvgpt
