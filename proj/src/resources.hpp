#pragma once

#include <string_view>

// Text files from data/, compiled in by cmake/embed_text.cmake.
namespace kwnet::resources {

extern const std::string_view stopwords_en;
extern const std::string_view words_en;

}  // namespace kwnet::resources
