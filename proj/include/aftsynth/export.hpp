#pragma once

#include "aftsynth/translation.hpp"

#include <string>

namespace aftsynth {

/// The network as an IMITATOR 2.x model with an EF property on rootTA success.
std::string to_imitator(const TranslationOutput& model, const std::string& source_name = "");

}  // namespace aftsynth
