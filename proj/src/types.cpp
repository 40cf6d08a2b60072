#include "phonemv/types.hpp"

#include "phonemv/errors.hpp"

namespace phonemv {

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(const std::string& text) {
  if (text == "train") return Split::kTrain;
  if (text == "dev") return Split::kDev;
  if (text == "test") return Split::kTest;
  throw ValidationError("unknown split '" + text + "'");
}

}  // namespace phonemv
