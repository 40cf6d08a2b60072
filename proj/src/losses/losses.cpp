#include "phonemv/losses/losses.hpp"

namespace phonemv::losses {

Objective parse_objective(const std::string& text) {
  if (text == "obj0") return Objective::kObj0;
  if (text == "obj1") return Objective::kObj1;
  if (text == "both") return Objective::kBoth;
  throw ValidationError("unknown objective '" + text +
                        "' (expected obj0, obj1 or both)");
}

const char* to_string(Objective objective) {
  switch (objective) {
    case Objective::kObj0:
      return "obj0";
    case Objective::kObj1:
      return "obj1";
    case Objective::kBoth:
      return "both";
  }
  return "both";
}

}  // namespace phonemv::losses
