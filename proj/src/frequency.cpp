#include "finmode/frequency.hpp"

#include <ostream>

namespace finmode {

std::string Frequency::to_string() const {
  return "(" + c_[0].to_string() + "," + c_[1].to_string() + "," + c_[2].to_string() + ")";
}

bool lex_positive(const Frequency& n) {
  for (const auto& c : n.components())
    if (!c.is_zero()) return c.sign() > 0;
  return false;
}

std::size_t FrequencyHash::operator()(const Frequency& n) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& c : n.components()) {
    for (std::int64_t v : {c.num(), c.den()}) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const Frequency& n) { return os << n.to_string(); }

}  // namespace finmode
