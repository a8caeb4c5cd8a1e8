#include "ovc/variables.hpp"

#include <algorithm>
#include <charconv>

#include "ovc/errors.hpp"

namespace ovc {

VariableTable::VariableTable(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || n.find_first_of(",|;. []#*") != std::string::npos) {
      throw ParseError("invalid variable name '" + n + "'");
    }
    if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), n) !=
        names_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ParseError("duplicate variable name '" + n + "'");
    }
  }
}

int VariableTable::index(std::string_view name) const {
  if (!names_.empty()) {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw ParseError("unknown variable '" + std::string(name) + "'");
    return static_cast<int>(it - names_.begin());
  }
  if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'z') return name[0] - 'a';
  if (name.size() > 1 && name[0] == 'v') {
    int value = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), value);
    if (ec == std::errc() && ptr == name.data() + name.size() && value >= 26) return value;
  }
  throw ParseError("unknown variable '" + std::string(name) + "'");
}

std::string VariableTable::name(int index) const {
  if (index < 0) throw ParseError("negative variable index");
  if (!names_.empty()) {
    if (static_cast<std::size_t>(index) >= names_.size()) {
      throw ParseError("variable index " + std::to_string(index) + " has no name");
    }
    return names_[static_cast<std::size_t>(index)];
  }
  if (index < 26) return std::string(1, static_cast<char>('a' + index));
  return "v" + std::to_string(index);
}

}  // namespace ovc
