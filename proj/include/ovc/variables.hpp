#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ovc {

/// Bidirectional map between variable indices (colors) and their names.
///
/// The default table names index 0..25 as `a`..`z` and anything larger as
/// `v<index>`, so uncolored tooling and small examples need no setup.
class VariableTable {
 public:
  VariableTable() = default;
  explicit VariableTable(std::vector<std::string> names);

  /// Index of `name`; throws ParseError when the name is unknown.
  int index(std::string_view name) const;
  std::string name(int index) const;

  /// Number of explicitly registered names (0 for the default table).
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

}  // namespace ovc
