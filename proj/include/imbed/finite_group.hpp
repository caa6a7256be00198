#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imbed {

// A finite group given by its multiplication table. Element 0 is the identity.
// Used both as a vertex group of a graph product and as the source/target of a
// finite SMI cocycle system.
class FiniteGroup {
 public:
  // Validates closure, identity row/column, the latin-square property and
  // associativity. Throws Error(validation) naming the first violation.
  FiniteGroup(std::string name, std::vector<std::vector<int>> table,
              std::vector<std::string> element_names = {});

  // Z/n with elements e, t, t^2, ..., t^(n-1) for symbol "t".
  static FiniteGroup cyclic(int n, const std::string& symbol = "t", std::string name = {});
  // Element (a, b) has index a * |rhs| + b.
  static FiniteGroup direct_product(const FiniteGroup& lhs, const FiniteGroup& rhs);
  static FiniteGroup trivial(std::string name = "1");

  const std::string& name() const noexcept { return name_; }
  int order() const noexcept { return static_cast<int>(table_.size()); }
  int multiply(int a, int b) const { return table_[check(a)][check(b)]; }
  int inverse(int a) const { return inverse_[check(a)]; }
  bool commute(int a, int b) const { return multiply(a, b) == multiply(b, a); }
  bool contains(int a) const noexcept { return a >= 0 && a < order(); }

  const std::string& element_name(int a) const { return names_[check(a)]; }
  const std::vector<std::string>& element_names() const noexcept { return names_; }
  // Accepts an element name or a decimal index.
  std::optional<int> find_element(std::string_view text) const;

  // A small generating set chosen greedily in index order.
  const std::vector<int>& generators() const noexcept { return generators_; }
  // Word length over generators() (right multiplication), by breadth-first search.
  int word_length(int a) const { return word_length_[check(a)]; }

  const std::vector<std::vector<int>>& table() const noexcept { return table_; }
  bool same_table(const FiniteGroup& other) const noexcept { return table_ == other.table_; }

 private:
  int check(int a) const;

  std::string name_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::string> names_;
  std::vector<int> generators_;
  std::vector<int> word_length_;
};

}  // namespace imbed
