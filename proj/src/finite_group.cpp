#include "imbed/finite_group.hpp"

#include <charconv>
#include <deque>

#include "imbed/error.hpp"

namespace imbed {

namespace {

[[noreturn]] void fail(const std::string& group, const std::string& why) {
  throw Error(ErrorCode::validation, "group '" + group + "': " + why);
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, std::vector<std::vector<int>> table,
                         std::vector<std::string> element_names)
    : name_(std::move(name)), table_(std::move(table)), names_(std::move(element_names)) {
  const int n = order();
  if (n == 0) fail(name_, "empty multiplication table");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table_[a].size()) != n) fail(name_, "table row " + std::to_string(a) + " has wrong width");
    for (int b = 0; b < n; ++b) {
      if (table_[a][b] < 0 || table_[a][b] >= n)
        fail(name_, "entry (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
  }
  for (int a = 0; a < n; ++a) {
    if (table_[0][a] != a || table_[a][0] != a) fail(name_, "element 0 is not an identity at " + std::to_string(a));
  }
  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (int b = 0; b < n; ++b) {
      if (row_seen[table_[a][b]]) fail(name_, "row " + std::to_string(a) + " repeats an entry");
      if (col_seen[table_[b][a]]) fail(name_, "column " + std::to_string(a) + " repeats an entry");
      row_seen[table_[a][b]] = col_seen[table_[b][a]] = true;
      if (table_[a][b] == 0) inverse_[a] = b;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail(name_, "not associative at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + ")");

  if (names_.empty()) {
    names_.push_back("e");
    for (int a = 1; a < n; ++a) names_.push_back(std::to_string(a));
  }
  if (static_cast<int>(names_.size()) != n) fail(name_, "element name count differs from order");

  // Greedy generators: add any element outside the subgroup generated so far.
  std::vector<bool> in_subgroup(n, false);
  in_subgroup[0] = true;
  for (int a = 1; a < n; ++a) {
    if (in_subgroup[a]) continue;
    generators_.push_back(a);
    std::deque<int> queue;
    for (int x = 0; x < n; ++x)
      if (in_subgroup[x]) queue.push_back(x);
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int g : generators_) {
        int y = table_[x][g];
        if (!in_subgroup[y]) {
          in_subgroup[y] = true;
          queue.push_back(y);
        }
      }
    }
  }

  word_length_.assign(n, -1);
  word_length_[0] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int g : generators_) {
      int y = table_[x][g];
      if (word_length_[y] < 0) {
        word_length_[y] = word_length_[x] + 1;
        queue.push_back(y);
      }
    }
  }
}

FiniteGroup FiniteGroup::cyclic(int n, const std::string& symbol, std::string name) {
  if (n < 1) throw Error(ErrorCode::validation, "cyclic group order must be positive");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> names(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    names[a] = a == 0 ? "e" : a == 1 ? symbol : symbol + "^" + std::to_string(a);
  }
  if (name.empty()) name = "Z" + std::to_string(n);
  return FiniteGroup(std::move(name), std::move(table), std::move(names));
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& lhs, const FiniteGroup& rhs) {
  const int n1 = lhs.order(), n2 = rhs.order();
  std::vector<std::vector<int>> table(n1 * n2, std::vector<int>(n1 * n2));
  std::vector<std::string> names(n1 * n2);
  for (int a = 0; a < n1 * n2; ++a) {
    names[a] = a == 0 ? "e" : "(" + lhs.element_name(a / n2) + "," + rhs.element_name(a % n2) + ")";
    for (int b = 0; b < n1 * n2; ++b)
      table[a][b] = lhs.multiply(a / n2, b / n2) * n2 + rhs.multiply(a % n2, b % n2);
  }
  return FiniteGroup(lhs.name() + "x" + rhs.name(), std::move(table), std::move(names));
}

FiniteGroup FiniteGroup::trivial(std::string name) {
  return FiniteGroup(std::move(name), {{0}}, {"e"});
}

std::optional<int> FiniteGroup::find_element(std::string_view text) const {
  for (int a = 0; a < order(); ++a)
    if (names_[a] == text) return a;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size() && contains(value)) return value;
  return std::nullopt;
}

int FiniteGroup::check(int a) const {
  if (!contains(a))
    throw Error(ErrorCode::validation, "element " + std::to_string(a) + " not in group '" + name_ + "'");
  return a;
}

}  // namespace imbed
