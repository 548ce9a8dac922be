#include "qpack/factor_array.hpp"

#include "qpack/error.hpp"

namespace qpack {

FactorArray::FactorArray(std::size_t t, std::uint32_t modulus)
    : t_(t), m_(modulus), cells_(t * t) {}

const std::optional<std::uint32_t>& FactorArray::at(std::size_t i, std::size_t j) const {
  if (i < 1 || j < 1 || i > t_ || j > t_) {
    throw Error(ErrorKind::MissingEntry, "array index (" + std::to_string(i) + "," +
                                             std::to_string(j) + ") out of range");
  }
  return cells_[(i - 1) * t_ + (j - 1)];
}

void FactorArray::set(std::size_t i, std::size_t j, std::optional<std::uint32_t> value) {
  if (i < 1 || j < 1 || i > t_ || j > t_) {
    throw Error(ErrorKind::MissingEntry, "array index out of range");
  }
  cells_[(i - 1) * t_ + (j - 1)] = value;
}

std::string ArrayRepair::describe() const {
  return "A(" + std::to_string(row) + "," + std::to_string(col) + "): " + std::to_string(from) +
         " -> " + std::to_string(to) + " (" + reason + ")";
}

std::vector<ArrayRepair> repair_upper_triangle(FactorArray& array) {
  std::vector<ArrayRepair> repairs;
  for (std::size_t i = 1; i <= array.side(); ++i) {
    for (std::size_t j = i + 1; j <= array.side(); ++j) {
      const auto& entry = array.at(i, j);
      if (!entry || array.is_valid_label(*entry)) continue;
      const auto& mirror = array.at(j, i);
      if (mirror && array.is_valid_label(*mirror)) {
        repairs.push_back({i, j, *entry, *mirror});
        array.set(i, j, *mirror);
      }
    }
  }
  return repairs;
}

std::vector<ArrayRepair> repair_diagonal_complements(
    FactorArray& array, const std::vector<std::pair<std::size_t, std::size_t>>& used_pairs) {
  std::vector<ArrayRepair> repairs;
  const std::uint32_t m = array.modulus();
  for (std::size_t i = 1; i <= array.side(); ++i) {
    const auto& diag = array.at(i, i);
    if (!diag || !array.is_valid_label(*diag) || 2 * *diag == m) continue;
    bool label_used = false;
    bool complement_used = false;
    for (auto [a, b] : used_pairs) {
      if (a != i && b != i) continue;
      const auto& e = array.at(a, b);
      if (!e) continue;
      label_used |= *e == *diag;
      complement_used |= *e == m - *diag;
    }
    if (label_used && !complement_used) {
      repairs.push_back({i, i, *diag, m - *diag, "label already used by a cross block through x_" +
                                                     std::to_string(i) + "; complement"});
      array.set(i, i, m - *diag);
    }
  }
  return repairs;
}

}  // namespace qpack
