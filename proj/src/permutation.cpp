#include "qpack/permutation.hpp"

#include <numeric>
#include <sstream>

namespace qpack {

PermutationSpec::PermutationSpec(std::uint32_t degree, std::vector<std::vector<Point>> cycles)
    : cycles_(std::move(cycles)), image_(degree) {
  std::iota(image_.begin(), image_.end(), Point{0});
  std::vector<bool> used(degree, false);
  for (const auto& cyc : cycles_) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      Point p = cyc[i];
      if (p >= degree || used[p]) {
        throw Error(ErrorKind::InvalidPoint, "permutation cycles must be disjoint and within degree");
      }
      used[p] = true;
      image_[p] = cyc[(i + 1) % cyc.size()];
    }
  }
}

PermutationSpec PermutationSpec::parse(std::uint32_t degree, std::string_view text) {
  std::vector<std::vector<Point>> cycles;
  std::vector<Point> current;
  bool open = false;
  std::string number;
  auto flush_number = [&] {
    if (!number.empty()) {
      current.push_back(static_cast<Point>(std::stoul(number)));
      number.clear();
    }
  };
  for (char ch : text) {
    if (ch == '(') {
      if (open) throw ParseError(0, "nested '(' in permutation");
      open = true;
      current.clear();
    } else if (ch == ')') {
      if (!open) throw ParseError(0, "unbalanced ')' in permutation");
      flush_number();
      if (!current.empty()) cycles.push_back(current);
      open = false;
    } else if (ch >= '0' && ch <= '9') {
      if (!open) throw ParseError(0, "point outside a cycle in permutation");
      number += ch;
    } else if (ch == ' ' || ch == ',' || ch == '\t') {
      flush_number();
    } else {
      throw ParseError(0, std::string("unexpected '") + ch + "' in permutation");
    }
  }
  if (open) throw ParseError(0, "unterminated cycle in permutation");
  return PermutationSpec(degree, std::move(cycles));
}

Block PermutationSpec::operator()(const Block& b) const {
  return Block((*this)(b[0]), (*this)(b[1]), (*this)(b[2]), (*this)(b[3]));
}

std::uint64_t PermutationSpec::order() const {
  std::uint64_t r = 1;
  for (const auto& c : cycles_) r = std::lcm(r, static_cast<std::uint64_t>(c.size()));
  return r;
}

bool PermutationSpec::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

std::string PermutationSpec::to_string() const {
  std::ostringstream out;
  for (const auto& c : cycles_) {
    if (c.size() < 2) continue;
    out << '(';
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << ')';
  }
  return out.str();
}

}  // namespace qpack
