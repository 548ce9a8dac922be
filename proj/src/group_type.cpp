#include "qpack/group_type.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qpack/error.hpp"

namespace qpack {

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(0, "bad " + std::string(what) + " '" + std::string(s) + "' in group type");
  }
  return v;
}

}  // namespace

GroupType::GroupType(std::vector<GroupCount> entries, std::uint64_t stem,
                     std::optional<std::uint64_t> special)
    : entries_(std::move(entries)), stem_(stem), special_(special) {
  for (const auto& e : entries_) {
    if (e.size == 0 || e.multiplicity == 0) {
      throw Error(ErrorKind::InfeasibleType, "group sizes and multiplicities must be positive");
    }
  }
  if (special_) {
    bool present = std::any_of(entries_.begin(), entries_.end(),
                               [&](const GroupCount& e) { return e.size == *special_; });
    if (!present) {
      throw Error(ErrorKind::InfeasibleType,
                  "designated group size " + std::to_string(*special_) + " is not in the type");
    }
  }
}

GroupType GroupType::parse(std::string_view text, std::optional<std::uint64_t> special) {
  std::string s(text);
  if (!s.empty() && s.front() == '(') s.erase(s.begin());
  if (!s.empty() && s.back() == ')') s.pop_back();
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ParseError(0, "group type needs ':stem'");
  std::string stem_text = s.substr(colon + 1);
  stem_text.erase(std::remove(stem_text.begin(), stem_text.end(), ' '), stem_text.end());
  std::uint64_t stem = parse_u64(stem_text, "stem size");

  std::vector<GroupCount> entries;
  std::istringstream in(s.substr(0, colon));
  std::string tok;
  while (in >> tok) {
    auto caret = tok.find('^');
    if (caret == std::string::npos) {
      entries.push_back({parse_u64(tok, "group size"), 1});
    } else {
      entries.push_back({parse_u64(std::string_view(tok).substr(0, caret), "group size"),
                         parse_u64(std::string_view(tok).substr(caret + 1), "multiplicity")});
    }
  }
  if (entries.empty()) throw ParseError(0, "group type has no groups");
  return GroupType(std::move(entries), stem, special);
}

std::uint64_t GroupType::group_count() const noexcept {
  std::uint64_t k = 0;
  for (const auto& e : entries_) k += e.multiplicity;
  return k;
}

std::uint64_t GroupType::group_points() const noexcept {
  std::uint64_t u = 0;
  for (const auto& e : entries_) u += e.size * e.multiplicity;
  return u;
}

std::vector<std::uint64_t> GroupType::sizes() const {
  std::vector<std::uint64_t> out;
  for (const auto& e : entries_) out.insert(out.end(), e.multiplicity, e.size);
  return out;
}

std::vector<GroupCount> GroupType::others() const {
  std::vector<GroupCount> out = entries_;
  if (special_) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const GroupCount& e) { return e.size == *special_; });
    if (--it->multiplicity == 0) out.erase(it);
  }
  return out;
}

std::string GroupType::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(entries_[i].size) + '^' + std::to_string(entries_[i].multiplicity);
  }
  return out + ':' + std::to_string(stem_) + ')';
}

std::string GroupType::signature() const {
  auto s = sizes();
  std::sort(s.begin(), s.end(), std::greater<>());
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(s[i]);
  }
  return out + ':' + std::to_string(stem_);
}

}  // namespace qpack
