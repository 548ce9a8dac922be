#include <array>
#include <charconv>
#include <map>
#include <mutex>
#include <sstream>

#include "qpack/assets.hpp"
#include "qpack/construct.hpp"

namespace qpack {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return v;
}

std::size_t parse_x_index(std::string_view tok, std::size_t line_no) {
  if (tok.size() < 2 || tok[0] != 'x') {
    throw ParseError(line_no, "expected an infinite point x<i>, got '" + std::string(tok) + "'");
  }
  return parse_uint(tok.substr(1), line_no);
}

/// "x7-x11" -> (7, 11)
IndexPair parse_x_range(std::string_view tok, std::size_t line_no) {
  auto dash = tok.find('-');
  if (dash == std::string_view::npos) throw ParseError(line_no, "expected a range xA-xB");
  auto lo = parse_x_index(tok.substr(0, dash), line_no);
  auto hi = parse_x_index(tok.substr(dash + 1), line_no);
  if (lo == 0 || hi < lo) throw ParseError(line_no, "empty range " + std::string(tok));
  return {lo, hi};
}

}  // namespace

MixedPoints ConstructionTable::points() const {
  if (const auto* c = std::get_if<CyclicAction>(&action)) return c->points;
  return {order, 0};
}

std::vector<IndexPair> ConstructionTable::cross_pairs() const {
  std::vector<IndexPair> out;
  if (!array) return out;
  auto excluded = [&](std::size_t i) {
    return cross_exclude && i >= cross_exclude->first && i <= cross_exclude->second;
  };
  for (std::size_t i = 1; i <= array->side(); ++i) {
    for (std::size_t j = i + 1; j <= array->side(); ++j) {
      if (excluded(i) && excluded(j)) continue;
      out.emplace_back(i, j);
    }
  }
  return out;
}

ConstructionTable ConstructionTable::parse(std::string_view text) {
  ConstructionTable table;
  std::optional<std::uint32_t> modulus;
  std::uint32_t infinite = 0;
  std::optional<PermutationSpec> permutation;
  std::string permutation_text;
  std::size_t permutation_line = 0;

  enum class Section { Header, Array, Develop } section = Section::Header;
  std::size_t array_side = 0;
  std::size_t array_row = 0;
  std::vector<std::vector<std::string>> array_rows;
  std::vector<std::pair<std::size_t, std::string>> develop_lines;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string_view line(raw);
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (section == Section::Array) {
      if (tok.size() != array_side) {
        throw ParseError(line_no, "array row has " + std::to_string(tok.size()) + " cells, expected " +
                                      std::to_string(array_side));
      }
      array_rows.push_back(tok);
      if (++array_row == array_side) section = Section::Header;
      continue;
    }

    const std::string& key = tok[0];
    if (key.starts_with("leave-")) {
      section = Section::Header;
      LeaveFamily f;
      if (key == "leave-diagonal" && tok.size() == 3) {
        f.kind = LeaveFamily::Kind::FactorDiagonal;
        f.first_row = parse_uint(tok[1], line_no);
        f.last_row = parse_uint(tok[2], line_no);
      } else if (key == "leave-orbit" && tok.size() == 4) {
        f.kind = LeaveFamily::Kind::CyclicOrbit;
        for (int k = 0; k < 3; ++k) {
          f.base[static_cast<std::size_t>(k)] =
              static_cast<std::uint32_t>(parse_uint(tok[static_cast<std::size_t>(k) + 1], line_no));
        }
      } else if (key == "leave-perm-orbit" && tok.size() == 4) {
        f.kind = LeaveFamily::Kind::PermutationOrbit;
        for (int k = 0; k < 3; ++k) {
          f.base[static_cast<std::size_t>(k)] =
              static_cast<std::uint32_t>(parse_uint(tok[static_cast<std::size_t>(k) + 1], line_no));
        }
      } else if (key == "leave-subdesign" && tok.size() == 2) {
        f.kind = LeaveFamily::Kind::SubdesignLeave;
        f.signature = tok[1];
      } else {
        throw ParseError(line_no, "malformed leave line");
      }
      table.leave.families.push_back(f);
      continue;
    }
    if (section == Section::Develop) {
      develop_lines.emplace_back(line_no, std::string(line));
      continue;
    }

    if (key == "order" && tok.size() == 2) {
      table.order = static_cast<std::uint32_t>(parse_uint(tok[1], line_no));
    } else if (key == "modulus" && tok.size() == 2) {
      modulus = static_cast<std::uint32_t>(parse_uint(tok[1], line_no));
    } else if (key == "infinite" && tok.size() == 2) {
      infinite = static_cast<std::uint32_t>(parse_uint(tok[1], line_no));
    } else if (key == "permutation") {
      permutation_text = std::string(line.substr(line.find("permutation") + 11));
      permutation_line = line_no;
    } else if (key == "subdesign" && tok.size() == 3) {
      auto r = parse_x_range(tok[2], line_no);
      table.subdesign = SubdesignPlacement{tok[1], r.first, r.second};
    } else if (key == "class-fill" && tok.size() == 6 && tok[2] == "classes" && tok[4] == "hole") {
      auto r = parse_x_range(tok[5], line_no);
      table.class_fill = ClassFill{tok[1], static_cast<std::uint32_t>(parse_uint(tok[3], line_no)),
                                   r.first, r.second};
    } else if (key == "cross-exclude" && tok.size() == 2) {
      table.cross_exclude = parse_x_range(tok[1], line_no);
    } else if (key == "array" && tok.size() == 2) {
      array_side = parse_uint(tok[1], line_no);
      array_row = 0;
      section = array_side > 0 ? Section::Array : Section::Header;
    } else if (key == "develop" && tok.size() == 1) {
      section = Section::Develop;
    } else {
      throw ParseError(line_no, "unknown table line '" + std::string(line) + "'");
    }
  }
  if (section == Section::Array) throw ParseError(line_no, "array ends early");
  if (table.order == 0) throw ParseError(0, "table has no order");

  if (!permutation_text.empty()) {
    try {
      table.action = PermutationSpec::parse(table.order, permutation_text);
    } catch (const Error& e) {
      throw ParseError(permutation_line, e.what());
    }
  } else {
    if (!modulus) throw ParseError(0, "table needs a modulus or a permutation");
    table.action = CyclicAction{MixedPoints{*modulus, infinite}};
  }
  const MixedPoints pts = table.points();
  if (pts.size() != table.order) {
    throw ParseError(0, "modulus + infinite points != order");
  }

  if (array_side > 0) {
    FactorArray arr(array_side, pts.modulus);
    for (std::size_t i = 0; i < array_side; ++i) {
      for (std::size_t j = 0; j < array_side; ++j) {
        const auto& cell = array_rows[i][j];
        if (cell == "-") continue;
        arr.set(i + 1, j + 1, static_cast<std::uint32_t>(parse_uint(cell, 0)));
      }
    }
    table.array = std::move(arr);
  }

  for (const auto& [no, text_line] : develop_lines) {
    auto tok = split_ws(text_line);
    std::optional<std::size_t> orbit;
    if (!tok.empty() && tok.back().starts_with("orbit=")) {
      orbit = parse_uint(std::string_view(tok.back()).substr(6), no);
      tok.pop_back();
    }
    if (tok.size() != 4) throw ParseError(no, "a base block needs exactly 4 points");
    std::array<Point, 4> p{};
    try {
      for (std::size_t k = 0; k < 4; ++k) p[k] = mixed_point_label(pts, parse_mixed_name(tok[k]));
      table.rows.push_back({Block(p), orbit});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(no, e.what());
    }
  }
  return table;
}

std::span<const std::uint32_t> direct_orders() {
  static constexpr std::array<std::uint32_t, 5> orders{23, 35, 47, 59, 71};
  return orders;
}

const ConstructionTable& construction_table(std::uint32_t n) {
  static std::mutex mu;
  static std::map<std::uint32_t, ConstructionTable> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto asset = embedded_asset("tables/mpqs" + std::to_string(n) + ".tbl");
  if (!asset) {
    throw Error(ErrorKind::InvalidTarget,
                "no direct construction for order " + std::to_string(n) +
                    " (available: 23, 35, 47, 59, 71)");
  }
  return cache.emplace(n, ConstructionTable::parse(*asset)).first->second;
}

LeavePattern leave_pattern(std::uint32_t n) { return construction_table(n).leave; }

}  // namespace qpack
