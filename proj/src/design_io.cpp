#include "qpack/design_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qpack {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) pos = s.size();
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto w : split(s, ' ')) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

std::uint64_t number(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a decimal number, got '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<Point> point_list(std::string_view s, std::size_t line) {
  std::vector<Point> out;
  for (auto w : words(s)) out.push_back(static_cast<Point>(number(w, line)));
  return out;
}

void append_points(std::string& out, std::span<const Point> pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(pts[i]);
  }
}

void append_blocks(std::string& out, std::vector<Block> blocks) {
  std::sort(blocks.begin(), blocks.end());
  out += "blocks " + std::to_string(blocks.size()) + "\n";
  for (const auto& b : blocks) out += b.to_string() + "\n";
}

}  // namespace

DesignFile parse_design(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::optional<std::string> kind;
  std::optional<std::uint32_t> n;
  std::optional<std::vector<Point>> hole;
  std::optional<std::vector<std::vector<Point>>> groups;
  std::optional<std::vector<Point>> stem;
  std::optional<std::string> provenance;
  std::optional<std::size_t> count;

  std::size_t i = 0;
  for (; i < lines.size() && !count; ++i) {
    const std::size_t no = i + 1;
    std::string_view line = lines[i];
    if (line.starts_with("source=")) {
      if (provenance) throw ParseError(no, "duplicate provenance line");
      provenance = std::string(line);
      continue;
    }
    auto sp = line.find(' ');
    std::string_view key = line.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
    if (key.empty() && rest.empty()) throw ParseError(no, "blank line in header");
    if (key == "kind") {
      if (rest != "PQS" && rest != "MPQS" && rest != "HPQS" && rest != "CQS") {
        throw ParseError(no, "unknown kind '" + std::string(rest) + "'");
      }
      kind = std::string(rest);
    } else if (key == "n") {
      n = static_cast<std::uint32_t>(number(rest, no));
    } else if (key == "hole") {
      hole = point_list(rest, no);
    } else if (key == "groups") {
      std::vector<std::vector<Point>> g;
      for (auto part : split(rest, ';')) g.push_back(point_list(part, no));
      groups = std::move(g);
    } else if (key == "stem") {
      stem = point_list(rest, no);
    } else if (key == "blocks") {
      count = number(rest, no);
    } else {
      throw ParseError(no, "unknown header key '" + std::string(key) + "'");
    }
  }
  if (!kind) throw ParseError(0, "missing 'kind' header");
  if (!n) throw ParseError(0, "missing 'n' header");
  if (!count) throw ParseError(0, "missing 'blocks' header");
  if (lines.size() - i != *count) {
    throw ParseError(lines.size(), "header announces " + std::to_string(*count) + " blocks, file has " +
                                       std::to_string(lines.size() - i));
  }

  std::vector<Block> blocks;
  blocks.reserve(*count);
  for (; i < lines.size(); ++i) {
    const std::size_t no = i + 1;
    auto w = words(lines[i]);
    if (w.size() != 4) {
      throw ParseError(no, "a block line needs 4 points, got " + std::to_string(w.size()));
    }
    std::array<Point, 4> p{};
    for (std::size_t k = 0; k < 4; ++k) {
      auto v = number(w[k], no);
      if (v >= *n) throw ParseError(no, "point " + std::to_string(v) + " is not below n");
      p[k] = static_cast<Point>(v);
    }
    try {
      blocks.emplace_back(p);
    } catch (const Error& e) {
      throw ParseError(no, e.what());
    }
  }

  try {
    if (*kind == "CQS") {
      if (!groups || !stem) throw ParseError(0, "a CQS file needs 'groups' and 'stem' headers");
      if (hole) throw ParseError(0, "a CQS file has no hole");
      CandelabraSystem c(*groups, *stem, std::move(blocks));
      if (c.v() != *n) throw ParseError(0, "groups and stem do not cover 0..n-1");
      return {std::move(c), provenance};
    }
    if (groups || stem) throw ParseError(0, "'groups'/'stem' only apply to kind CQS");
    DesignKind dk = *kind == "MPQS"   ? DesignKind::MPQSClaimed
                    : *kind == "HPQS" ? DesignKind::HPQSClaimed
                                      : DesignKind::PQS;
    return {PackingDesign(*n, std::move(blocks), hole, dk), provenance};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

std::string serialize_design(const PackingDesign& d, const std::optional<std::string>& provenance) {
  std::string out = "kind " + std::string(to_string(d.kind())) + "\n";
  out += "n " + std::to_string(d.n()) + "\n";
  if (d.hole()) {
    out += "hole";
    if (!d.hole()->empty()) out += ' ';
    append_points(out, *d.hole());
    out += '\n';
  }
  if (provenance) out += *provenance + "\n";
  append_blocks(out, d.blocks());
  return out;
}

std::string serialize_design(const CandelabraSystem& c, const std::optional<std::string>& provenance) {
  std::string out = "kind CQS\nn " + std::to_string(c.v()) + "\ngroups ";
  for (std::size_t g = 0; g < c.groups().size(); ++g) {
    if (g) out += ';';
    append_points(out, c.groups()[g]);
  }
  out += "\nstem";
  if (!c.stem().empty()) out += ' ';
  append_points(out, c.stem());
  out += '\n';
  if (provenance) out += *provenance + "\n";
  append_blocks(out, c.blocks());
  return out;
}

std::string serialize_design(const DesignFile& f) {
  return std::visit([&](const auto& d) { return serialize_design(d, f.provenance); }, f.design);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorKind::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace qpack
