#include "qpack/recipe.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qpack/assets.hpp"

namespace qpack {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T number(std::string_view tok, std::size_t line_no) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, "expected a number, got '" + std::string(tok) + "'");
  }
  return v;
}

FillSpec parse_fill(const std::vector<std::string_view>& toks, std::size_t first, std::size_t line_no) {
  if (toks.size() < first + 3 || toks[first + 1] != "map") {
    throw ParseError(line_no, "expected '<signature> map canonical|<positions>'");
  }
  FillSpec f;
  f.signature = std::string(toks[first]);
  parse_signature(f.signature);
  if (toks.size() == first + 3 && toks[first + 2] == "canonical") return f;
  for (std::size_t i = first + 2; i < toks.size(); ++i) f.positions.push_back(number<std::size_t>(toks[i], line_no));
  return f;
}

std::string fill_text(const FillSpec& f) {
  std::string s = f.signature + " map";
  if (f.positions.empty()) return s + " canonical";
  for (auto p : f.positions) s += " " + std::to_string(p);
  return s;
}

std::vector<Point> resolve_map(const FillSpec& spec, const CandelabraSystem& cqs, std::size_t group, Point x) {
  auto canonical = canonical_fill_map(cqs, group, x);
  if (spec.positions.empty()) return canonical;
  std::vector<Point> map;
  for (auto pos : spec.positions) {
    if (pos >= canonical.size()) {
      throw Error(ErrorKind::AlignmentError, "map position " + std::to_string(pos) + " out of range for " +
                                                 spec.signature);
    }
    map.push_back(canonical[pos]);
  }
  return map;
}

}  // namespace

Recipe Recipe::parse(std::string_view text) {
  Recipe r;
  std::optional<std::string> type_text;
  std::optional<std::uint64_t> special;
  std::optional<std::string> congruence_text;
  std::size_t line_no = 0;
  std::size_t type_line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const auto key = toks[0];
    auto need = [&](std::size_t n) {
      if (toks.size() != n) throw ParseError(line_no, "wrong number of fields for '" + std::string(key) + "'");
    };
    if (key == "name") {
      if (toks.size() < 2) throw ParseError(line_no, "name is empty");
      r.name = std::string(line.substr(line.find(toks[1])));
      while (!r.name.empty() && (r.name.back() == ' ' || r.name.back() == '\t' || r.name.back() == '\r')) r.name.pop_back();
    } else if (key == "type") {
      if (toks.size() < 2) throw ParseError(line_no, "type is empty");
      std::string t;
      for (std::size_t i = 1; i < toks.size(); ++i) t += (i > 1 ? " " : "") + std::string(toks[i]);
      type_text = t;
      type_line = line_no;
    } else if (key == "special") {
      need(2);
      special = number<std::uint64_t>(toks[1], line_no);
    } else if (key == "congruences") {
      need(2);
      congruence_text = std::string(toks[1]);
      if (*congruence_text != "stem-0" && *congruence_text != "stem-6" && *congruence_text != "none") {
        throw ParseError(line_no, "congruences must be stem-0, stem-6 or none");
      }
    } else if (key == "output") {
      need(2);
      r.output_order = number<std::uint32_t>(toks[1], line_no);
    } else if (key == "cqs") {
      need(2);
      r.cqs_signature = std::string(toks[1]);
      if (parse_signature(r.cqs_signature).kind != ParsedSignature::Kind::CQS) {
        throw ParseError(line_no, "cqs needs a CQS signature");
      }
    } else if (key == "special-fill") {
      r.special_fill = parse_fill(toks, 1, line_no);
    } else if (key == "group-fill") {
      if (toks.size() < 2) throw ParseError(line_no, "group-fill needs a group size");
      auto size = number<std::uint64_t>(toks[1], line_no);
      if (r.group_fills.count(size)) throw ParseError(line_no, "duplicate group-fill for size " + std::to_string(size));
      r.group_fills[size] = parse_fill(toks, 2, line_no);
    } else if (key == "special-group") {
      need(2);
      r.special_group = number<std::size_t>(toks[1], line_no);
    } else if (key == "stem-point") {
      need(2);
      r.stem_point = number<Point>(toks[1], line_no);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }

  if (r.name.empty()) throw ParseError(0, "recipe has no name");
  if (!type_text) throw ParseError(0, "recipe has no type");
  if (!special) throw ParseError(0, "recipe has no special group size");
  if (r.cqs_signature.empty()) throw ParseError(0, "recipe has no cqs");
  if (r.special_fill.signature.empty()) throw ParseError(0, "recipe has no special-fill");
  try {
    r.type = GroupType::parse(*type_text, *special);
  } catch (const Error& e) {
    throw ParseError(type_line, e.what());
  }
  if (r.type.stem() == 0) throw ParseError(type_line, "the stem must be non-empty");
  const auto n = r.type.points() - 1;
  if (r.output_order != n) {
    throw ParseError(0, "output " + std::to_string(r.output_order) + " but u + s - 1 = " + std::to_string(n));
  }
  const auto actual = classify(r.type);
  r.congruences = actual;
  if (congruence_text && *congruence_text != to_string(actual)) {
    throw ParseError(0, "declared congruences " + *congruence_text + " but the type satisfies " +
                            std::string(to_string(actual)));
  }
  for (const auto& e : r.type.others()) {
    if (!r.group_fills.count(e.size)) throw ParseError(0, "no group-fill for size " + std::to_string(e.size));
  }
  for (const auto& [size, f] : r.group_fills) {
    auto others = r.type.others();
    if (std::none_of(others.begin(), others.end(), [&](const GroupCount& e) { return e.size == size; })) {
      throw ParseError(0, "group-fill for size " + std::to_string(size) + " but no such non-special group");
    }
  }
  return r;
}

std::string Recipe::to_text() const {
  std::ostringstream os;
  os << "name " << name << '\n';
  std::string t = type.to_string();
  os << "type " << t.substr(1, t.size() - 2) << '\n';
  os << "special " << *type.special() << '\n';
  os << "congruences " << to_string(congruences) << '\n';
  os << "output " << output_order << '\n';
  os << "cqs " << cqs_signature << '\n';
  os << "special-fill " << fill_text(special_fill) << '\n';
  for (const auto& [size, f] : group_fills) os << "group-fill " << size << ' ' << fill_text(f) << '\n';
  if (special_group) os << "special-group " << *special_group << '\n';
  if (stem_point) os << "stem-point " << *stem_point << '\n';
  return os.str();
}

std::vector<std::string> Recipe::required_signatures() const {
  std::vector<std::string> out{cqs_signature, special_fill.signature};
  for (const auto& [size, f] : group_fills) out.push_back(f.signature);
  std::vector<std::string> unique;
  for (auto& s : out) {
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(s);
  }
  return unique;
}

BigInt Recipe::predicted_count() const { return assembly_predicted_count(type); }

AssemblyResult execute_recipe(const Recipe& recipe, const IngredientSource& source) {
  std::vector<std::string> missing;
  auto cqs = source.find_cqs(recipe.cqs_signature);
  if (!cqs) missing.push_back(recipe.cqs_signature);
  std::map<std::string, PackingDesign> packings;
  for (const auto& sig : recipe.required_signatures()) {
    if (sig == recipe.cqs_signature) continue;
    if (auto d = source.find_packing(sig)) {
      packings.emplace(sig, std::move(*d));
    } else {
      missing.push_back(sig);
    }
  }
  if (!missing.empty()) throw MissingIngredient(missing);

  auto declared = cqs->declared_type();
  if (declared.signature() != recipe.type.signature()) {
    throw Error(ErrorKind::InvalidIngredient, recipe.cqs_signature + " has type " + declared.to_string() +
                                                  ", recipe wants " + recipe.type.to_string());
  }

  const auto g0 = *recipe.type.special();
  AssemblyInput in;
  if (recipe.special_group) {
    in.special_group = *recipe.special_group;
    if (in.special_group >= cqs->groups().size() || cqs->groups()[in.special_group].size() != g0) {
      throw Error(ErrorKind::AlignmentError, "special-group does not name a group of size " + std::to_string(g0));
    }
  } else {
    const auto& gs = cqs->groups();
    auto it = std::find_if(gs.begin(), gs.end(), [&](const auto& g) { return g.size() == g0; });
    in.special_group = static_cast<std::size_t>(it - gs.begin());
  }
  const auto& stem = cqs->stem();
  const Point x = recipe.stem_point.value_or(*std::max_element(stem.begin(), stem.end()));
  in.stem_point = x;
  in.cqs = *cqs;
  in.special_fill = {packings.at(recipe.special_fill.signature),
                     resolve_map(recipe.special_fill, in.cqs, in.special_group, x)};
  for (std::size_t g = 0; g < in.cqs.groups().size(); ++g) {
    if (g == in.special_group) continue;
    const auto& spec = recipe.group_fills.at(in.cqs.groups()[g].size());
    in.group_fills[g] = {packings.at(spec.signature), resolve_map(spec, in.cqs, g, x)};
  }
  auto result = assemble(in);
  if (result.design.n() != recipe.output_order) {
    throw Error(ErrorKind::CountingViolation, "assembled order " + std::to_string(result.design.n()) +
                                                  " differs from recipe output " +
                                                  std::to_string(recipe.output_order));
  }
  return result;
}

std::vector<RecipeOutcome> execute_recipes(std::span<const Recipe> recipes, const IngredientSource& source) {
  std::vector<RecipeOutcome> out(recipes.size());
  const auto count = static_cast<std::int64_t>(recipes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    auto& o = out[static_cast<std::size_t>(i)];
    try {
      o.result = execute_recipe(recipes[static_cast<std::size_t>(i)], source);
    } catch (const MissingIngredient& e) {
      o.missing = e.signatures();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  }
  return out;
}

std::vector<std::pair<std::string, Recipe>> shipped_recipes() {
  std::vector<std::pair<std::string, Recipe>> out;
  for (const auto& name : embedded_assets_with_prefix("recipes/")) {
    out.emplace_back(name, Recipe::parse(*embedded_asset(name)));
  }
  return out;
}

}  // namespace qpack
