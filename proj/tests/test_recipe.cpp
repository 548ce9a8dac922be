#include <doctest.h>

#include "qpack/assets.hpp"
#include "qpack/recipe.hpp"
#include "qpack/verify.hpp"

using namespace qpack;

namespace {

const char* kPqs7 = R"(# three groups of two
name small
type 2^3:2
special 2
congruences none
output 7
cqs CQS:2.2.2:2
special-fill MPQS:3 map canonical
group-fill 2 HPQS:3:1 map canonical
)";

std::size_t parse_error_line(const std::string& text) {
  try {
    Recipe::parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("parsed: " << text);
  return 999;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("parse and print") {
  auto r = Recipe::parse(kPqs7);
  CHECK(r.name == "small");
  CHECK(r.output_order == 7);
  CHECK(r.congruences == Congruences::None);
  CHECK(r.required_signatures() == std::vector<std::string>{"CQS:2.2.2:2", "MPQS:3", "HPQS:3:1"});
  auto again = Recipe::parse(r.to_text());
  CHECK(again.to_text() == r.to_text());
  // the closed polynomial is not integral for this type; the ingredient sum is
  CHECK_THROWS_AS(r.predicted_count(), Error);
  CHECK(ingredient_sum_count(r.type) == 7);
}

TEST_CASE("parse errors") {
  CHECK(parse_error_line(replace(kPqs7, "output 7", "colour 7")) == 6);
  CHECK(parse_error_line(replace(kPqs7, "special 2", "special two")) == 4);
  CHECK(parse_error_line(replace(kPqs7, "congruences none", "congruences some")) == 5);
  CHECK(parse_error_line(replace(kPqs7, "map canonical\ngroup", "map\ngroup")) == 8);
  CHECK(parse_error_line(replace(kPqs7, "cqs CQS:2.2.2:2", "cqs MPQS:7")) == 7);
  // whole-recipe checks carry no line
  CHECK(parse_error_line(replace(kPqs7, "output 7", "output 8")) == 0);
  CHECK(parse_error_line(replace(kPqs7, "congruences none", "congruences stem-0")) == 0);
  CHECK(parse_error_line(replace(kPqs7, "group-fill 2 HPQS:3:1 map canonical\n", "")) == 0);
  CHECK(parse_error_line(replace(kPqs7, "group-fill 2", "group-fill 3")) == 0);
  CHECK(parse_error_line(replace(kPqs7, "name small\n", "")) == 0);
}

TEST_CASE("shipped recipes: predicted count equals the Johnson bound in both families") {
  auto shipped = shipped_recipes();
  CHECK(shipped.size() == 16);
  std::size_t optimal = 0;
  for (const auto& [file, r] : shipped) {
    CAPTURE(file);
    CHECK(r.output_order == r.type.points() - 1);
    CHECK(r.predicted_count() == ingredient_sum_count(r.type));
    CHECK(r.congruences != Congruences::None);
    CHECK(r.output_order % 12 == 11);
    CHECK(r.predicted_count() == johnson_bound(r.output_order));
    ++optimal;
  }
  CHECK(optimal == 16);
}

TEST_CASE("shipped recipes with built-in ingredients: missing lists are exact") {
  const auto& lib = builtin_ingredients();
  for (const auto& [file, r] : shipped_recipes()) {
    CAPTURE(file);
    std::vector<std::string> expected;
    for (const auto& sig : r.required_signatures()) {
      bool have = sig.rfind("CQS:", 0) == 0 ? lib.find_cqs(sig).has_value() : lib.find_packing(sig).has_value();
      if (!have) expected.push_back(sig);
    }
    try {
      auto result = execute_recipe(r, lib);
      CHECK(expected.empty());
      CHECK(result.design.n() == r.output_order);
      CHECK(check_packing(result.design).ok);
    } catch (const MissingIngredient& e) {
      CHECK(e.signatures() == expected);
    }
  }
}

TEST_CASE("an empty source misses everything") {
  WithholdingSource none(builtin_ingredients(), {"CQS:2.2.2:2", "MPQS:3", "HPQS:3:1"});
  try {
    execute_recipe(Recipe::parse(kPqs7), none);
    FAIL("no error");
  } catch (const MissingIngredient& e) {
    CHECK(e.signatures() == std::vector<std::string>{"CQS:2.2.2:2", "MPQS:3", "HPQS:3:1"});
  }
}

TEST_CASE("positional maps and the special group") {
  auto r = Recipe::parse(std::string(kPqs7) + "special-group 1\nstem-point 6\n");
  auto result = execute_recipe(r, builtin_ingredients());
  CHECK(result.stem_point == 6);
  CHECK(result.design.blocks().size() == 7);

  auto bad = Recipe::parse(replace(kPqs7, "MPQS:3 map canonical", "MPQS:3 map 0 1 5"));
  CHECK_THROWS_AS(execute_recipe(bad, builtin_ingredients()), Error);
  auto swapped = Recipe::parse(replace(kPqs7, "MPQS:3 map canonical", "MPQS:3 map 2 0 1"));
  CHECK(execute_recipe(swapped, builtin_ingredients()).design.blocks().size() == 7);
}

TEST_CASE("parallel execution keeps input order") {
  std::vector<Recipe> rs;
  for (const auto& [file, r] : shipped_recipes()) rs.push_back(r);
  auto outcomes = execute_recipes(rs, builtin_ingredients());
  REQUIRE(outcomes.size() == rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CAPTURE(rs[i].name);
    CHECK(outcomes[i].error.empty());
    if (outcomes[i].result) {
      CHECK(outcomes[i].result->design.n() == rs[i].output_order);
    } else {
      CHECK_FALSE(outcomes[i].missing.empty());
    }
  }
}

TEST_CASE("example recipes run on built-in ingredients") {
  auto r7 = Recipe::parse(*embedded_asset("examples/pqs7.recipe"));
  auto a7 = execute_recipe(r7, builtin_ingredients());
  CHECK(a7.design.blocks().size() == 7);

  // outside both congruence families: a valid packing one short of J(11)
  auto r11 = Recipe::parse(*embedded_asset("examples/pqs11.recipe"));
  CHECK(ingredient_sum_count(r11.type) == 34);
  CHECK(r11.predicted_count() == 35);  // the polynomial assumes the congruences
  auto a11 = execute_recipe(r11, builtin_ingredients());
  CHECK(a11.design.blocks().size() == 34);
  CHECK(johnson_bound(11) == 35);
  CHECK(a11.design.kind() == DesignKind::PQS);
  CHECK(check_packing(a11.design).ok);
}
