#include "qpack/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <sstream>

#include "qpack/assets.hpp"
#include "qpack/catalog.hpp"
#include "qpack/construct.hpp"
#include "qpack/design_io.hpp"
#include "qpack/one_factor.hpp"
#include "qpack/recipe.hpp"
#include "qpack/search.hpp"
#include "qpack/verify.hpp"

namespace qpack {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& name, std::istream& in) {
  if (name == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::error_code ec;
  if (!fs::is_regular_file(name, ec)) throw UsageError("no such file: " + name);
  return read_text_file(name);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
  } else {
    write_text_file_atomic(out_path, text);
  }
}

std::vector<Point> parse_point_list(const std::string& text) {
  std::vector<Point> pts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      auto v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      pts.push_back(static_cast<Point>(v));
    } catch (const std::exception&) {
      throw UsageError("bad point '" + tok + "' in list '" + text + "'");
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::string join_pairs(const OneFactor& f) {
  std::string s = "F_" + std::to_string(f.label) + ":";
  for (const auto& p : f.pairs) s += " {" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "}";
  return s;
}

Recipe load_recipe(const std::string& name) {
  std::error_code ec;
  if (fs::is_regular_file(name, ec)) return Recipe::parse(read_text_file(name));
  for (const auto& key : {name, "recipes/" + name, "recipes/" + name + ".recipe", "examples/" + name,
                          "examples/" + name + ".recipe"}) {
    if (auto asset = embedded_asset(key)) return Recipe::parse(*asset);
  }
  throw UsageError("no recipe file or shipped recipe named '" + name + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"qpack: maximum packing quadruple systems"};
  app.require_subcommand(1);

  auto* bound = app.add_subcommand("bound", "print J(n,4,4)");
  std::uint64_t bound_n = 0;
  bound->add_option("n", bound_n, "number of points")->required();

  auto* build = app.add_subcommand("build", "run a direct construction");
  std::uint32_t build_n = 0;
  std::string build_out, build_catalog;
  build->add_option("--n", build_n, "order")->required();
  build->add_option("--out", build_out, "output file (default stdout)");
  build->add_option("--catalog", build_catalog, "ingredient catalog; the result is stored there too");

  auto* verify = app.add_subcommand("verify", "check a design file");
  std::string verify_file, verify_hole;
  bool expect_optimal = false, verify_cqs = false;
  verify->add_option("file", verify_file, "design file, or - for stdin")->required();
  verify->add_flag("--expect-optimal", expect_optimal, "also require J(n) blocks");
  verify->add_option("--hole", verify_hole, "hole points, comma separated");
  verify->add_flag("--cqs", verify_cqs, "the file is a candelabra system");

  auto* leave = app.add_subcommand("leave", "compute the leave of a packing");
  std::string leave_file;
  std::uint32_t leave_pattern_n = 0;
  leave->add_option("file", leave_file, "design file, or - for stdin")->required();
  leave->add_option("--pattern", leave_pattern_n, "compare with the leave pattern of this order");

  auto* onefact = app.add_subcommand("onefact", "one-factor pair of G({d}) over Z_m");
  std::uint32_t of_m = 0, of_d = 0;
  onefact->add_option("--m", of_m, "modulus")->required();
  onefact->add_option("--d", of_d, "difference")->required();

  auto* search = app.add_subcommand("search", "exact search for a packing or candelabra system");
  std::uint32_t search_n = 0;
  std::optional<std::uint64_t> search_target;
  std::string search_hole, search_aut, search_cqs_type, search_out, search_branching = "fewest";
  SearchBudget budget;
  search->add_option("--n", search_n, "number of points");
  search->add_option("--target", search_target, "block count (default: the bound)");
  search->add_option("--hole", search_hole, "hole points, comma separated");
  search->add_option("--seed", budget.seed, "64-bit seed");
  search->add_option("--budget-nodes", budget.node_limit, "node limit per restart");
  search->add_option("--budget-secs", budget.time_limit, "wall clock limit");
  search->add_option("--restarts", budget.restarts, "number of restarts");
  search->add_option("--branching", search_branching, "fewest | first-open")
      ->check(CLI::IsMember({"fewest", "first-open"}));
  search->add_option("--automorphism", search_aut, "only packings invariant under e.g. (0 1 2)(3 4)");
  search->add_option("--cqs-type", search_cqs_type, "search a CQS of this type, e.g. 2^3:2");
  search->add_option("--out", search_out, "output file (default stdout)");

  auto* assemble_cmd = app.add_subcommand("assemble", "run a recipe");
  std::string recipe_name, assemble_catalog, assemble_out;
  bool list_recipes = false;
  assemble_cmd->add_option("--recipe", recipe_name, "recipe file or shipped recipe name");
  assemble_cmd->add_option("--catalog", assemble_catalog, "catalog directory (default $QPACK_CATALOG)");
  assemble_cmd->add_option("--out", assemble_out, "output file (default stdout)");
  assemble_cmd->add_flag("--list", list_recipes, "list shipped recipes");

  auto* catalog = app.add_subcommand("catalog", "manage the design catalog");
  catalog->require_subcommand(1);
  std::string cat_root, cat_file, cat_sig, cat_out;
  auto* cat_add = catalog->add_subcommand("add", "verify and store a design file");
  cat_add->add_option("file", cat_file, "design file, or - for stdin")->required();
  cat_add->add_option("--signature", cat_sig, "claimed signature (default: implied by the file)");
  cat_add->add_option("--catalog", cat_root, "catalog directory");
  auto* cat_list = catalog->add_subcommand("list", "list stored signatures");
  cat_list->add_option("--catalog", cat_root, "catalog directory");
  auto* cat_get = catalog->add_subcommand("get", "print a stored design");
  cat_get->add_option("signature", cat_sig, "e.g. MPQS:35")->required();
  cat_get->add_option("--catalog", cat_root, "catalog directory");
  cat_get->add_option("--out", cat_out, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  auto catalog_at = [](const std::string& dir) { return Catalog(dir.empty() ? Catalog::default_root() : fs::path(dir)); };

  try {
    if (bound->parsed()) {
      out << johnson_bound(bound_n) << '\n';
      return exit_code::ok;
    }

    if (build->parsed()) {
      std::optional<Catalog> cat;
      if (!build_catalog.empty()) cat.emplace(build_catalog);
      std::vector<const IngredientSource*> chain;
      if (cat) chain.push_back(&*cat);
      chain.push_back(&builtin_ingredients());
      ChainedSource source(chain);
      auto result = build_mpqs(build_n, source);
      for (const auto& line : result.log) err << line << '\n';
      err << "BUILD n=" << build_n << " blocks=" << result.design.blocks().size()
          << " bound=" << johnson_bound(build_n) << '\n';
      DesignFile file{result.design, "source=construction n=" + std::to_string(build_n)};
      emit(serialize_design(file), build_out, out);
      if (cat) err << "stored " << cat->add(file) << " in " << cat->root().string() << '\n';
      return exit_code::ok;
    }

    if (verify->parsed()) {
      DesignFile file;
      try {
        file = parse_design(read_input(verify_file, in));
      } catch (const ParseError& e) {
        out << "VERIFY ok=false parse error at line " << e.line() << ": " << e.what() << '\n';
        return exit_code::verification_failed;
      }
      if (verify_cqs && !file.is_cqs()) throw UsageError("--cqs given but the file is not a CQS");
      VerificationReport report;
      if (file.is_cqs()) {
        report = check_cqs(file.cqs());
      } else {
        PackingDesign d = file.packing();
        if (!verify_hole.empty()) d = PackingDesign(d.n(), d.blocks(), parse_point_list(verify_hole), d.kind());
        report = check_packing(d);
        if (expect_optimal && report.ok && BigInt(report.block_count) != report.bound) {
          report.ok = false;
          report.problems.push_back("expected " + report.bound.str() + " blocks, found " +
                                    std::to_string(report.block_count));
        }
      }
      out << report.to_text();
      return report.ok ? exit_code::ok : exit_code::verification_failed;
    }

    if (leave->parsed()) {
      auto file = parse_design(read_input(leave_file, in));
      if (file.is_cqs()) throw UsageError("leave needs a packing, not a CQS");
      const auto& d = file.packing();
      auto triples = compute_leave(d);
      out << "LEAVE n=" << d.n() << " size=" << triples.size() << '\n';
      if (leave_pattern_n == 0) return exit_code::ok;
      if (leave_pattern_n != d.n()) {
        throw UsageError("pattern order " + std::to_string(leave_pattern_n) + " but the design has " +
                         std::to_string(d.n()) + " points");
      }
      auto built = build_mpqs(leave_pattern_n, builtin_ingredients());
      auto cmp = compare_leave(triples, leave_pattern(leave_pattern_n), built.leave_context);
      out << "PATTERN n=" << leave_pattern_n << " match=" << (cmp.equal ? "true" : "false")
          << " pattern_size=" << cmp.pattern_size << " unexplained=" << cmp.unexplained.size()
          << " spurious=" << cmp.spurious.size() << " overlaps=" << cmp.overlaps.size() << '\n';
      return cmp.equal ? exit_code::ok : exit_code::verification_failed;
    }

    if (onefact->parsed()) {
      if (of_m % 2 == 0 && of_d == of_m / 2) {
        out << join_pairs(half_matching(of_m)) << '\n';
        return exit_code::ok;
      }
      try {
        auto [a, b] = factor_pair(of_d, of_m);
        out << join_pairs(a) << '\n' << join_pairs(b) << '\n';
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotOneFactorable) throw;
        err << e.what() << '\n';
        return exit_code::verification_failed;
      }
      return exit_code::ok;
    }

    if (search->parsed()) {
      budget.branching = search_branching == "first-open" ? Branching::FirstOpen : Branching::FewestCandidates;
      SearchOutcome outcome;
      if (!search_cqs_type.empty()) {
        outcome = search_cqs(GroupType::parse(search_cqs_type), budget);
      } else {
        if (search_n == 0) throw UsageError("search needs --n (or --cqs-type)");
        PackingProblem problem;
        problem.n = search_n;
        if (!search_hole.empty()) problem.hole = parse_point_list(search_hole);
        if (!search_aut.empty()) problem.automorphism = PermutationSpec::parse(search_n, search_aut);
        problem.target = search_target ? *search_target
                         : problem.hole ? to_u64(johnson_bound(search_n) -
                                                 johnson_bound(problem.hole->size()))
                                        : to_u64(johnson_bound(search_n));
        outcome = backtrack_max_packing(problem, budget);
      }
      err << "SEARCH status=" << to_string(outcome.status) << " nodes=" << outcome.nodes
          << " restart=" << outcome.restart << '\n';
      for (const auto& note : outcome.notes) err << "note: " << note << '\n';
      if (outcome.status == SearchStatus::Found) {
        if (outcome.cqs) {
          emit(serialize_design(*outcome.cqs, outcome.provenance()), search_out, out);
        } else {
          emit(serialize_design(*outcome.design, outcome.provenance()), search_out, out);
        }
        return exit_code::ok;
      }
      return outcome.status == SearchStatus::ExhaustedOptimal ? exit_code::verification_failed
                                                              : exit_code::budget_exceeded;
    }

    if (assemble_cmd->parsed()) {
      if (list_recipes) {
        for (const auto& [name, r] : shipped_recipes()) {
          out << name << "  n=" << r.output_order << "  " << r.type.to_string() << '\n';
        }
        return exit_code::ok;
      }
      if (recipe_name.empty()) throw UsageError("assemble needs --recipe");
      auto recipe = load_recipe(recipe_name);
      Catalog cat = catalog_at(assemble_catalog);
      ChainedSource source({&cat, &builtin_ingredients()});
      AssemblyResult result;
      try {
        result = execute_recipe(recipe, source);
      } catch (const MissingIngredient& e) {
        for (const auto& s : e.signatures()) err << "missing ingredient: " << s << '\n';
        return exit_code::missing_ingredient;
      }
      for (const auto& s : result.suboptimal) err << "suboptimal ingredient: " << s << '\n';
      err << result.counts.to_text();
      err << "ASSEMBLE recipe=" << recipe.name << " n=" << result.design.n()
          << " blocks=" << result.design.blocks().size() << " bound=" << johnson_bound(result.design.n())
          << " kind=" << to_string(result.design.kind()) << '\n';
      emit(serialize_design(result.design, "source=recipe name=" + recipe.name), assemble_out, out);
      return exit_code::ok;
    }

    if (catalog->parsed()) {
      Catalog cat = catalog_at(cat_root);
      if (cat_add->parsed()) {
        DesignFile file;
        try {
          file = parse_design(read_input(cat_file, in));
        } catch (const ParseError& e) {
          err << "rejected: parse error at line " << e.line() << ": " << e.what() << '\n';
          return exit_code::verification_failed;
        }
        try {
          auto sig = cat.add(file, cat_sig.empty() ? std::nullopt : std::optional<std::string>(cat_sig));
          out << "added " << sig << '\n';
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InvalidIngredient) throw;
          err << e.what() << '\n';
          return exit_code::verification_failed;
        }
        return exit_code::ok;
      }
      if (cat_list->parsed()) {
        for (const auto& s : cat.list()) out << s << '\n';
        return exit_code::ok;
      }
      if (cat_get->parsed()) {
        auto file = cat.get(cat_sig);
        if (!file) {
          err << "missing ingredient: " << cat_sig << '\n';
          return exit_code::missing_ingredient;
        }
        emit(serialize_design(*file), cat_out, out);
        return exit_code::ok;
      }
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const MissingIngredient& e) {
    for (const auto& s : e.signatures()) err << "missing ingredient: " << s << '\n';
    return exit_code::missing_ingredient;
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidTarget:
      case ErrorKind::InvalidModulus:
      case ErrorKind::InfeasibleType:
      case ErrorKind::Io:
        return exit_code::usage;
      default:
        return exit_code::verification_failed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::verification_failed;
  }
  return exit_code::usage;
}

}  // namespace qpack
