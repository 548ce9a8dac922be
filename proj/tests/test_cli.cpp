#include <doctest.h>

#include <sstream>

#include "qpack/cli.hpp"
#include "qpack/design_io.hpp"
#include "temp_dir.hpp"

using namespace qpack;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("bound") {
  CHECK(run({"bound", "71"}).out == "14075\n");
  CHECK(run({"bound", "4"}).out == "1\n");
  CHECK(run({"bound"}).code == exit_code::usage);
  CHECK(run({"frobnicate"}).code == exit_code::usage);
  CHECK(run({}).code == exit_code::usage);
}

TEST_CASE("build, verify, leave") {
  auto b = run({"build", "--n", "23"});
  REQUIRE(b.code == exit_code::ok);
  CHECK(b.err.find("BUILD n=23 blocks=419 bound=419") != std::string::npos);

  auto v = run({"verify", "-", "--expect-optimal"}, b.out);
  CHECK(v.code == exit_code::ok);
  CHECK(v.out.find("ok=true") != std::string::npos);

  auto l = run({"leave", "-", "--pattern", "23"}, b.out);
  CHECK(l.code == exit_code::ok);
  CHECK(l.out.find("match=true") != std::string::npos);

  // drop the last block: still a packing, no longer optimal
  auto text = b.out;
  text.pop_back();
  text = text.substr(0, text.rfind('\n') + 1);
  text.replace(text.find("blocks 419"), 10, "blocks 418");
  CHECK(run({"verify", "-"}, text).code == exit_code::ok);
  CHECK(run({"verify", "-", "--expect-optimal"}, text).code == exit_code::verification_failed);
  CHECK(run({"leave", "-", "--pattern", "23"}, text).code == exit_code::verification_failed);

  CHECK(run({"verify", "-"}, "kind PQS\nn 5\nblocks 2\n0 1 2 3\n0 1 2 4\n").code == exit_code::verification_failed);
  CHECK(run({"verify", "-"}, "kind PQS\nn 5\nblocks 1\n0 1 2\n").code == exit_code::verification_failed);
  CHECK(run({"verify", "/no/such/file"}).code == exit_code::usage);
  CHECK(run({"build", "--n", "24"}).code != exit_code::ok);
}

TEST_CASE("onefact") {
  auto r = run({"onefact", "--m", "8", "--d", "2"});
  CHECK(r.code == exit_code::ok);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
  CHECK(run({"onefact", "--m", "6", "--d", "2"}).code == exit_code::verification_failed);
  CHECK(run({"onefact", "--m", "7", "--d", "2"}).code == exit_code::usage);
}

TEST_CASE("search") {
  auto r = run({"search", "--n", "7"});
  CHECK(r.code == exit_code::ok);
  CHECK(r.err.find("status=Found") != std::string::npos);
  CHECK(parse_design(r.out).packing().blocks().size() == 7);
  CHECK(run({"search", "--n", "8", "--target", "15"}).code == exit_code::verification_failed);
  CHECK(run({"search", "--n", "20", "--budget-nodes", "50"}).code == exit_code::budget_exceeded);
  // above the counting bound is a question with answer no
  CHECK(run({"search", "--n", "8", "--target", "100"}).code == exit_code::verification_failed);
  CHECK(run({"search", "--n", "8", "--hole", "9"}).code == exit_code::usage);
  CHECK(run({"search", "--cqs-type", "1^3:2"}).code == exit_code::usage);
  auto c = run({"search", "--cqs-type", "2^3:2"});
  CHECK(c.code == exit_code::ok);
  CHECK(parse_design(c.out).is_cqs());
}

TEST_CASE("assemble") {
  auto list = run({"assemble", "--list"});
  CHECK(list.code == exit_code::ok);
  CHECK(list.out.find("n=83") != std::string::npos);

  auto ok = run({"assemble", "--recipe", "pqs7"});
  CHECK(ok.code == exit_code::ok);
  CHECK(ok.err.find("blocks=7 bound=7") != std::string::npos);

  auto miss = run({"assemble", "--recipe", "mpqs83"});
  CHECK(miss.code == exit_code::missing_ingredient);
  CHECK(miss.err.find("missing ingredient: CQS:24.24.24:12") != std::string::npos);
  CHECK(run({"assemble", "--recipe", "no-such-recipe"}).code == exit_code::usage);
}

TEST_CASE("catalog") {
  TempDir dir;
  auto root = (dir.path / "cat").string();
  auto b = run({"build", "--n", "23"});
  auto added = run({"catalog", "add", "-", "--catalog", root}, b.out);
  CHECK(added.code == exit_code::ok);
  CHECK(added.out == "added MPQS:23\n");
  CHECK(run({"catalog", "list", "--catalog", root}).out == "MPQS:23\n");
  auto got = run({"catalog", "get", "MPQS:23", "--catalog", root});
  CHECK(got.code == exit_code::ok);
  CHECK(parse_design(got.out).packing().blocks().size() == 419);
  CHECK(run({"catalog", "get", "MPQS:35", "--catalog", root}).code == exit_code::missing_ingredient);

  auto text = b.out;
  text.pop_back();
  text = text.substr(0, text.rfind('\n') + 1);
  text.replace(text.find("blocks 419"), 10, "blocks 418");
  auto rejected = run({"catalog", "add", "-", "--catalog", root, "--signature", "MPQS:23"}, text);
  CHECK(rejected.code == exit_code::verification_failed);
  CHECK(run({"catalog", "add", "-", "--catalog", root}, "kind PQS\nn 5\nblocks 1\n").code ==
        exit_code::verification_failed);
  CHECK(run({"catalog", "list", "--catalog", root}).out == "MPQS:23\n");
}
