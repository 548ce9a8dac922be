#include "qpack/verify.hpp"

#include <algorithm>
#include <sstream>

namespace qpack {

namespace {

std::vector<Block> blocks_meeting_hole(const PackingDesign& d, std::span<const Point> sorted_hole) {
  std::vector<Block> out;
  if (sorted_hole.size() < 3) return out;
  for (const auto& b : d.blocks()) {
    if (b.meet(sorted_hole) >= 3) out.push_back(b);
  }
  return out;
}

std::uint64_t count_covered(std::span<const std::uint8_t> covered) {
  return static_cast<std::uint64_t>(std::count(covered.begin(), covered.end(), std::uint8_t{1}));
}

VerificationReport finish_packing_report(const PackingDesign& d, std::vector<Conflict> conflicts,
                                         std::uint64_t covered) {
  VerificationReport r;
  r.n = d.n();
  r.block_count = d.blocks().size();
  r.bound = johnson_bound(d.n());
  r.conflicts = std::move(conflicts);
  if (d.hole()) r.hole_violations = blocks_meeting_hole(d, *d.hole());
  r.leave_size = triple_count(d.n()) - covered;
  r.ok = r.conflicts.empty() && r.hole_violations.empty();
  return r;
}

}  // namespace

std::string VerificationReport::summary_line() const {
  std::ostringstream os;
  os << "VERIFY ok=" << (ok ? "true" : "false") << " n=" << n << " blocks=" << block_count
     << " bound=" << bound << " leave=" << leave_size << " conflicts=" << conflicts.size();
  return os.str();
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << summary_line() << '\n';
  for (const auto& c : conflicts) {
    os << "conflict triple {" << c.triple[0] << ' ' << c.triple[1] << ' ' << c.triple[2]
       << "} blocks #" << c.first_block << " and #" << c.second_block << '\n';
  }
  for (const auto& b : hole_violations) os << "hole violation block {" << b.to_string() << "}\n";
  if (uncovered_required > 0) os << "uncovered transverse triples: " << uncovered_required << '\n';
  for (const auto& p : problems) os << p << '\n';
  return os.str();
}

VerificationReport check_packing(const PackingDesign& d) {
  auto conflicts = kernels::find_conflicts_parallel(d.n(), d.blocks());
  auto covered = kernels::coverage_parallel(d.n(), d.blocks());
  return finish_packing_report(d, std::move(conflicts), count_covered(covered));
}

VerificationReport check_packing_serial(const PackingDesign& d) {
  auto conflicts = kernels::find_conflicts_serial(d.n(), d.blocks());
  auto covered = kernels::coverage_serial(d.n(), d.blocks());
  return finish_packing_report(d, std::move(conflicts), count_covered(covered));
}

bool check_hole(const PackingDesign& d, std::span<const Point> hole) {
  std::vector<Point> sorted(hole.begin(), hole.end());
  std::sort(sorted.begin(), sorted.end());
  return blocks_meeting_hole(d, sorted).empty();
}

std::vector<Triple> compute_leave(const PackingDesign& d) {
  auto conflicts = kernels::find_conflicts_parallel(d.n(), d.blocks());
  if (!conflicts.empty()) {
    throw Error(ErrorKind::NotAPacking,
                std::to_string(conflicts.size()) + " triples are covered more than once");
  }
  auto covered = kernels::coverage_parallel(d.n(), d.blocks());
  return kernels::uncovered_parallel(d.n(), covered);
}

std::vector<Triple> compute_leave_serial(const PackingDesign& d) {
  if (!kernels::find_conflicts_serial(d.n(), d.blocks()).empty()) {
    throw Error(ErrorKind::NotAPacking, "design covers some triple more than once");
  }
  auto covered = kernels::coverage_serial(d.n(), d.blocks());
  return kernels::uncovered_serial(d.n(), covered);
}

bool check_optimal(const PackingDesign& d) {
  return BigInt(d.blocks().size()) == johnson_bound(d.n());
}

VerificationReport check_cqs(const CandelabraSystem& c) {
  VerificationReport r;
  const std::uint32_t v = c.v();
  r.n = v;
  r.block_count = c.blocks().size();
  r.conflicts = kernels::find_conflicts_serial(v, c.blocks());

  // A triple is internal when its non-stem points all lie in one group.
  auto internal = [&](Point a, Point b, Point d) {
    int g = -1;
    for (Point p : {a, b, d}) {
      int q = c.group_of(p);
      if (q < 0) continue;
      if (g >= 0 && q != g) return false;
      g = q;
    }
    return true;
  };

  for (const auto& b : c.blocks()) {
    for (const auto& t : block_triples(b)) {
      if (internal(t[0], t[1], t[2])) {
        r.hole_violations.push_back(b);
        break;
      }
    }
  }

  auto covered = kernels::coverage_serial(v, c.blocks());
  r.leave_size = triple_count(v) - count_covered(covered);
  std::uint64_t rank = 0;
  for (Point z = 2; z < v; ++z) {
    for (Point y = 1; y < z; ++y) {
      for (Point x = 0; x < y; ++x, ++rank) {
        if (!covered[rank] && !internal(x, y, z)) ++r.uncovered_required;
      }
    }
  }

  try {
    r.bound = cqs_block_count(c.declared_type());
    if (r.bound != BigInt(r.block_count)) {
      std::ostringstream os;
      os << "block count " << r.block_count << " differs from the type's count " << r.bound;
      r.problems.push_back(os.str());
    }
  } catch (const Error& e) {
    r.problems.push_back(e.what());
  }

  r.ok = r.conflicts.empty() && r.hole_violations.empty() && r.uncovered_required == 0 &&
         r.problems.empty();
  return r;
}

}  // namespace qpack
