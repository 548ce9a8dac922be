#include "qpack/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "qpack/bounds.hpp"
#include "qpack/verify.hpp"

namespace qpack {

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "Found";
    case SearchStatus::ExhaustedOptimal: return "ExhaustedOptimal";
    case SearchStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t seed, std::uint32_t restart) {
  return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t{restart} + 1)));
}

std::string SearchOutcome::provenance() const {
  std::ostringstream os;
  os << "source=search seed=" << seed << " nodes=" << nodes << " restart=" << restart
     << " node_limit=" << node_limit << " branching="
     << (branching == Branching::FirstOpen ? "first-open" : "fewest");
  if (automorphism && !automorphism->is_identity()) {
    std::string g = automorphism->to_string();
    std::replace(g.begin(), g.end(), ' ', ',');
    os << " group=" << g;
  }
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

// mt19937_64 output is fixed by the standard; distributions are not, so the
// shuffle draws directly from the engine to stay identical across toolchains.
template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

/// Orbit structure of one search problem.
struct Space {
  std::uint32_t n = 0;
  std::vector<std::vector<std::uint64_t>> triple_orbits;
  std::vector<std::int32_t> orbit_of_rank;
  std::vector<std::vector<Block>> block_orbits;
  /// triple orbits covered by each block orbit
  std::vector<std::vector<std::int32_t>> covers;
  /// block orbits covering each triple orbit, colex order
  std::vector<std::vector<std::int32_t>> candidates;
  std::uint64_t coverable = 0;
};

/// `allowed_triple`: triples the search may cover or leave. Triples outside it
/// must stay uncovered, so blocks containing them are discarded.
template <class TripleOk>
Space make_space(std::uint32_t n, const std::vector<Point>& image, TripleOk allowed_triple) {
  Space s;
  s.n = n;
  const std::uint64_t T = triple_count(n);
  s.orbit_of_rank.assign(T, -1);
  std::vector<char> allowed(T, 0);
  for (Point c = 2; c < n; ++c) {
    for (Point b = 1; b < c; ++b) {
      for (Point a = 0; a < b; ++a) {
        allowed[rank_triple_unchecked(a, b, c)] = allowed_triple(a, b, c) ? 1 : 0;
      }
    }
  }
  for (Point c = 2; c < n; ++c) {
    for (Point b = 1; b < c; ++b) {
      for (Point a = 0; a < b; ++a) {
        auto r0 = rank_triple_unchecked(a, b, c);
        if (!allowed[r0] || s.orbit_of_rank[r0] >= 0) continue;
        std::vector<std::uint64_t> orbit;
        Triple t(a, b, c);
        for (;;) {
          auto r = rank_triple_unchecked(t[0], t[1], t[2]);
          if (s.orbit_of_rank[r] >= 0) break;
          s.orbit_of_rank[r] = static_cast<std::int32_t>(s.triple_orbits.size());
          orbit.push_back(r);
          t = Triple(image[t[0]], image[t[1]], image[t[2]]);
        }
        s.coverable += orbit.size();
        s.triple_orbits.push_back(std::move(orbit));
      }
    }
  }
  // An image of an allowed triple must be allowed, else orbits would leak.
  for (std::uint64_t r = 0; r < T; ++r) {
    if (allowed[r] && s.orbit_of_rank[r] < 0) {
      throw Error(ErrorKind::InvalidTarget, "automorphism does not preserve the admissible triples");
    }
  }

  s.candidates.resize(s.triple_orbits.size());
  std::set<Block> seen;
  for (Point a = 0; a < n; ++a) {
    for (Point b = a + 1; b < n; ++b) {
      for (Point c = b + 1; c < n; ++c) {
        for (Point d = c + 1; d < n; ++d) {
          Block first(a, b, c, d);
          if (seen.count(first)) continue;
          std::vector<Block> orbit;
          for (Block cur = first; !seen.count(cur);) {
            seen.insert(cur);
            orbit.push_back(cur);
            cur = Block(image[cur[0]], image[cur[1]], image[cur[2]], image[cur[3]]);
          }
          std::vector<std::uint64_t> ranks;
          bool ok = true;
          for (const auto& blk : orbit) {
            for (const auto& t : block_triples(blk)) {
              auto r = rank_triple_unchecked(t[0], t[1], t[2]);
              if (!allowed[r]) ok = false;
              ranks.push_back(r);
            }
          }
          if (!ok) continue;
          std::sort(ranks.begin(), ranks.end());
          if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) continue;
          std::vector<std::int32_t> orbs;
          for (auto r : ranks) orbs.push_back(s.orbit_of_rank[r]);
          std::sort(orbs.begin(), orbs.end());
          orbs.erase(std::unique(orbs.begin(), orbs.end()), orbs.end());
          const auto id = static_cast<std::int32_t>(s.block_orbits.size());
          for (auto o : orbs) s.candidates[static_cast<std::size_t>(o)].push_back(id);
          s.block_orbits.push_back(std::move(orbit));
          s.covers.push_back(std::move(orbs));
        }
      }
    }
  }
  return s;
}

enum class RunStatus { Found, Exhausted, Stopped };

struct RunResult {
  RunStatus status = RunStatus::Stopped;
  std::uint64_t nodes = 0;
  std::vector<std::int32_t> chosen;
  std::vector<std::int32_t> best;
  std::uint64_t best_blocks = 0;
};

struct RunConfig {
  std::uint64_t target = 0;
  std::uint64_t leave_budget = 0;
  std::uint64_t node_limit = 0;
  Clock::time_point deadline;
  /// seed for candidate shuffling; nullopt keeps colex order
  std::optional<std::uint64_t> shuffle_seed;
  std::optional<std::int32_t> forced;
  Branching branching = Branching::FewestCandidates;
  /// polled every few thousand nodes; true aborts the run
  std::function<bool()> cancelled;
};

class Dfs {
 public:
  Dfs(const Space& s, const RunConfig& cfg) : s_(s), cfg_(cfg), state_(s.triple_orbits.size(), 0) {
    cand_ = s.candidates;
    if (cfg.shuffle_seed) {
      std::mt19937_64 rng(*cfg.shuffle_seed);
      for (auto& c : cand_) seeded_shuffle(c, rng);
    }
  }

  RunResult run() {
    if (cfg_.forced) place(*cfg_.forced);
    bool found = cfg_.target == 0 || blocks_ >= cfg_.target || descend(0, 0);
    if (stopped_) res_.status = RunStatus::Stopped;
    else res_.status = found ? RunStatus::Found : RunStatus::Exhausted;
    res_.chosen = chosen_;
    res_.nodes = nodes_;
    return std::move(res_);
  }

 private:
  bool placeable(std::int32_t bo) const {
    for (auto o : s_.covers[static_cast<std::size_t>(bo)]) {
      if (state_[static_cast<std::size_t>(o)]) return false;
    }
    return true;
  }
  void place(std::int32_t bo) {
    for (auto o : s_.covers[static_cast<std::size_t>(bo)]) state_[static_cast<std::size_t>(o)] = 1;
    chosen_.push_back(bo);
    blocks_ += s_.block_orbits[static_cast<std::size_t>(bo)].size();
    if (blocks_ > res_.best_blocks) {
      res_.best_blocks = blocks_;
      res_.best = chosen_;
    }
  }
  void unplace(std::int32_t bo) {
    for (auto o : s_.covers[static_cast<std::size_t>(bo)]) state_[static_cast<std::size_t>(o)] = 0;
    chosen_.pop_back();
    blocks_ -= s_.block_orbits[static_cast<std::size_t>(bo)].size();
  }

  bool descend(std::size_t start, std::uint64_t leave) {
    if (++nodes_ > cfg_.node_limit) {
      stopped_ = true;
      return false;
    }
    if ((nodes_ & 0xfff) == 0 &&
        (Clock::now() > cfg_.deadline || (cfg_.cancelled && cfg_.cancelled()))) {
      stopped_ = true;
      return false;
    }
    if (blocks_ >= cfg_.target) return true;
    const std::size_t o = cfg_.branching == Branching::FirstOpen ? first_open(start) : fewest(leave);
    if (o == state_.size()) return false;
    for (auto bo : cand_[o]) {
      if (!placeable(bo)) continue;
      place(bo);
      if (descend(o + 1, leave)) return true;
      unplace(bo);
      if (stopped_) return false;
    }
    const std::uint64_t size = s_.triple_orbits[o].size();
    if (leave + size <= cfg_.leave_budget) {
      state_[o] = 2;
      if (descend(o + 1, leave + size)) return true;
      state_[o] = 0;
    }
    return false;
  }

  std::size_t first_open(std::size_t start) const {
    std::size_t o = start;
    while (o < state_.size() && state_[o]) ++o;
    return o;
  }

  // Open orbit with the fewest placeable block orbits. Orbits with none must
  // end up in the leave; if they alone overflow the budget, return "none".
  std::size_t fewest(std::uint64_t leave) const {
    std::size_t best = state_.size();
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    std::size_t first_dead = state_.size();
    std::uint64_t dead = 0;
    for (std::size_t o = 0; o < state_.size(); ++o) {
      if (state_[o]) continue;
      std::size_t count = 0;
      for (auto bo : cand_[o]) {
        if (placeable(bo) && ++count >= best_count) break;
      }
      if (count == 0) {
        dead += s_.triple_orbits[o].size();
        if (leave + dead > cfg_.leave_budget) return state_.size();
        if (first_dead == state_.size()) first_dead = o;
      } else if (count < best_count) {
        best_count = count;
        best = o;
      }
    }
    // Settle forced leaves first: they cost nothing to branch on.
    return first_dead != state_.size() ? first_dead : best;
  }

  const Space& s_;
  const RunConfig& cfg_;
  std::vector<std::vector<std::int32_t>> cand_;
  std::vector<std::uint8_t> state_;
  std::vector<std::int32_t> chosen_;
  std::uint64_t blocks_ = 0;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  RunResult res_;
};

std::vector<Block> expand(const Space& s, const std::vector<std::int32_t>& orbits) {
  std::vector<Block> out;
  for (auto bo : orbits) {
    const auto& blocks = s.block_orbits[static_cast<std::size_t>(bo)];
    out.insert(out.end(), blocks.begin(), blocks.end());
  }
  return out;
}

std::vector<Point> identity_image(std::uint32_t n) {
  std::vector<Point> img(n);
  for (Point p = 0; p < n; ++p) img[p] = p;
  return img;
}

struct Problem {
  std::uint32_t n = 0;
  std::uint64_t target = 0;
  std::vector<Point> image;
  std::optional<std::int32_t> symmetry_block;
  bool restricted = false;
};

struct MultiResult {
  std::optional<std::uint32_t> winner;
  std::vector<RunResult> runs;
};

MultiResult run_restarts(const Space& space, const Problem& p, const SearchBudget& budget,
                         std::uint64_t leave_budget, bool parallel) {
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(budget.time_limit));
  const std::uint32_t restarts = std::max<std::uint32_t>(budget.restarts, 1);
  MultiResult mr;
  mr.runs.resize(restarts);
  std::atomic<std::uint32_t> found_at{std::numeric_limits<std::uint32_t>::max()};

  auto one = [&](std::uint32_t r) {
    if (found_at.load() < r) return;
    RunConfig cfg;
    cfg.target = p.target;
    cfg.leave_budget = leave_budget;
    cfg.node_limit = budget.node_limit;
    cfg.deadline = deadline;
    if (r > 0) cfg.shuffle_seed = restart_seed(budget.seed, r);
    cfg.forced = p.symmetry_block;
    cfg.branching = budget.branching;
    cfg.cancelled = [&found_at, r] { return found_at.load(std::memory_order_relaxed) < r; };
    Dfs dfs(space, cfg);
    mr.runs[r] = dfs.run();
    if (mr.runs[r].status == RunStatus::Found) {
      std::uint32_t cur = found_at.load();
      while (r < cur && !found_at.compare_exchange_weak(cur, r)) {
      }
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(restarts); ++r) {
      one(static_cast<std::uint32_t>(r));
    }
  } else {
    for (std::uint32_t r = 0; r < restarts && found_at.load() == std::numeric_limits<std::uint32_t>::max();
         ++r) {
      one(r);
    }
  }
  for (std::uint32_t r = 0; r < restarts; ++r) {
    if (mr.runs[r].status == RunStatus::Found) {
      mr.winner = r;
      break;
    }
  }
  return mr;
}

std::vector<Point> validated_hole(std::uint32_t n, const std::optional<std::vector<Point>>& hole) {
  if (!hole) return {};
  std::vector<Point> h = *hole;
  std::sort(h.begin(), h.end());
  if (std::adjacent_find(h.begin(), h.end()) != h.end()) {
    throw Error(ErrorKind::InvalidTarget, "hole points repeat");
  }
  if (!h.empty() && h.back() >= n) throw Error(ErrorKind::InvalidTarget, "hole point out of range");
  return h;
}

SearchOutcome packing_search(const PackingProblem& pp, const SearchBudget& budget, bool parallel) {
  if (pp.n == 0) throw Error(ErrorKind::InvalidTarget, "n must be positive");
  const auto hole = validated_hole(pp.n, pp.hole);
  std::vector<char> in_hole(pp.n, 0);
  for (Point h : hole) in_hole[h] = 1;

  Problem p;
  p.n = pp.n;
  p.target = pp.target;
  p.image = identity_image(pp.n);
  if (pp.automorphism) {
    if (pp.automorphism->degree() != pp.n) {
      throw Error(ErrorKind::InvalidTarget, "automorphism degree differs from n");
    }
    for (Point q = 0; q < pp.n; ++q) {
      p.image[q] = (*pp.automorphism)(q);
      if (in_hole[q] != in_hole[p.image[q]]) {
        throw Error(ErrorKind::InvalidTarget, "automorphism does not fix the hole setwise");
      }
    }
    p.restricted = !pp.automorphism->is_identity();
  }

  Space space = make_space(pp.n, p.image, [&](Point a, Point b, Point c) {
    return !(in_hole[a] && in_hole[b] && in_hole[c]);
  });

  SearchOutcome out;
  out.seed = budget.seed;
  out.node_limit = budget.node_limit;
  out.branching = budget.branching;
  out.automorphism = pp.automorphism;
  auto design_of = [&](std::vector<Block> blocks, bool found) {
    DesignKind kind = DesignKind::PQS;
    if (found) {
      BigInt ceiling = johnson_bound(pp.n) - (hole.empty() ? BigInt(0) : johnson_bound(hole.size()));
      if (BigInt(blocks.size()) == ceiling) {
        kind = hole.empty() ? DesignKind::MPQSClaimed : DesignKind::HPQSClaimed;
      }
    }
    std::optional<std::vector<Point>> h;
    if (pp.hole) h = hole;
    return PackingDesign(pp.n, std::move(blocks), h, kind).canonical();
  };

  // Counting alone rules the target out.
  if (4 * pp.target > space.coverable) {
    out.status = SearchStatus::ExhaustedOptimal;
    out.notes.push_back("target exceeds (admissible triples)/4");
    out.design = greedy_packing(pp.n, budget.seed, pp.hole);
    return out;
  }
  const std::uint64_t leave_budget = space.coverable - 4 * pp.target;

  // Fix the first block when nothing else constrains the labels: any packing
  // with a block can be relabelled to contain {0,1,2,3}.
  if (hole.empty() && !p.restricted && pp.n >= 4 && pp.target > 0) {
    for (auto bo : space.candidates[0]) {
      if (space.block_orbits[static_cast<std::size_t>(bo)].front() == Block(0, 1, 2, 3)) {
        p.symmetry_block = bo;
      }
    }
  }

  auto mr = run_restarts(space, p, budget, leave_budget, parallel);
  if (mr.winner) {
    const auto& run = mr.runs[*mr.winner];
    auto blocks = expand(space, run.chosen);
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(pp.target), blocks.end());
    out.status = SearchStatus::Found;
    out.nodes = run.nodes;
    out.restart = *mr.winner;
    out.design = design_of(std::move(blocks), true);
    return out;
  }

  // No restart succeeded. Only an unrestricted run without the forced block
  // that exhausts the tree is a proof.
  const RunResult* best = nullptr;
  for (const auto& r : mr.runs) {
    if (!best || r.best_blocks > best->best_blocks) best = &r;
  }
  {
    auto greedy = greedy_packing(pp.n, budget.seed, pp.hole);
    if (greedy.blocks().size() > best->best_blocks) out.design = std::move(greedy);
    else out.design = design_of(expand(space, best->best), false);
  }
  bool proven = false;
  if (!p.restricted) {
    if (!p.symmetry_block) {
      proven = mr.runs[0].status == RunStatus::Exhausted;
      out.nodes = mr.runs[0].nodes;
    } else {
      RunConfig cfg;
      cfg.target = p.target;
      cfg.leave_budget = leave_budget;
      cfg.node_limit = budget.node_limit;
      cfg.branching = budget.branching;
      cfg.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(budget.time_limit));
      Dfs dfs(space, cfg);
      auto proof = dfs.run();
      out.nodes = proof.nodes;
      if (proof.status == RunStatus::Found) {
        // Cannot happen for a correct forced-block argument; report it honestly.
        out.notes.push_back("proof run found a packing the restarts missed");
        auto blocks = expand(space, proof.chosen);
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(pp.target), blocks.end());
        out.status = SearchStatus::Found;
        out.design = design_of(std::move(blocks), true);
        return out;
      }
      proven = proof.status == RunStatus::Exhausted;
    }
  } else {
    out.notes.push_back("search restricted to packings invariant under the automorphism");
    out.nodes = mr.runs[0].nodes;
  }
  out.status = proven ? SearchStatus::ExhaustedOptimal : SearchStatus::BudgetExceeded;
  return out;
}

}  // namespace

SearchOutcome backtrack_max_packing(const PackingProblem& problem, const SearchBudget& budget) {
  return packing_search(problem, budget, true);
}

SearchOutcome backtrack_max_packing(std::uint32_t n, std::uint64_t target,
                                    const std::optional<std::vector<Point>>& hole,
                                    const SearchBudget& budget) {
  return packing_search({n, target, hole, std::nullopt}, budget, true);
}

SearchOutcome backtrack_max_packing_serial(const PackingProblem& problem, const SearchBudget& budget) {
  return packing_search(problem, budget, false);
}

PackingDesign greedy_packing(std::uint32_t n, std::uint64_t seed,
                             const std::optional<std::vector<Point>>& hole) {
  const auto h = validated_hole(n, hole);
  std::vector<Block> all;
  for (Point a = 0; a < n; ++a)
    for (Point b = a + 1; b < n; ++b)
      for (Point c = b + 1; c < n; ++c)
        for (Point d = c + 1; d < n; ++d) {
          Block blk(a, b, c, d);
          if (blk.meet(h) < 3) all.push_back(blk);
        }
  std::mt19937_64 rng(splitmix64(seed));
  seeded_shuffle(all, rng);
  std::vector<std::uint8_t> covered(triple_count(n), 0);
  std::vector<Block> chosen;
  for (const auto& blk : all) {
    auto ts = block_triples(blk);
    bool free = std::all_of(ts.begin(), ts.end(), [&](const Triple& t) {
      return !covered[rank_triple_unchecked(t[0], t[1], t[2])];
    });
    if (!free) continue;
    for (const auto& t : ts) covered[rank_triple_unchecked(t[0], t[1], t[2])] = 1;
    chosen.push_back(blk);
  }
  std::optional<std::vector<Point>> out_hole;
  if (hole) out_hole = h;
  return PackingDesign(n, std::move(chosen), out_hole).canonical();
}

SearchOutcome search_cqs(const GroupType& type, const SearchBudget& budget) {
  const BigInt count = cqs_block_count(type);
  const auto v = static_cast<std::uint32_t>(type.points());
  std::vector<std::vector<Point>> groups;
  std::vector<int> group_of(v, -1);
  Point next = 0;
  for (auto size : type.sizes()) {
    std::vector<Point> g;
    for (std::uint64_t k = 0; k < size; ++k) {
      group_of[next] = static_cast<int>(groups.size());
      g.push_back(next++);
    }
    groups.push_back(std::move(g));
  }
  std::vector<Point> stem;
  while (next < v) stem.push_back(next++);

  // Internal triples (inside some stem + group) are never covered; all
  // others must be covered exactly once, so the leave budget is zero.
  auto transverse = [&](Point a, Point b, Point c) {
    int g = -1;
    for (Point q : {a, b, c}) {
      int k = group_of[q];
      if (k < 0) continue;
      if (g >= 0 && k != g) return true;
      g = k;
    }
    return false;
  };
  Space space = make_space(v, identity_image(v), transverse);

  Problem p;
  p.n = v;
  p.target = to_u64(count);
  p.image = identity_image(v);

  SearchOutcome out;
  out.seed = budget.seed;
  out.node_limit = budget.node_limit;
  out.branching = budget.branching;
  if (4 * p.target != space.coverable) {
    throw Error(ErrorKind::InfeasibleType, "transverse triple count is not 4 * block count");
  }
  auto mr = run_restarts(space, p, budget, 0, true);
  if (mr.winner) {
    const auto& run = mr.runs[*mr.winner];
    out.status = SearchStatus::Found;
    out.nodes = run.nodes;
    out.restart = *mr.winner;
    out.cqs = CandelabraSystem(groups, stem, expand(space, run.chosen));
    return out;
  }
  out.nodes = mr.runs[0].nodes;
  out.status = mr.runs[0].status == RunStatus::Exhausted ? SearchStatus::ExhaustedOptimal
                                                         : SearchStatus::BudgetExceeded;
  if (out.status == SearchStatus::ExhaustedOptimal) out.notes.push_back("no CQS of this type exists");
  return out;
}

}  // namespace qpack
