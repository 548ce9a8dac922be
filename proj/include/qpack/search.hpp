#pragma once

// Exact depth-first search for small packings, holey packings and candelabra
// systems. Blocks are grouped into orbits under an optional prescribed
// automorphism (trivial by default); the search walks triple orbits in colex
// order and either covers each with a block orbit or spends it from a leave
// budget of (coverable triples - 4 * target).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpack/core.hpp"
#include "qpack/group_type.hpp"
#include "qpack/permutation.hpp"

namespace qpack {

/// Which open triple orbit the search branches on next.
enum class Branching {
  /// lowest-ranked open orbit
  FirstOpen,
  /// open orbit with the fewest placeable block orbits, with forward checking
  /// of orbits that can no longer be covered
  FewestCandidates,
};

struct SearchBudget {
  /// per restart
  std::uint64_t node_limit = 100'000'000;
  /// wall clock for the whole call, seconds
  double time_limit = 300.0;
  std::uint64_t seed = 0;
  std::uint32_t restarts = 32;
  Branching branching = Branching::FewestCandidates;
};

enum class SearchStatus { Found, ExhaustedOptimal, BudgetExceeded };
std::string_view to_string(SearchStatus s);

struct SearchOutcome {
  SearchStatus status = SearchStatus::BudgetExceeded;
  /// Found: meets the target exactly. Otherwise the largest packing seen.
  std::optional<PackingDesign> design;
  std::optional<CandelabraSystem> cqs;
  /// nodes of the deciding run (the winning restart, or the proof run)
  std::uint64_t nodes = 0;
  std::uint32_t restart = 0;
  std::uint64_t seed = 0;
  std::uint64_t node_limit = 0;
  Branching branching = Branching::FewestCandidates;
  std::optional<PermutationSpec> automorphism;
  std::vector<std::string> notes;

  /// source=search seed=<s> nodes=<k> restart=<r> node_limit=<l>
  ///   branching=<rule>[ group=<cycles>]
  std::string provenance() const;
};

struct PackingProblem {
  std::uint32_t n = 0;
  std::uint64_t target = 0;
  std::optional<std::vector<Point>> hole;
  /// The search only considers packings invariant under this permutation.
  std::optional<PermutationSpec> automorphism;
};

/// Restart i > 0 shuffles candidates with restart_seed(seed, i); restart 0
/// keeps the plain colex order. Restarts run in parallel; the lowest-index Found
/// wins. Throws InvalidTarget for malformed problems.
SearchOutcome backtrack_max_packing(const PackingProblem& problem, const SearchBudget& budget);
SearchOutcome backtrack_max_packing(std::uint32_t n, std::uint64_t target,
                                    const std::optional<std::vector<Point>>& hole,
                                    const SearchBudget& budget);
/// Same search with restarts run one after another; identical outcome.
SearchOutcome backtrack_max_packing_serial(const PackingProblem& problem, const SearchBudget& budget);

/// Single pass over all blocks in seeded random order, keeping every block
/// whose triples are all uncovered and which meets the hole in at most 2 points.
PackingDesign greedy_packing(std::uint32_t n, std::uint64_t seed,
                             const std::optional<std::vector<Point>>& hole = std::nullopt);

/// Exact cover of all transverse triples. Points: groups in order from 0,
/// then the stem. Throws InfeasibleType when the block count is not integral.
SearchOutcome search_cqs(const GroupType& type, const SearchBudget& budget);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t restart_seed(std::uint64_t seed, std::uint32_t restart);

}  // namespace qpack
