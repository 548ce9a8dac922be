#pragma once

// Exhaustive checking of packings, holes, candelabra systems and leaves.
// Every check scans the full triple space; nothing is sampled.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpack/bounds.hpp"
#include "qpack/core.hpp"
#include "qpack/leave.hpp"

namespace qpack {

struct Conflict {
  Triple triple;
  /// lowest-indexed block covering the triple
  std::size_t first_block;
  std::size_t second_block;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

struct VerificationReport {
  bool ok = false;
  std::uint32_t n = 0;
  std::size_t block_count = 0;
  BigInt bound = 0;
  std::vector<Conflict> conflicts;
  std::vector<Block> hole_violations;
  std::uint64_t leave_size = 0;
  /// CQS only: transverse triples no block covers.
  std::uint64_t uncovered_required = 0;
  std::vector<std::string> problems;

  /// VERIFY ok=<bool> n=<n> blocks=<b> bound=<J> leave=<l> conflicts=<c>
  std::string summary_line() const;
  /// summary line followed by one line per conflict, violation and problem.
  std::string to_text() const;
};

/// Every triple lies in at most one block, and no block meets the design's
/// own hole (if any) in 3 or more points. OpenMP kernel.
VerificationReport check_packing(const PackingDesign& d);
/// Single-threaded reference for check_packing; identical reports.
VerificationReport check_packing_serial(const PackingDesign& d);

/// True iff no block contains 3 or more points of `hole`.
bool check_hole(const PackingDesign& d, std::span<const Point> hole);

/// Uncovered triples in increasing rank order. Throws NotAPacking on conflicts.
std::vector<Triple> compute_leave(const PackingDesign& d);
std::vector<Triple> compute_leave_serial(const PackingDesign& d);

/// |blocks| == J(n,4,4).
bool check_optimal(const PackingDesign& d);

/// Candelabra axioms: groups partition X minus the stem, blocks have size 4,
/// every transverse triple lies in exactly one block and no triple inside any
/// stem-plus-group is covered; block count equals cqs_block_count.
VerificationReport check_cqs(const CandelabraSystem& c);

namespace kernels {

std::vector<Conflict> find_conflicts_serial(std::uint32_t n, std::span<const Block> blocks);
std::vector<Conflict> find_conflicts_parallel(std::uint32_t n, std::span<const Block> blocks);

/// One byte per triple rank: 1 if some block covers it.
std::vector<std::uint8_t> coverage_serial(std::uint32_t n, std::span<const Block> blocks);
std::vector<std::uint8_t> coverage_parallel(std::uint32_t n, std::span<const Block> blocks);

std::vector<Triple> uncovered_serial(std::uint32_t n, std::span<const std::uint8_t> covered);
std::vector<Triple> uncovered_parallel(std::uint32_t n, std::span<const std::uint8_t> covered);

}  // namespace kernels

}  // namespace qpack
