#pragma once

// Exact counting arithmetic for quadruple packings and candelabra systems.
// Everything is computed in arbitrary-width integers.

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "qpack/group_type.hpp"

namespace qpack {

using BigInt = boost::multiprecision::cpp_int;

/// Johnson bound J(n,4,4) = floor(n/4 floor((n-1)/3 floor((n-2)/2))), with
/// the middle floor reduced by one when n = 0 (mod 6). Zero for n < 4.
BigInt johnson_bound(std::uint64_t n);

/// (n^3 - 4n^2 + n - 18)/24, the value of J(n,4,4) on n = 11 (mod 12).
/// Throws InvalidCongruence for any other residue.
BigInt closed_form_11mod12(std::uint64_t n);

/// Block count J(g+s-1) - J(s-1) required of an HPQS(g+s-1, s-1) fill.
BigInt hpqs_target(std::uint64_t g, std::uint64_t s);

/// Number of blocks of any CQS of type t:
///   (C(v,3) - sum_G C(|G|+s,3) + (#groups - 1) C(s,3)) / 4.
/// Throws InfeasibleType when the count is not integral.
BigInt cqs_block_count(const GroupType& t);

/// Blocks through one stem point: (C(u,2) - sum_G C(|G|,2)) / 3.
BigInt cqs_stem_point_block_count(const GroupType& t);

/// The assembly total as a polynomial in u and s:
///   (u^3 + u^2(3s-7) + u(3s^2-14s+12) + s^3 - 7s^2 + 12s - 24) / 24.
/// Throws InfeasibleType when not integral.
BigInt assembly_predicted_count(const GroupType& t);

/// Assembly total summed ingredient by ingredient:
///   |B| - |B_x| + J(g_0+s-1) + sum_{i>=1} a_i (J(g_i+s-1) - J(s-1)).
/// Requires a designated group.
BigInt ingredient_sum_count(const GroupType& t);

/// s = 6 (mod 12), g_i = 0 (mod 12) for the non-designated groups, g_0 = 0 (mod 6).
bool satisfies_stem6_congruences(const GroupType& t);
/// s = g_i = 0 (mod 12) for every group, designated one included.
bool satisfies_stem0_congruences(const GroupType& t);

BigInt big_binomial(std::uint64_t n, std::uint64_t k);
std::uint64_t to_u64(const BigInt& x);

}  // namespace qpack
