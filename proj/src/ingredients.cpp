#include "qpack/ingredients.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>

#include "qpack/assets.hpp"
#include "qpack/bounds.hpp"
#include "qpack/construct.hpp"
#include "qpack/design_io.hpp"
#include "qpack/search.hpp"
#include "qpack/verify.hpp"

namespace qpack {

namespace {

std::uint32_t sig_number(std::string_view tok, std::string_view whole) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::InvalidIngredient, "malformed signature '" + std::string(whole) + "'");
  }
  return v;
}

std::vector<Point> top_points(std::uint32_t n, std::uint32_t h) {
  std::vector<Point> out;
  for (Point p = n - h; p < n; ++p) out.push_back(p);
  return out;
}

constexpr std::uint32_t kSmallSearchOrder = 8;

/// Exact search, single deterministic restart; instant for these orders.
std::optional<PackingDesign> small_search(std::uint32_t n, const std::optional<std::vector<Point>>& hole) {
  BigInt target = johnson_bound(n) - (hole ? johnson_bound(hole->size()) : BigInt(0));
  SearchBudget budget;
  budget.restarts = 1;
  budget.node_limit = 10'000'000;
  auto outcome = backtrack_max_packing_serial({n, to_u64(target), hole, std::nullopt}, budget);
  if (outcome.status != SearchStatus::Found) return std::nullopt;
  return PackingDesign(n, outcome.design->blocks(), hole,
                       hole ? DesignKind::HPQSClaimed : DesignKind::MPQSClaimed);
}

}  // namespace

ParsedSignature parse_signature(std::string_view signature) {
  ParsedSignature out;
  auto colon = signature.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::InvalidIngredient, "malformed signature '" + std::string(signature) + "'");
  }
  auto head = signature.substr(0, colon);
  auto rest = signature.substr(colon + 1);
  if (head == "MPQS") {
    out.kind = ParsedSignature::Kind::MPQS;
    out.order = sig_number(rest, signature);
  } else if (head == "HPQS") {
    out.kind = ParsedSignature::Kind::HPQS;
    auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) {
      throw Error(ErrorKind::InvalidIngredient, "HPQS signature needs order and hole size");
    }
    out.order = sig_number(rest.substr(0, c2), signature);
    out.hole = sig_number(rest.substr(c2 + 1), signature);
    if (out.hole > out.order) throw Error(ErrorKind::InvalidIngredient, "hole larger than design");
  } else if (head == "CQS") {
    out.kind = ParsedSignature::Kind::CQS;
    out.type = std::string(rest);
    auto c2 = rest.rfind(':');
    if (c2 == std::string_view::npos || c2 == 0) {
      throw Error(ErrorKind::InvalidIngredient, "CQS signature needs a type like 2.2.2:2");
    }
    sig_number(rest.substr(c2 + 1), signature);
    std::string_view sizes = rest.substr(0, c2);
    std::size_t start = 0;
    while (start <= sizes.size()) {
      auto dot = sizes.find('.', start);
      if (dot == std::string_view::npos) dot = sizes.size();
      sig_number(sizes.substr(start, dot - start), signature);
      start = dot + 1;
    }
  } else {
    throw Error(ErrorKind::InvalidIngredient, "unknown signature kind '" + std::string(head) + "'");
  }
  return out;
}

std::string signature_file_name(std::string_view signature) {
  std::string s(signature);
  std::replace(s.begin(), s.end(), ':', '_');
  return s + ".pqs";
}

std::string signature_of(const PackingDesign& d) {
  if (d.hole() && !d.hole()->empty()) {
    return "HPQS:" + std::to_string(d.n()) + ":" + std::to_string(d.hole()->size());
  }
  return "MPQS:" + std::to_string(d.n());
}

std::string signature_of(const CandelabraSystem& c) { return "CQS:" + c.declared_type().signature(); }

std::vector<std::string> check_against_signature(const PackingDesign& d, const std::string& signature) {
  std::vector<std::string> problems;
  ParsedSignature sig;
  try {
    sig = parse_signature(signature);
  } catch (const Error& e) {
    return {e.what()};
  }
  if (sig.kind == ParsedSignature::Kind::CQS) return {"a packing cannot satisfy " + signature};
  if (d.n() != sig.order) {
    problems.push_back("has " + std::to_string(d.n()) + " points, expected " + std::to_string(sig.order));
    return problems;
  }
  auto report = check_packing(d);
  if (!report.conflicts.empty()) {
    problems.push_back(std::to_string(report.conflicts.size()) + " triples covered twice");
  }
  if (!report.hole_violations.empty()) {
    problems.push_back(std::to_string(report.hole_violations.size()) + " blocks meet the hole in 3 points");
  }
  BigInt target;
  if (sig.kind == ParsedSignature::Kind::MPQS) {
    if (d.hole() && d.hole()->size() > 2) problems.push_back("an MPQS carries no hole");
    target = johnson_bound(sig.order);
  } else {
    if (!d.hole() || *d.hole() != top_points(sig.order, sig.hole)) {
      problems.push_back("hole must be the last " + std::to_string(sig.hole) + " points");
    }
    target = johnson_bound(sig.order) - johnson_bound(sig.hole);
  }
  if (BigInt(d.blocks().size()) != target) {
    problems.push_back("has " + std::to_string(d.blocks().size()) + " blocks, expected " +
                       target.str());
  }
  return problems;
}

std::vector<std::string> check_against_signature(const CandelabraSystem& c,
                                                 const std::string& signature) {
  ParsedSignature sig;
  try {
    sig = parse_signature(signature);
  } catch (const Error& e) {
    return {e.what()};
  }
  if (sig.kind != ParsedSignature::Kind::CQS) return {"a candelabra system cannot satisfy " + signature};
  std::vector<std::string> problems;
  if (c.declared_type().signature() != sig.type) {
    problems.push_back("type " + c.declared_type().signature() + " differs from " + sig.type);
  }
  auto report = check_cqs(c);
  if (!report.ok) problems.push_back(report.summary_line());
  for (const auto& p : report.problems) problems.push_back(p);
  return problems;
}

std::optional<PackingDesign> BuiltinIngredients::find_packing(const std::string& signature) const {
  static std::recursive_mutex mu;
  static std::map<std::string, std::optional<PackingDesign>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(signature); it != cache.end()) return it->second;

  auto compute = [&]() -> std::optional<PackingDesign> {
    ParsedSignature sig;
    try {
      sig = parse_signature(signature);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (sig.kind == ParsedSignature::Kind::CQS) return std::nullopt;

    if (auto asset = embedded_asset("ingredients/" + signature_file_name(signature))) {
      auto file = parse_design(*asset);
      if (file.is_cqs()) return std::nullopt;
      return file.packing();
    }
    if (sig.kind == ParsedSignature::Kind::MPQS) {
      if (sig.order < 4) return PackingDesign(sig.order, {}, std::nullopt, DesignKind::MPQSClaimed);
      if (sig.order == 4) {
        return PackingDesign(4, {Block(0, 1, 2, 3)}, std::nullopt, DesignKind::MPQSClaimed);
      }
      if (sig.order <= kSmallSearchOrder) return small_search(sig.order, std::nullopt);
      auto orders = direct_orders();
      if (std::find(orders.begin(), orders.end(), sig.order) == orders.end()) return std::nullopt;
      try {
        return build_mpqs(sig.order, *this).design;
      } catch (const MissingIngredient&) {
        return std::nullopt;
      }
    }
    // Holey designs: trivial ones, or a direct construction without its subdesign.
    auto hole = top_points(sig.order, sig.hole);
    if (sig.order < 4 || sig.hole == sig.order) {
      return PackingDesign(sig.order, {}, hole, DesignKind::HPQSClaimed);
    }
    if (sig.order <= kSmallSearchOrder) return small_search(sig.order, hole);
    auto orders = direct_orders();
    if (std::find(orders.begin(), orders.end(), sig.order) == orders.end()) return std::nullopt;
    const auto& table = construction_table(sig.order);
    if (!table.subdesign) return std::nullopt;
    const auto pts = table.points();
    if (table.subdesign->last != pts.infinite ||
        table.subdesign->last - table.subdesign->first + 1 != sig.hole) {
      return std::nullopt;
    }
    try {
      auto built = build_mpqs(sig.order, *this);
      std::vector<Block> sub = built.subdesign_blocks;
      std::sort(sub.begin(), sub.end());
      std::vector<Block> rest;
      for (const auto& b : built.design.blocks()) {
        if (!std::binary_search(sub.begin(), sub.end(), b)) rest.push_back(b);
      }
      return PackingDesign(sig.order, std::move(rest), hole, DesignKind::HPQSClaimed);
    } catch (const MissingIngredient&) {
      return std::nullopt;
    }
  };
  auto result = compute();
  cache.emplace(signature, result);
  return result;
}

std::optional<CandelabraSystem> BuiltinIngredients::find_cqs(const std::string& signature) const {
  auto asset = embedded_asset("ingredients/" + signature_file_name(signature));
  if (!asset) return std::nullopt;
  auto file = parse_design(*asset);
  if (!file.is_cqs()) return std::nullopt;
  return file.cqs();
}

std::optional<PackingDesign> WithholdingSource::find_packing(const std::string& signature) const {
  if (std::find(withheld_.begin(), withheld_.end(), signature) != withheld_.end()) return std::nullopt;
  return inner_.find_packing(signature);
}

std::optional<CandelabraSystem> WithholdingSource::find_cqs(const std::string& signature) const {
  if (std::find(withheld_.begin(), withheld_.end(), signature) != withheld_.end()) return std::nullopt;
  return inner_.find_cqs(signature);
}

std::optional<PackingDesign> ChainedSource::find_packing(const std::string& signature) const {
  for (const auto* s : sources_) {
    if (auto d = s->find_packing(signature)) return d;
  }
  return std::nullopt;
}

std::optional<CandelabraSystem> ChainedSource::find_cqs(const std::string& signature) const {
  for (const auto* s : sources_) {
    if (auto c = s->find_cqs(signature)) return c;
  }
  return std::nullopt;
}

const BuiltinIngredients& builtin_ingredients() {
  static const BuiltinIngredients instance;
  return instance;
}

}  // namespace qpack
