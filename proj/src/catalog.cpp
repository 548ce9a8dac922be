#include "qpack/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>

namespace qpack {

namespace fs = std::filesystem;

Catalog::Catalog(fs::path root) : root_(std::move(root)) {}

fs::path Catalog::default_root() {
  if (const char* env = std::getenv("QPACK_CATALOG"); env && *env) return env;
  return "qpack-catalog";
}

fs::path Catalog::path_for(const std::string& signature) const {
  return root_ / signature_file_name(signature);
}

std::optional<std::string> signature_from_file_name(const std::string& name) {
  constexpr std::string_view ext = ".pqs";
  if (name.size() <= ext.size() || name.compare(name.size() - ext.size(), ext.size(), ext) != 0) {
    return std::nullopt;
  }
  std::string sig = name.substr(0, name.size() - ext.size());
  std::replace(sig.begin(), sig.end(), '_', ':');
  try {
    parse_signature(sig);
  } catch (const Error&) {
    return std::nullopt;
  }
  return sig;
}

std::string Catalog::add(const DesignFile& file, std::optional<std::string> signature) {
  std::string sig = signature ? *signature
                              : (file.is_cqs() ? signature_of(file.cqs()) : signature_of(file.packing()));
  auto kind = parse_signature(sig).kind;
  if ((kind == ParsedSignature::Kind::CQS) != file.is_cqs()) {
    throw Error(ErrorKind::InvalidIngredient, sig + ": design kind does not match the signature");
  }
  auto problems = file.is_cqs() ? check_against_signature(file.cqs(), sig)
                                 : check_against_signature(file.packing(), sig);
  if (!problems.empty()) {
    std::string msg = sig + " rejected:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorKind::InvalidIngredient, msg);
  }
  DesignFile stored = file;
  if (!stored.is_cqs()) {
    auto d = stored.packing().canonical();
    d.set_kind(kind == ParsedSignature::Kind::MPQS ? DesignKind::MPQSClaimed : DesignKind::HPQSClaimed);
    stored.design = std::move(d);
  }
  std::unique_lock lock(mu_);
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + root_.string() + ": " + ec.message());
  write_text_file_atomic(path_for(sig), serialize_design(stored));
  return sig;
}

std::vector<std::string> Catalog::list() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) return out;
  for (const auto& entry : fs::directory_iterator(root_, ec)) {
    if (!entry.is_regular_file()) continue;
    if (auto sig = signature_from_file_name(entry.path().filename().string())) out.push_back(*sig);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<DesignFile> Catalog::get(const std::string& signature) const {
  std::shared_lock lock(mu_);
  auto path = path_for(signature);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  return parse_design(read_text_file(path));
}

std::optional<PackingDesign> Catalog::find_packing(const std::string& signature) const {
  auto f = get(signature);
  if (!f || f->is_cqs()) return std::nullopt;
  return f->packing();
}

std::optional<CandelabraSystem> Catalog::find_cqs(const std::string& signature) const {
  auto f = get(signature);
  if (!f || !f->is_cqs()) return std::nullopt;
  return f->cqs();
}

}  // namespace qpack
