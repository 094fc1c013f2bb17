#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "ebt/birational.hpp"
#include "ebt/presented_group.hpp"

namespace ebt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ebt/1";
inline constexpr const char* kCodeVersion = "0.1.0";

struct CacheKey {
  std::string group;  // canonical spec, e.g. "Z/2 x Z/4"
  std::size_t n = 0;
  Variant variant = Variant::B;
  std::string version = kCodeVersion;

  bool operator==(const CacheKey&) const = default;

  /// File-system-safe name; distinct keys give distinct names.
  std::string file_name() const {
    std::string g;
    for (char c : group) {
      if (c == ' ') continue;
      g += (c == '/') ? '_' : c;
    }
    std::string v = to_string(variant);
    if (v.back() == '-') v.back() = 'm';
    return "v" + version + "-" + v + "-n" + std::to_string(n) + "-" + g + ".json";
  }
};

inline CacheKey cache_key(const AbelianGroup& g, std::size_t n, Variant v) { return {g.to_string(), n, v}; }

namespace detail {

inline Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Integer integer_from_json(const Json& j) {
  Integer x;
  if (x.set_str(j.get<std::string>(), 10) != 0) throw Error("malformed integer in cache entry");
  return x;
}

inline IntMatrix matrix_from_json(const Json& j, std::size_t size) {
  if (j.size() != size) throw Error("cache matrix has wrong shape");
  IntMatrix m(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    if (j[i].size() != size) throw Error("cache matrix has wrong shape");
    for (std::size_t k = 0; k < size; ++k) m(i, k) = integer_from_json(j[i][k]);
  }
  return m;
}

}  // namespace detail

inline Json key_to_json(const CacheKey& k) {
  return Json{{"group", k.group}, {"n", k.n}, {"variant", to_string(k.variant)}, {"version", k.version}};
}

/// Generators, sparse relations and the Smith data (U, U^-1, diagonal) of a presentation.
inline Json serialize_presentation(const CacheKey& key, const PresentedAbelianGroup& p) {
  const auto& snf = p.smith();
  if (!snf.has_u_inverse) throw Error("cannot serialize a Smith form without U^-1");
  Json columns = Json::array();
  for (const auto& col : p.relations().columns) {
    Json c = Json::array();
    for (const auto& [i, v] : col) c.push_back(Json::array({i, v.get_str()}));
    columns.push_back(std::move(c));
  }
  Json diag = Json::array();
  for (std::size_t i = 0; i < snf.rank; ++i) diag.push_back(snf.diag[i].get_str());
  Json out;
  out["schema"] = kSchema;
  out["key"] = key_to_json(key);
  out["generators"] = p.generator_labels();
  out["relations"] = Json{{"rows", p.relations().rows}, {"columns", std::move(columns)}};
  out["smith"] = Json{{"rank", snf.rank},
                      {"diag", std::move(diag)},
                      {"U", detail::matrix_to_json(snf.U)},
                      {"U_inverse", detail::matrix_to_json(snf.u_inverse)}};
  return out;
}

inline std::shared_ptr<const PresentedAbelianGroup> deserialize_presentation(const Json& j, const CacheKey& key) {
  if (j.value("schema", "") != kSchema) throw Error("cache entry has an unknown schema");
  if (j.at("key") != key_to_json(key)) throw Error("cache entry key mismatch");
  auto labels = j.at("generators").get<std::vector<std::string>>();
  SparseMatrix rel;
  rel.rows = j.at("relations").at("rows").get<std::size_t>();
  for (const auto& c : j.at("relations").at("columns")) {
    SparseColumn col;
    for (const auto& e : c) col.emplace_back(e.at(0).get<std::size_t>(), detail::integer_from_json(e.at(1)));
    rel.columns.push_back(std::move(col));
  }
  const auto& s = j.at("smith");
  SmithForm<Integer> snf;
  snf.rank = s.at("rank").get<std::size_t>();
  snf.U = detail::matrix_from_json(s.at("U"), labels.size());
  snf.u_inverse = detail::matrix_from_json(s.at("U_inverse"), labels.size());
  snf.has_v = false;
  snf.diag.assign(std::min(rel.rows, rel.cols()), Integer(0));
  if (s.at("diag").size() != snf.rank || snf.rank > snf.diag.size()) throw Error("cache entry has a bad diagonal");
  for (std::size_t i = 0; i < snf.rank; ++i) snf.diag[i] = detail::integer_from_json(s.at("diag")[i]);
  return std::make_shared<const PresentedAbelianGroup>(std::move(labels), std::move(rel), std::move(snf));
}

inline bool same_presentation(const PresentedAbelianGroup& a, const PresentedAbelianGroup& b) {
  const auto &x = a.smith(), &y = b.smith();
  return a.generator_labels() == b.generator_labels() && a.relations().rows == b.relations().rows &&
         a.relations().columns == b.relations().columns && x.rank == y.rank && x.diag == y.diag && x.U == y.U &&
         x.u_inverse == y.u_inverse;
}

/// Writes via a temporary file in the same directory, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename cache entry into " + path.string());
  }
}

/// $XDG_CACHE_HOME/ebt, else $HOME/.cache/ebt, else empty.
inline std::filesystem::path default_cache_dir() {
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "ebt";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "ebt";
  return {};
}

struct DiskCacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t verified = 0;
};

/// Presented groups backed by JSON files in a directory. With `verify`, every
/// hit is recomputed and must match the stored entry exactly.
class DiskCache {
 public:
  DiskCache(std::filesystem::path dir, bool verify) : dir_(std::move(dir)), verify_(verify) {}

  BirationalPtr get(const AbelianGroup& g, std::size_t n, Variant v) {
    const CacheKey key = cache_key(g, n, v);
    const auto path = dir_ / key.file_name();
    BirationalPtr group;
    const auto loaded = load(path, key);
    if (loaded) {
      try {
        group = std::make_shared<const BirationalGroup>(g, n, v, *loaded);
      } catch (const Error&) {
        group = nullptr;  // generator labels disagree with the symbol basis
      }
    }
    if (group) {
      ++stats_.hits;
      if (verify_) {
        const BirationalGroup fresh(g, n, v);
        if (!same_presentation(*fresh.presented(), **loaded)) {
          throw Error("cache entry " + path.string() + " differs from recomputation");
        }
        ++stats_.verified;
      }
      return group;
    }
    ++stats_.misses;
    group = std::make_shared<const BirationalGroup>(g, n, v);
    write_atomic(path, serialize_presentation(key, *group->presented()).dump() + "\n");
    return group;
  }

  const DiskCacheStats& stats() const { return stats_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  static std::optional<GroupPtr> load(const std::filesystem::path& path, const CacheKey& key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      return deserialize_presentation(Json::parse(buf.str()), key);
    } catch (const std::exception&) {
      return std::nullopt;  // unreadable entries are rebuilt and overwritten
    }
  }

  std::filesystem::path dir_;
  bool verify_;
  DiskCacheStats stats_;
};

}  // namespace ebt
