#include "homalg/instance_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace homalg::io {

namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

MatZN matrix_from_json(const Json& j, Int n, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array() || j.size() != rows) fail(what + ": expected " + std::to_string(rows) + " rows");
  MatZN m(n, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail(what + ": row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number_integer()) fail(what + ": non-integer entry");
      Int v = j[r][c].get<Int>();
      if (v < 0 || v >= n) fail(what + ": entry outside [0, N)");
      m.set(r, c, v);
    }
  }
  return m;
}

FPModule module_from_json(const Json& j, Int n, const std::string& what) {
  if (!j.is_object() || !j.contains("gens")) fail(what + ": module needs 'gens'");
  if (j.contains("modulus")) n = j["modulus"].get<Int>();
  if (n < 2) fail(what + ": modulus must be at least 2");
  auto gens = j["gens"].get<std::size_t>();
  Json rels = j.value("relations", Json::array());
  return FPModule(n, gens, matrix_from_json(rels, n, rels.size(), gens, what));
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const Json& key, const std::string& what) {
  if (!key.is_string()) fail(what + ": expected a name");
  auto it = m.find(key.get<std::string>());
  if (it == m.end()) fail(what + ": unknown name '" + key.get<std::string>() + "'");
  return it->second;
}

OJson matrix_out(const MatZN& m) {
  OJson rows = OJson::array();
  for (const Row& r : m.row_list()) rows.push_back(r);
  return rows;
}

OJson module_out(const FPModule& m) {
  OJson j;
  j["modulus"] = m.modulus();
  j["gens"] = m.ngens();
  j["relations"] = matrix_out(m.relations());
  j["invariant_factors"] = invariant_factors(m);
  return j;
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(std::string("instance: ") + e.what());
  }
  InstanceFile out;
  try {
    if (j.contains("ring")) {
      out.nprime = j["ring"].value("nprime", Int{0});
      out.n = j["ring"].value("n", Int{0});
    }
    Int n = out.n ? out.n : out.nprime;
    // value() returns a copy; keep each section alive for the loops below.
    const Json modules_j = j.value("modules", Json::object());
    const Json maps_j = j.value("maps", Json::object());
    const Json covers_j = j.value("covers", Json::array());
    const Json two_extensions_j = j.value("two_extensions", Json::object());
    const Json butterflies_j = j.value("butterflies", Json::object());
    for (auto& [name, mj] : modules_j.items())
      out.modules.emplace(name, module_from_json(mj, n, "module " + name));
    for (auto& [name, fj] : maps_j.items()) {
      const FPModule& s = lookup(out.modules, fj["source"], "map " + name);
      const FPModule& t = lookup(out.modules, fj["target"], "map " + name);
      if (s.modulus() != t.modulus()) fail("map " + name + ": modulus mismatch");
      MatZN m = matrix_from_json(fj["matrix"], t.modulus(), s.ngens(), t.ngens(), "map " + name);
      try {
        out.maps.emplace(name, ModuleMap(s, t, m));
      } catch (const std::invalid_argument& e) {
        fail("map " + name + ": " + e.what());
      }
    }
    for (const auto& cj : covers_j) {
      Cover c{lookup(out.modules, cj["target"], "cover"), {}};
      for (const auto& f : cj["maps"]) c.family.push_back(lookup(out.maps, f, "cover"));
      out.covers.push_back(std::move(c));
    }
    for (auto& [name, tj] : two_extensions_j.items()) {
      const std::string w = "2-extension " + name;
      try {
        out.two_extensions.emplace(name, make_two_extension(lookup(out.maps, tj["a"], w),
                                                            lookup(out.maps, tj["b"], w),
                                                            lookup(out.maps, tj["c"], w)));
      } catch (const ParseError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        fail(w + ": " + e.what());
      }
    }
    for (auto& [name, bj] : butterflies_j.items()) {
      const std::string w = "butterfly " + name;
      out.butterflies.emplace(
          name, Butterfly{lookup(out.two_extensions, bj["source"], w),
                          lookup(out.two_extensions, bj["target"], w), lookup(out.maps, bj["nw"], w),
                          lookup(out.maps, bj["sw"], w), lookup(out.maps, bj["ne"], w),
                          lookup(out.maps, bj["se"], w)});
    }
  } catch (const Json::exception& e) {
    fail(std::string("instance: ") + e.what());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out.flush()) throw IoError("write failed for " + path);
}

InstanceFile load_instance(const std::string& path) { return parse_instance(read_file(path)); }

FPModule parse_module(const std::string& s, Int n) {
  if (std::filesystem::is_regular_file(s)) {
    Json j;
    try {
      j = Json::parse(read_file(s));
    } catch (const Json::exception& e) {
      fail(s + ": " + e.what());
    }
    return module_from_json(j, n, s);
  }
  if (s == "0") return FPModule::zero(n);
  if (s.rfind("free:", 0) == 0) return FPModule::free(n, std::stoul(s.substr(5)));
  std::vector<FPModule> parts;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    Int d = 0;
    try {
      d = std::stoll(tok);
    } catch (const std::exception&) {
      fail("module literal '" + s + "': expected orders like 2,4");
    }
    if (d < 1 || n % d != 0) fail("module literal '" + s + "': " + tok + " does not divide " + std::to_string(n));
    parts.push_back(FPModule::cyclic(n, d));
  }
  if (parts.empty()) fail("empty module literal");
  return parts.size() == 1 ? parts[0] : direct_sum(parts).module;
}

MatZN parse_matrix(const std::string& text, Int n) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(std::string("matrix: ") + e.what());
  }
  if (!j.is_array()) fail("matrix: expected a list of rows");
  std::size_t cols = j.empty() ? 0 : j[0].size();
  return matrix_from_json(j, n, j.size(), cols, "matrix");
}

std::string module_json(const FPModule& m) { return module_out(m).dump(); }

std::string butterfly_json(const Butterfly& b) {
  OJson j;
  j["Q"] = module_out(b.Q());
  j["nw"] = matrix_out(b.nw.matrix());
  j["sw"] = matrix_out(b.sw.matrix());
  j["ne"] = matrix_out(b.ne.matrix());
  j["se"] = matrix_out(b.se.matrix());
  return j.dump(2);
}

}  // namespace homalg::io
