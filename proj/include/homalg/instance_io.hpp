#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "homalg/butterfly.hpp"
#include "homalg/cech.hpp"

namespace homalg::io {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed or inconsistent input.
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// JSON document:
//   ring: {nprime, n}
//   modules: {name: {gens, relations: [[...]], modulus?}}   modulus defaults to n
//   maps: {name: {source, target, matrix}}
//   covers: [{target, maps: [...]}]
//   two_extensions: {name: {a, b, c}}
//   butterflies: {name: {source, target, nw, sw, ne, se}}
// Matrices are row-major with residues in [0, N).
struct InstanceFile {
  Int nprime = 0;
  Int n = 0;
  std::map<std::string, FPModule> modules;
  std::map<std::string, ModuleMap> maps;
  std::vector<Cover> covers;
  std::map<std::string, TwoExtension> two_extensions;
  std::map<std::string, Butterfly> butterflies;
};

InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);

// A path to a JSON module {gens, relations}, or a literal: "2,4" for
// Z/2 ⊕ Z/4, "free:3", or "0".
FPModule parse_module(const std::string& literal_or_path, Int n);
// "[[1,0],[0,1]]"
MatZN parse_matrix(const std::string& text, Int n);

std::string read_file(const std::string& path);
// Throws IoError if the file cannot be written.
void write_file(const std::string& path, const std::string& text);

std::string module_json(const FPModule& m);
std::string butterfly_json(const Butterfly& b);

}  // namespace homalg::io
