#include "artlang/manifest.hpp"

#include <fstream>
#include <stdexcept>

namespace artlang {

#ifndef ARTLANG_VERSION
#define ARTLANG_VERSION "0.1.0"
#endif

std::string tool_version() { return "artlang " ARTLANG_VERSION; }

void write_manifest(const std::filesystem::path& path,
                    const nlohmann::ordered_json& manifest) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write manifest '" + path.string() + "'");
  out << manifest.dump(2) << '\n';
  if (!out)
    throw std::runtime_error("failed writing manifest '" + path.string() +
                             "'");
}

nlohmann::ordered_json read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read manifest '" + path.string() + "'");
  return nlohmann::ordered_json::parse(in);
}

}  // namespace artlang
