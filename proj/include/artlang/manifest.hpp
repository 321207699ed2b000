#ifndef ARTLANG_MANIFEST_HPP
#define ARTLANG_MANIFEST_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

namespace artlang {

// "artlang <version>"; written into every manifest for provenance.
std::string tool_version();

void write_manifest(const std::filesystem::path& path,
                    const nlohmann::ordered_json& manifest);
nlohmann::ordered_json read_manifest(const std::filesystem::path& path);

}  // namespace artlang

#endif  // ARTLANG_MANIFEST_HPP
