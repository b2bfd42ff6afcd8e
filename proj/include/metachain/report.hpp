#pragma once

#include <string>
#include <string_view>

#include "metachain/chain.hpp"
#include "metachain/hierarchy.hpp"

namespace metachain {

inline constexpr int kReportVersion = 1;

ModelSpec parse_model(std::string_view json_text);
std::string serialize_model(const ModelSpec& spec);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::string fingerprint_hex(std::uint64_t h);

std::string report_json(const Chain& chain, const HierarchyReport& report);
std::string report_dot(const Chain& chain, const HierarchyReport& report);

}  // namespace metachain
