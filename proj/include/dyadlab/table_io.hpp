#pragma once

// Persistence for ComplexityTable. Binary layout:
//   "TPMTABLE 1 <L> <T> <machine> <programs>\n"
//   per record (little endian): u32 bit length, packed bits MSB first,
//   u32 min_len, u64 census numerator, u64 census denominator.
// The JSON mirror carries the same header fields and "len:hex" outputs.

#include "dyadlab/tpm.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace dyadlab::tpm {

inline constexpr int kTableFormatVersion = 1;

std::string to_binary(const ComplexityTable& table);
/// Throws ConfigError on malformed input or a machine version other than kMachineVersion.
ComplexityTable from_binary(const std::string& bytes);

nlohmann::json to_json(const ComplexityTable& table);
ComplexityTable from_json(const nlohmann::json& doc);

void save_table(const ComplexityTable& table, const std::filesystem::path& path);
ComplexityTable load_table(const std::filesystem::path& path);

}  // namespace dyadlab::tpm
