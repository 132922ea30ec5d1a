#ifndef SEQIHR_TOOLS_MANIFEST_HPP
#define SEQIHR_TOOLS_MANIFEST_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace seqihr::tools {

inline constexpr const char* kToolVersion = "0.3.0";

/// FNV-1a 64-bit over the file bytes; "missing" when unreadable.
inline std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return "missing";
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Every output directory gets a manifest sufficient to reproduce the run:
/// tool version, exact command, the fully resolved config, input hashes.
inline void write_manifest(const std::string& out_dir, const std::string& command_line,
                           const std::string& resolved_config,
                           const std::vector<std::string>& input_files) {
    std::ofstream out(out_dir + "/run_manifest.txt");
    out << "tool_version = " << kToolVersion << "\n";
    out << "command = " << command_line << "\n";
    for (const auto& path : input_files)
        out << "input " << path << " = " << file_hash(path) << "\n";
    out << "# resolved configuration\n";
    std::istringstream cfg(resolved_config);
    std::string line;
    while (std::getline(cfg, line))
        out << line << "\n";
}

} // namespace seqihr::tools

#endif
