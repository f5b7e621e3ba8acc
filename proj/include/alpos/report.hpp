#pragma once

#include <string>
#include <vector>

#include "alpos/protocol.hpp"

namespace alpos {

struct RunManifest {
    std::string config_text;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;
    std::uint64_t base_seed = 0;
    std::vector<std::pair<std::string, std::string>> files;  // path, crc32 hex
};

std::string render_results_csv(const std::vector<RealizationResult>& results);
std::string render_summary_csv(const SummaryTable& summary);

// Human-readable table of mean gains in percent per (bs_count, strategy,
// test set), in the style of a normalized-gain summary.
std::string render_summary_text(const SummaryTable& summary);

std::vector<RealizationResult> read_results_csv(const std::string& path);

// Emits results.csv, summary.csv, summary.svg and manifest.txt into
// out_dir (write-temp-then-rename).
RunManifest write_results(const std::vector<RealizationResult>& results,
                          const SummaryTable& summary,
                          const ExperimentConfig& cfg,
                          const std::string& out_dir);

// Recomputes checksums of the files listed in a manifest; returns the paths
// that no longer match.
std::vector<std::string> verify_manifest(const std::string& manifest_path);

std::string crc32_hex_of_file(const std::string& path);

}  // namespace alpos
