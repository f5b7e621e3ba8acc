#include "alpos/report.hpp"

#include <zlib.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "alpos/config_io.hpp"
#include "alpos/errors.hpp"
#include "alpos/svg_plot.hpp"

namespace fs = std::filesystem;

namespace alpos {
namespace {

constexpr const char* kToolVersion = "alpos 1.0.0";

std::string fmt_full(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string crc32_hex(const std::string& bytes) {
    const auto crc =
        crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
    std::ostringstream out;
    out << std::hex << std::setw(8) << std::setfill('0') << crc;
    return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp);
    }
    fs::rename(tmp, path);
}

}  // namespace

std::string crc32_hex_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return crc32_hex(buf.str());
}

std::string render_results_csv(const std::vector<RealizationResult>& results) {
    std::ostringstream out;
    out << "realization,seed,bs_count,strategy,test_set,q90_initial_m,"
           "q90_after_m,gain,k_selected,status\n";
    for (const RealizationResult& rr : results) {
        if (rr.metrics.empty()) {
            out << rr.realization << ',' << rr.seed << ',' << rr.bs_count << ','
                << strategy_name(rr.strategy) << ",,,,," << rr.k_selected << ','
                << rr.status << "\n";
            continue;
        }
        for (const TestSetMetrics& m : rr.metrics) {
            out << rr.realization << ',' << rr.seed << ',' << rr.bs_count << ','
                << strategy_name(rr.strategy) << ',' << m.test_set << ','
                << fmt_full(m.q90_initial_m) << ',' << fmt_full(m.q90_after_m)
                << ',' << fmt_full(m.gain) << ',' << rr.k_selected << ','
                << rr.status << "\n";
        }
    }
    return out.str();
}

std::string render_summary_csv(const SummaryTable& summary) {
    std::ostringstream out;
    out << "bs_count,strategy,test_set,mean_gain_pct,mean_q90_initial_m,"
           "mean_q90_after_m,n_valid\n";
    for (const SummaryRow& row : summary) {
        out << row.bs_count << ',' << strategy_name(row.strategy) << ','
            << row.test_set << ',' << fmt_full(row.mean_gain * 100.0) << ','
            << fmt_full(row.mean_q90_initial_m) << ','
            << fmt_full(row.mean_q90_after_m) << ',' << row.n_valid << "\n";
    }
    return out.str();
}

std::string render_summary_text(const SummaryTable& summary) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "bs_count" << std::setw(12)
        << "strategy" << std::setw(9) << "test" << std::right << std::setw(10)
        << "gain_%" << std::setw(12) << "q90_init_m" << std::setw(13)
        << "q90_after_m" << std::setw(8) << "n" << "\n";
    out << std::fixed << std::setprecision(1);
    for (const SummaryRow& row : summary) {
        out << std::left << std::setw(10) << row.bs_count << std::setw(12)
            << strategy_name(row.strategy) << std::setw(9) << row.test_set
            << std::right << std::setw(10) << std::setprecision(1)
            << row.mean_gain * 100.0 << std::setw(12) << std::setprecision(2)
            << row.mean_q90_initial_m << std::setw(13) << row.mean_q90_after_m
            << std::setw(8) << row.n_valid << "\n";
    }
    return out.str();
}

std::vector<RealizationResult> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw CorruptFile(path + ": empty");

    // Rows for the same (realization, bs_count, strategy) fold back into one
    // RealizationResult.
    std::vector<RealizationResult> results;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        while (cells.size() < 10) cells.push_back("");
        RealizationResult rr;
        rr.realization = std::stoi(cells[0]);
        rr.seed = std::stoull(cells[1]);
        rr.bs_count = std::stoi(cells[2]);
        rr.strategy = strategy_from_name(cells[3]);
        rr.k_selected = std::stoi(cells[8]);
        rr.status = cells[9];
        rr.valid = rr.status == "ok";
        TestSetMetrics m;
        if (!cells[4].empty()) {
            m.test_set = cells[4];
            m.q90_initial_m = std::stod(cells[5]);
            m.q90_after_m = std::stod(cells[6]);
            m.gain = std::stod(cells[7]);
        }
        if (!results.empty() && results.back().realization == rr.realization &&
            results.back().bs_count == rr.bs_count &&
            results.back().strategy == rr.strategy) {
            if (!m.test_set.empty()) results.back().metrics.push_back(m);
        } else {
            if (!m.test_set.empty()) rr.metrics.push_back(m);
            results.push_back(std::move(rr));
        }
    }
    return results;
}

RunManifest write_results(const std::vector<RealizationResult>& results,
                          const SummaryTable& summary,
                          const ExperimentConfig& cfg,
                          const std::string& out_dir) {
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.started_at = timestamp_utc();
    manifest.base_seed = cfg.base_seed;
    manifest.config_text = serialize_config(cfg);

    const std::string results_csv = render_results_csv(results);
    const std::string summary_csv = render_summary_csv(summary);
    const std::string svg = render_summary_svg(summary);

    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_atomic(path, content);
        manifest.files.emplace_back(name, crc32_hex(content));
    };
    emit("results.csv", results_csv);
    emit("summary.csv", summary_csv);
    emit("summary.svg", svg);
    emit("config.ini", manifest.config_text);
    manifest.finished_at = timestamp_utc();

    std::ostringstream mf;
    mf << "# alpos run manifest v1\n";
    mf << "tool_version = " << manifest.tool_version << "\n";
    mf << "started_at = " << manifest.started_at << "\n";
    mf << "finished_at = " << manifest.finished_at << "\n";
    mf << "base_seed = " << manifest.base_seed << "\n";
    for (const auto& [name, crc] : manifest.files)
        mf << "file " << crc << " " << name << "\n";
    write_atomic((fs::path(out_dir) / "manifest.txt").string(), mf.str());
    return manifest;
}

std::vector<std::string> verify_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open " + manifest_path);
    const fs::path dir = fs::path(manifest_path).parent_path();
    std::vector<std::string> mismatched;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string tag, crc, name;
        if (!(row >> tag >> crc)) continue;
        if (tag != "file") continue;
        std::getline(row, name);
        name = name.substr(name.find_first_not_of(' '));
        const std::string path = (dir / name).string();
        try {
            if (crc32_hex_of_file(path) != crc) mismatched.push_back(name);
        } catch (const IoError&) {
            mismatched.push_back(name);
        }
    }
    return mismatched;
}

}  // namespace alpos
