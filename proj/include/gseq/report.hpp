#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gseq/io.hpp"

namespace gseq {

inline constexpr const char* version_string = "gseq 0.1.0";

/// FNV-1a, used to fingerprint input files in run records.
inline u64 fnv1a64(const std::string& data) {
    u64 h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::stringstream buf;
    buf << in.rdbuf();
    std::ostringstream hex;
    hex << std::hex << fnv1a64(buf.str());
    return hex.str();
}

inline std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Metadata tying a run to its inputs. Written as a sidecar next to the
/// output file; the output payload itself stays free of timestamps so that
/// replays with the same seed are byte-identical.
struct RunRecord {
    std::string command;
    std::map<std::string, std::string> params;
    u64 seed = 0;
    std::string version = version_string;
    std::string started;
    std::string finished;
    std::string output; // file path, or "-" for stdout
    std::map<std::string, std::string> input_checksums;

    json to_json() const {
        json j;
        j["command"] = command;
        j["params"] = params;
        j["seed"] = seed;
        j["version"] = version;
        j["started"] = started;
        j["finished"] = finished;
        j["output"] = output;
        j["input_checksums"] = input_checksums;
        return j;
    }
};

/// CSV with a fixed header, UTF-8, LF endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<std::string>& row) {
        if (row.size() != header_.size()) throw bad_size("CSV row width mismatch");
        rows_.push_back(row);
    }

    std::string str() const {
        std::ostringstream out;
        out << join(header_) << "\n";
        for (const auto& r : rows_) out << join(r) << "\n";
        return out.str();
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s += ",";
            s += cells[i];
        }
        return s;
    }
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace gseq
