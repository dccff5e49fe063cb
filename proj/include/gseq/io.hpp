#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gseq/prime.hpp"
#include "gseq/rational.hpp"

namespace gseq {

using json = nlohmann::json;

struct SetFile {
    PrimeModulus p;
    std::vector<u64> elements; // distinct, reduced, sorted
};

namespace detail {

inline std::vector<u64> validate_elements(u64 P, std::vector<u64> raw, bool allow_zero) {
    for (u64& v : raw) v %= P;
    std::sort(raw.begin(), raw.end());
    if (std::adjacent_find(raw.begin(), raw.end()) != raw.end())
        throw duplicate_element("set file contains a repeated element (after reduction mod p)");
    if (!raw.empty() && raw.front() == 0 && !allow_zero)
        throw zero_element("set file contains 0 (allow-zero not set)");
    return raw;
}

} // namespace detail

/// Parse a set file: JSON {"p": int, "elements": [int, ...]} or plain text
/// (first line p, then one element per line). Rejects composite p,
/// duplicates, and 0 unless allow_zero.
inline SetFile parse_set_file(const std::string& path, bool allow_zero = false) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open set file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    u64 p_raw = 0;
    std::vector<u64> elems;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
            p_raw = j.at("p").get<u64>();
            for (const auto& e : j.at("elements")) {
                const i64 v = e.get<i64>();
                const i64 r = ((v % static_cast<i64>(p_raw)) + static_cast<i64>(p_raw)) % static_cast<i64>(p_raw);
                elems.push_back(static_cast<u64>(r));
            }
        } catch (const json::exception& ex) {
            throw parse_error(std::string("bad JSON set file: ") + ex.what());
        }
    } else {
        std::istringstream ls(text);
        if (!(ls >> p_raw)) throw parse_error("set file: missing modulus line");
        i64 v = 0;
        while (ls >> v) {
            const i64 r = ((v % static_cast<i64>(p_raw)) + static_cast<i64>(p_raw)) % static_cast<i64>(p_raw);
            elems.push_back(static_cast<u64>(r));
        }
        if (!ls.eof()) throw parse_error("set file: non-integer entry");
    }
    PrimeModulus p(p_raw); // throws not_prime
    return SetFile{p, detail::validate_elements(p_raw, std::move(elems), allow_zero)};
}

/// Ordering file: {"p": int, "ordering": [residues in listed order]}.
struct OrderingFile {
    PrimeModulus p;
    std::vector<u64> ordering;
};

inline OrderingFile parse_ordering_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open ordering file: " + path);
    json j;
    try {
        in >> j;
        PrimeModulus p(j.at("p").get<u64>());
        std::vector<u64> ord;
        for (const auto& e : j.at("ordering")) ord.push_back(e.get<u64>() % p.value());
        return OrderingFile{p, std::move(ord)};
    } catch (const json::exception& ex) {
        throw parse_error(std::string("bad ordering file: ") + ex.what());
    }
}

/// Write-then-rename so readers never observe a half-written file.
inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw parse_error("cannot write: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

/// Integers above 2^53 serialize as decimal strings (JSON number safety);
/// exact rationals as {"num", "den"}.
inline json json_int(const Int& v) {
    static const Int lo = -(Int(1) << 53), hi = Int(1) << 53;
    if (v >= lo && v <= hi) return json(v.convert_to<std::int64_t>());
    return json(v.str());
}

inline json json_rat(const Rat& r) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    return json{{"num", json_int(numerator(r))}, {"den", json_int(denominator(r))}};
}

} // namespace gseq
