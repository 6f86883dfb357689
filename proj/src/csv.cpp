// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "mcrand/error.hpp"

namespace mcrand {

OutcomeKind parse_outcome_kind(std::string_view name)
{
    if (name == "continuous") return OutcomeKind::Continuous;
    if (name == "binary") return OutcomeKind::Binary;
    if (name == "survival") return OutcomeKind::Survival;
    fail(ErrorKind::InvalidArgument, "unknown outcome kind '" + std::string(name) + "'");
}

namespace {

constexpr std::string_view kScalarHeader = "patient_id,block,institution,arm,y";
constexpr std::string_view kSurvivalHeader = "patient_id,block,institution,arm,time,event";

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what)
{
    fail(ErrorKind::InvalidData, "line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view s, std::size_t line, const char* column)
{
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        bad_line(line, std::string("column ") + column + " is not a number: '" + std::string(s) + "'");
    }
    return v;
}

long parse_integer(std::string_view s, std::size_t line, const char* column)
{
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        bad_line(line, std::string("column ") + column + " is not an integer: '" + std::string(s) + "'");
    }
    return v;
}

bool is_integer(const std::string& s)
{
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

struct RawRecord {
    int block;
    std::string institution;
    Arm arm;
    Outcome outcome;
};

}  // namespace

TrialData parse_trial_csv(std::string_view text, const CsvOptions& options)
{
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        while (pos < text.size()) {
            const auto nl = text.find('\n', pos);
            line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() : nl + 1;
            ++line_no;
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    std::string_view header;
    if (!next_line(header)) fail(ErrorKind::InvalidData, "empty CSV");
    header = trim(header);
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    std::string normalized;
    for (auto f : split(header)) normalized += std::string(f) + ",";
    if (!normalized.empty()) normalized.pop_back();

    bool survival = false;
    if (normalized == kSurvivalHeader) {
        survival = true;
    } else if (normalized != kScalarHeader) {
        fail(ErrorKind::InvalidData, "line 1: header must be '" + std::string(kScalarHeader)
                                         + "' or '" + std::string(kSurvivalHeader) + "'");
    }
    OutcomeKind kind = survival ? OutcomeKind::Survival : OutcomeKind::Continuous;
    if (options.outcome) {
        if ((*options.outcome == OutcomeKind::Survival) != survival) {
            fail(ErrorKind::InvalidData, std::string("header does not match outcome '")
                                             + to_string(*options.outcome) + "'");
        }
        kind = *options.outcome;
    }
    const std::size_t columns = survival ? 6 : 5;

    std::vector<RawRecord> records;
    std::string_view line;
    while (next_line(line)) {
        const auto f = split(line);
        if (f.size() != columns) {
            bad_line(line_no, "expected " + std::to_string(columns) + " fields, found "
                                  + std::to_string(f.size()));
        }
        RawRecord r;
        const long block = parse_integer(f[1], line_no, "block");
        if (block < 1 || block > 100000000) bad_line(line_no, "block must be a positive integer");
        r.block = static_cast<int>(block);
        if (f[2].empty()) bad_line(line_no, "empty institution label");
        r.institution = std::string(f[2]);
        if (f[3] == "A") {
            r.arm = Arm::A;
        } else if (f[3] == "B") {
            r.arm = Arm::B;
        } else {
            bad_line(line_no, "arm must be A or B, got '" + std::string(f[3]) + "'");
        }
        if (survival) {
            const double t = parse_real(f[4], line_no, "time");
            if (!(t > 0) || !std::isfinite(t)) bad_line(line_no, "survival time must be positive");
            const long e = parse_integer(f[5], line_no, "event");
            if (e != 0 && e != 1) bad_line(line_no, "event must be 0 or 1");
            r.outcome = Outcome::survival(t, e == 1);
        } else {
            const double y = parse_real(f[4], line_no, "y");
            if (!std::isfinite(y)) bad_line(line_no, "y must be finite");
            if (kind == OutcomeKind::Binary) {
                if (y != 0.0 && y != 1.0) bad_line(line_no, "binary y must be 0 or 1");
                r.outcome = Outcome::binary(static_cast<int>(y));
            } else {
                r.outcome = Outcome::continuous(y);
            }
        }
        records.push_back(std::move(r));
    }
    if (records.empty()) fail(ErrorKind::InvalidData, "CSV has no patient records");

    // Institution numbering.
    std::vector<std::string> labels;
    for (const auto& r : records) labels.push_back(r.institution);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (std::all_of(labels.begin(), labels.end(), is_integer)) {
        std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
            return std::stol(a) < std::stol(b);
        });
    }
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = static_cast<int>(k);

    int n = 0;
    if (options.block_size) {
        n = *options.block_size;
    } else {
        const int first = records.front().block;
        for (const auto& r : records) {
            if (r.block != first) break;
            ++n;
        }
    }
    int max_block = 0;
    for (const auto& r : records) max_block = std::max(max_block, r.block);
    if (options.drop_partial_final_block && n > 0) {
        const auto in_last = std::count_if(records.begin(), records.end(),
                                           [&](const RawRecord& r) { return r.block == max_block; });
        if (in_last < n && max_block > 1) {
            records.erase(std::remove_if(records.begin(), records.end(),
                                         [&](const RawRecord& r) { return r.block == max_block; }),
                          records.end());
            --max_block;
        }
    }

    TrialData data;
    data.design = {n, max_block, static_cast<int>(labels.size())};
    data.institution_labels = labels;
    std::map<int, int> seen;
    for (const auto& r : records) {
        data.patients.push_back({r.block - 1, seen[r.block]++, index[r.institution], r.arm, r.outcome});
    }
    require_valid(data);
    return data;
}

TrialData read_trial_csv(const std::string& path, const CsvOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trial_csv(buf.str(), options);
}

std::string format_trial_csv(const TrialData& data)
{
    const bool survival = outcome_kind(data) == OutcomeKind::Survival;
    std::ostringstream os;
    os << (survival ? kSurvivalHeader : kScalarHeader) << '\n';
    char buf[40];
    for (std::size_t i = 0; i < data.patients.size(); ++i) {
        const auto& p = data.patients[i];
        os << i + 1 << ',' << p.block + 1 << ',' << data.institution_label(p.institution) << ','
           << (p.arm == Arm::A ? "A" : "B") << ',';
        std::snprintf(buf, sizeof buf, "%.17g", p.outcome.value);
        os << buf;
        if (survival) os << ',' << (p.outcome.event ? 1 : 0);
        os << '\n';
    }
    return os.str();
}

}  // namespace mcrand
