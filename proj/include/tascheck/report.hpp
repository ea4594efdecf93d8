#pragma once

// Structured run reports. A report is a tiny line-oriented text document,
// versioned with a "TASREPORT 1" header line, carrying ordered key/value
// fields followed by trace blocks (assembly sequences rendered as
// "step k: <tile> @ (x,y)" lines). The writer is canonical and the parser is
// strict, so documents survive a write -> parse -> write round trip
// byte-for-byte and stay diffable in CI.
//
// Layout:
//
//   TASREPORT 1
//   <key>: <value>          (zero or more field lines)
//   trace 1: <label>
//   step 1: <tile> @ (x,y)
//   ...
//   end trace
//   trace 2: <label>
//   ...
//
// Field lines must precede trace blocks. Trace and step numbering is
// sequential from 1; the parser rejects gaps, so a truncated or spliced
// document never parses silently. Blank lines are ignored; a trailing '\r'
// per line is tolerated for cross-platform diffs.

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "transition.hpp"
#include "verify.hpp"

namespace tascheck {

constexpr int kReportVersion = 1;

struct ReportParseError : Error {
    using Error::Error;
};

/// One witness sequence: a free-text label plus tile placements. Steps carry
/// tile names (not indices) so a parsed document stands on its own.
struct ReportTrace {
    std::string label;
    std::vector<std::pair<std::string, Coord>> steps;

    friend bool operator==(const ReportTrace&, const ReportTrace&) = default;
};

struct StructuredReport {
    std::vector<std::pair<std::string, std::string>> fields;  // order preserved
    std::vector<ReportTrace> traces;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return &v;
        return nullptr;
    }

    void set(std::string key, std::string value) {
        for (auto& [k, v] : fields)
            if (k == key) {
                v = std::move(value);
                return;
            }
        fields.emplace_back(std::move(key), std::move(value));
    }

    friend bool operator==(const StructuredReport&, const StructuredReport&) = default;
};

inline std::string format_coord(Coord c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// ── writer ──────────────────────────────────────────────────────────────────

namespace detail {

/// Field keys and trace labels are single-line by construction; fold any
/// stray control characters so the document stays line-delimited.
inline std::string single_line(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += (c == '\n' || c == '\r') ? ' ' : c;
    return out;
}

inline bool reserved_key(std::string_view key) {
    return key.rfind("trace ", 0) == 0 || key.rfind("step ", 0) == 0 ||
           key == "end trace" || key.rfind("TASREPORT", 0) == 0;
}

}  // namespace detail

inline std::string write_report(const StructuredReport& r) {
    std::ostringstream out;
    out << "TASREPORT " << kReportVersion << "\n";
    for (const auto& [key, value] : r.fields) {
        std::string k = detail::single_line(key);
        if (k.empty() || k.find(':') != std::string::npos || detail::reserved_key(k))
            throw ReportParseError("invalid field key '" + k + "'");
        out << k << ":";
        std::string v = detail::single_line(value);
        if (!v.empty()) out << " " << v;
        out << "\n";
    }
    for (size_t t = 0; t < r.traces.size(); ++t) {
        out << "trace " << (t + 1) << ":";
        std::string label = detail::single_line(r.traces[t].label);
        if (!label.empty()) out << " " << label;
        out << "\n";
        for (size_t s = 0; s < r.traces[t].steps.size(); ++s) {
            const auto& [name, loc] = r.traces[t].steps[s];
            out << "step " << (s + 1) << ": " << detail::single_line(name) << " @ "
                << format_coord(loc) << "\n";
        }
        out << "end trace\n";
    }
    return out.str();
}

// ── parser ──────────────────────────────────────────────────────────────────

namespace detail {

inline bool parse_full_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

/// Parse "(x,y)" with no interior spaces.
inline bool parse_coord(std::string_view s, Coord& out) {
    if (s.size() < 5 || s.front() != '(' || s.back() != ')') return false;
    std::string_view body = s.substr(1, s.size() - 2);
    size_t comma = body.find(',');
    if (comma == std::string_view::npos) return false;
    return parse_full_int(body.substr(0, comma), out.x) &&
           parse_full_int(body.substr(comma + 1), out.y);
}

}  // namespace detail

inline StructuredReport parse_report(const std::string& text) {
    StructuredReport r;
    auto fail = [](size_t line_no, const std::string& what) -> void {
        throw ReportParseError("line " + std::to_string(line_no) + ": " + what);
    };

    // After a "key:" or "trace k:" prefix, the value is everything past one
    // optional separating space (so empty values round-trip without trailing
    // whitespace).
    auto value_after = [](std::string_view rest) -> std::string {
        if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        return std::string(rest);
    };

    bool header_seen = false;
    bool in_trace = false;
    bool traces_started = false;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line.rfind("TASREPORT ", 0) != 0) fail(line_no, "missing TASREPORT header");
            int version = 0;
            if (!detail::parse_full_int(line.substr(10), version))
                fail(line_no, "malformed version in TASREPORT header");
            if (version != kReportVersion)
                fail(line_no, "unsupported report version " + std::to_string(version));
            header_seen = true;
            continue;
        }

        if (line == "end trace") {
            if (!in_trace) fail(line_no, "'end trace' outside a trace block");
            in_trace = false;
            continue;
        }
        if (line.rfind("trace ", 0) == 0) {
            if (in_trace) fail(line_no, "trace block opened inside a trace block");
            std::string_view rest = line.substr(6);
            size_t colon = rest.find(':');
            int number = 0;
            if (colon == std::string_view::npos ||
                !detail::parse_full_int(rest.substr(0, colon), number))
                fail(line_no, "malformed trace header");
            if (number != int(r.traces.size()) + 1)
                fail(line_no, "expected trace " + std::to_string(r.traces.size() + 1) + ", got " +
                                  std::to_string(number));
            r.traces.push_back({value_after(rest.substr(colon + 1)), {}});
            in_trace = true;
            traces_started = true;
            continue;
        }
        if (line.rfind("step ", 0) == 0) {
            if (!in_trace) fail(line_no, "step line outside a trace block");
            std::string_view rest = line.substr(5);
            size_t colon = rest.find(": ");
            int number = 0;
            if (colon == std::string_view::npos ||
                !detail::parse_full_int(rest.substr(0, colon), number))
                fail(line_no, "malformed step line");
            auto& steps = r.traces.back().steps;
            if (number != int(steps.size()) + 1)
                fail(line_no, "expected step " + std::to_string(steps.size() + 1) + ", got " +
                                  std::to_string(number));
            std::string_view body = rest.substr(colon + 2);
            size_t sep = body.rfind(" @ (");
            Coord loc{};
            if (sep == std::string_view::npos || sep == 0 ||
                !detail::parse_coord(body.substr(sep + 3), loc))
                fail(line_no, "malformed step line");
            steps.emplace_back(std::string(body.substr(0, sep)), loc);
            continue;
        }
        if (in_trace) fail(line_no, "expected a step line or 'end trace'");
        // A field line.
        size_t colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0) fail(line_no, "expected 'key: value'");
        if (traces_started) fail(line_no, "field line after a trace block");
        r.fields.emplace_back(std::string(line.substr(0, colon)),
                              value_after(line.substr(colon + 1)));
    }
    if (!header_seen) fail(1, "missing TASREPORT header");
    if (in_trace) fail(line_no, "unterminated trace block");
    return r;
}

// ── bridges from verification results ───────────────────────────────────────

inline ReportTrace trace_of(const TileAssemblySystem& sys, std::string label,
                            const std::vector<AttachmentStep>& steps) {
    ReportTrace t{std::move(label), {}};
    t.steps.reserve(steps.size());
    for (const auto& s : steps) t.steps.emplace_back(sys.tile(s.tile).name, s.loc);
    return t;
}

inline StructuredReport report_of(const TileAssemblySystem& sys, const VerificationReport& rep) {
    StructuredReport r;
    r.set("command", "verify");
    r.set("verdict", verdict_name(rep.verdict));
    r.set("surface", std::to_string(rep.surface));
    r.set("configurations-evaluated", std::to_string(rep.configurations_evaluated));
    if (rep.location) r.set("location", format_coord(*rep.location));
    if (!rep.detail.empty()) r.set("detail", rep.detail);
    if (rep.terminal) r.set("terminal-tiles", std::to_string(rep.terminal->tile_count()));
    for (const auto& w : rep.witnesses) r.traces.push_back(trace_of(sys, w.description, w.steps));
    return r;
}

}  // namespace tascheck
