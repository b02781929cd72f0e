#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace bao {

/// Outcome of one named check.  A failing report always carries a
/// counterexample payload that reproduces under fresh evaluation.
/// Elapsed time is kept for profiling but never serialized, so reports are
/// byte-identical across runs with the same inputs and seed.
struct CheckReport {
    enum class Status { pass, fail, skip };

    std::string id;
    std::string anchor;
    Status status = Status::pass;
    std::string details;
    std::string counterexample;
    std::uint64_t items = 0;
    double seconds = 0.0;

    static CheckReport passed(std::string id, std::string anchor, std::uint64_t items,
                              std::string details = "") {
        return {std::move(id), std::move(anchor), Status::pass, std::move(details), "", items, 0.0};
    }
    static CheckReport failed(std::string id, std::string anchor, std::uint64_t items,
                              std::string counterexample, std::string details = "") {
        return {std::move(id),      std::move(anchor), Status::fail, std::move(details),
                std::move(counterexample), items,       0.0};
    }
    static CheckReport skipped(std::string id, std::string anchor, std::string reason) {
        return {std::move(id), std::move(anchor), Status::skip, std::move(reason), "", 0, 0.0};
    }
};

inline const char* status_tag(CheckReport::Status s) {
    switch (s) {
    case CheckReport::Status::pass: return "PASS";
    case CheckReport::Status::fail: return "FAIL";
    case CheckReport::Status::skip: return "SKIP";
    }
    return "?";
}

inline std::string report_line(const CheckReport& r) {
    std::string line = "CHECK " + r.id + " " + status_tag(r.status) + " " + r.anchor;
    if (r.status != CheckReport::Status::skip) line += " items=" + std::to_string(r.items);
    if (!r.details.empty()) line += " " + r.details;
    if (!r.counterexample.empty()) line += " counterexample: " + r.counterexample;
    return line;
}

inline void write_reports(std::ostream& out, const std::vector<CheckReport>& reports) {
    std::size_t pass = 0, fail = 0, skip = 0;
    for (const auto& r : reports) {
        out << report_line(r) << "\n";
        switch (r.status) {
        case CheckReport::Status::pass: ++pass; break;
        case CheckReport::Status::fail: ++fail; break;
        case CheckReport::Status::skip: ++skip; break;
        }
    }
    out << "SUMMARY pass=" << pass << " fail=" << fail << " skip=" << skip << "\n";
}

inline std::string reports_to_json(const std::vector<CheckReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json obj;
        obj["id"] = r.id;
        obj["anchor"] = r.anchor;
        obj["status"] = status_tag(r.status);
        obj["details"] = r.details;
        obj["counterexample"] = r.counterexample;
        obj["items"] = r.items;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2);
}

/// 0 when nothing failed, 1 otherwise (skips do not fail a run).
inline int reports_exit_status(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports)
        if (r.status == CheckReport::Status::fail) return 1;
    return 0;
}

} // namespace bao
