#include "pmech/report.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pmech/serialize.hpp"

namespace pmech {

std::string reports_to_json(const std::vector<Report>& reports) {
    nlohmann::ordered_json root;
    root["suites"] = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : reports) {
        nlohmann::ordered_json suite;
        suite["suite"] = r.suite;
        suite["pass"] = r.pass();
        suite["wall_seconds"] = r.wall_seconds;
        suite["cases"] = nlohmann::ordered_json::array();
        for (const auto& c : r.cases) {
            nlohmann::ordered_json jc;
            jc["id"] = c.id;
            jc["tag"] = c.tag;
            jc["criterion"] = c.criterion;
            jc["status"] = c.pass ? "pass" : "fail";
            jc["measured"] = c.measured;
            jc["expected"] = c.expected;
            jc["tolerance"] = c.tolerance;
            suite["cases"].push_back(jc);
        }
        all = all && r.pass();
        root["suites"].push_back(suite);
    }
    root["pass"] = all;
    return root.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<Report>& reports) {
    CsvWriter w({"suite", "id", "tag", "criterion", "status", "measured", "expected", "tolerance"});
    for (const auto& r : reports)
        for (const auto& c : r.cases)
            w.add_row({r.suite, c.id, c.tag, CsvWriter::num(c.criterion), c.pass ? "pass" : "fail",
                       CsvWriter::num(c.measured), CsvWriter::num(c.expected), CsvWriter::num(c.tolerance)});
    return w.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) line += ',';
        line += quote(header[i]);
    }
    out_ = line + "\r\n";
}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::invalid_argument("CsvWriter: row width mismatch");
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += quote(fields[i]);
    }
    out_ += line + "\r\n";
}

std::string CsvWriter::str() const { return out_; }

std::string CsvWriter::num(double v) { return format_double(v); }
std::string CsvWriter::num(int v) { return std::to_string(v); }

std::string CsvWriter::quote(const std::string& s) {
    bool needs = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

void ensure_directory(const std::string& path) {
    if (path.empty()) return;
    std::filesystem::create_directories(path);
}

}  // namespace pmech
