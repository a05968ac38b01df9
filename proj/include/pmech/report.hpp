#pragma once

#include <string>
#include <vector>

namespace pmech {

struct CaseResult {
    std::string id;
    std::string tag;    // name of the identity being checked
    int criterion = 0;  // acceptance criterion number, 0 = supporting check
    bool pass = false;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
};

struct Report {
    std::string suite;
    std::vector<CaseResult> cases;
    double wall_seconds = 0.0;

    bool pass() const {
        for (const auto& c : cases)
            if (!c.pass) return false;
        return true;
    }
};

std::string reports_to_json(const std::vector<Report>& reports);
std::string reports_to_csv(const std::vector<Report>& reports);

// RFC-4180-style CSV writer: 17 significant digits, '.' decimal separator,
// fields quoted when needed. Rows are written in a fixed order so identical
// configs and seeds produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& fields);
    std::string str() const;

    static std::string num(double v);
    static std::string num(int v);

  private:
    static std::string quote(const std::string& s);
    std::string out_;
    std::size_t width_;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

}  // namespace pmech
