#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace casimir::cli {

using Value = std::variant<double, long long, std::string>;

// One output row; column order is insertion order.
struct Record {
    std::vector<std::pair<std::string, Value>> fields;

    void add(const std::string& key, Value v) { fields.emplace_back(key, std::move(v)); }
    const Value& at(const std::string& key) const;
};

struct SweepSpec {
    std::string variable;
    double start = 0.0, stop = 0.0;
    int points = 0;
    bool log = false;

    // "START:STOP:POINTS" with optional ":lin" or ":log".
    static SweepSpec parse(const std::string& variable, const std::string& range);
    std::vector<double> values() const;
};

// 17 significant digits; non-finite values as inf, -inf, nan.
std::string format_number(double v);

// Unit annotation for a column name ("" when it has none).
std::string unit_of(const std::string& column);

void write_csv(const std::vector<Record>& rows, std::ostream& out);
void write_json(const std::vector<Record>& rows, std::ostream& out);

// Full command line entry point. Exit codes: 0 ok, 1 input error,
// 2 convergence, capacity or conditioning failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
