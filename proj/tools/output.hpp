#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace sp4::cli {

std::string fmt(double v);
std::string fmt(std::complex<double> z);

struct Record {
    std::vector<std::pair<std::string, std::string>> fields;

    Record& add(const std::string& key, const std::string& v);
    Record& add(const std::string& key, const char* v) { return add(key, std::string(v)); }
    Record& add(const std::string& key, double v) { return add(key, fmt(v)); }
    Record& add(const std::string& key, std::complex<double> v) { return add(key, fmt(v)); }
    Record& add(const std::string& key, int v) { return add(key, std::to_string(v)); }
    Record& add(const std::string& key, long long v) { return add(key, std::to_string(v)); }
    Record& add(const std::string& key, bool v) { return add(key, std::string(v ? "true" : "false")); }
};

// key: value per line, records separated by a blank line.
std::string to_text(const std::vector<Record>& records);

std::string csv_field(const std::string& s);
// Consecutive records with the same keys form one table; tables are separated by a blank line.
std::string to_csv(const std::vector<Record>& records);

}  // namespace sp4::cli
