#include "output.hpp"

#include <cmath>
#include <cstdio>

namespace sp4::cli {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::complex<double> z)
{
    if (z.imag() == 0.0) return fmt(z.real());
    const double im = z.imag();
    return fmt(z.real()) + (std::signbit(im) ? "-" : "+") + fmt(std::abs(im)) + "i";
}

Record& Record::add(const std::string& key, const std::string& v)
{
    fields.emplace_back(key, v);
    return *this;
}

std::string to_text(const std::vector<Record>& records)
{
    std::string out;
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (r) out += "\n";
        for (const auto& [k, v] : records[r].fields) out += k + ": " + v + "\n";
    }
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string to_csv(const std::vector<Record>& records)
{
    std::string out;
    auto keys = [](const Record& r) {
        std::vector<std::string> k;
        for (const auto& f : r.fields) k.push_back(f.first);
        return k;
    };
    std::vector<std::string> current;
    for (std::size_t r = 0; r < records.size(); ++r) {
        auto k = keys(records[r]);
        if (r == 0 || k != current) {
            if (r) out += "\r\n";
            current = k;
            for (std::size_t i = 0; i < k.size(); ++i) out += (i ? "," : "") + csv_field(k[i]);
            out += "\r\n";
        }
        const auto& f = records[r].fields;
        for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i].second);
        out += "\r\n";
    }
    return out;
}

}  // namespace sp4::cli
