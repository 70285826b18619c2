#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <functional>

namespace sp4::cli {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s)
{
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters in number: " + s);
    return v;
}

long long parse_int(const std::string& s)
{
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters in integer: " + s);
    return v;
}

bool parse_bool(const std::string& s)
{
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("not a boolean: " + s);
}

double imag_part(const std::string& s)
{
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema()
{
    static const std::map<std::string, std::map<std::string, Setter>> s{
        {"run",
         {{"command", [](RunConfig& c, const std::string& v) { c.command = v; }},
          {"seed", [](RunConfig& c, const std::string& v) { c.seed = std::uint64_t(parse_int(v)); }},
          {"zero_root", [](RunConfig& c, const std::string& v) { c.zero_root = v; }},
          {"allow_degenerate", [](RunConfig& c, const std::string& v) { c.allow_degenerate = parse_bool(v); }}}},
        {"grid",
         {{"n", [](RunConfig& c, const std::string& v) { c.n = int(parse_int(v)); }},
          {"tau", [](RunConfig& c, const std::string& v) { c.tau = parse_complex(v); }},
          {"area", [](RunConfig& c, const std::string& v) { c.area = parse_double(v); }}}},
        {"higgs",
         {{"mu", [](RunConfig& c, const std::string& v) { c.mu = parse_complex(v); }},
          {"nu", [](RunConfig& c, const std::string& v) { c.nu = parse_complex(v); }},
          {"q2", [](RunConfig& c, const std::string& v) { c.q2 = parse_complex(v); }},
          {"genus", [](RunConfig& c, const std::string& v) { c.genus = int(parse_int(v)); }},
          {"degree",
           [](RunConfig& c, const std::string& v) {
               c.degree = int(parse_int(v));
               c.degree_set = true;
           }},
          {"preset", [](RunConfig& c, const std::string& v) { c.preset = v; }}}},
        {"solver",
         {{"tol", [](RunConfig& c, const std::string& v) { c.tol = parse_double(v); }},
          {"max_iter", [](RunConfig& c, const std::string& v) { c.max_iter = int(parse_int(v)); }},
          {"mode",
           [](RunConfig& c, const std::string& v) {
               if (v != "diagonal" && v != "full") throw std::invalid_argument("mode must be diagonal or full");
               c.full = v == "full";
           }},
          {"init", [](RunConfig& c, const std::string& v) { c.init = v; }},
          {"background", [](RunConfig& c, const std::string& v) { c.background = v; }}}},
        {"output",
         {{"dir", [](RunConfig& c, const std::string& v) { c.dir = v; }},
          {"file", [](RunConfig& c, const std::string& v) { c.file = v; }},
          {"format", [](RunConfig& c, const std::string& v) { c.format = v; }},
          {"dump_fields", [](RunConfig& c, const std::string& v) { c.dump_fields = v; }}}},
    };
    return s;
}

}  // namespace

cplx parse_complex(const std::string& raw)
{
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty complex value");
    if (auto c = s.find(','); c != std::string::npos)
        return {parse_double(s.substr(0, c)), parse_double(s.substr(c + 1))};
    if (s.back() != 'i' && s.back() != 'j') return {parse_double(s), 0.0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, imag_part(s)};
    return {parse_double(s.substr(0, split)), imag_part(s.substr(split))};
}

RunConfig parse_config(std::istream& in, RunConfig c)
{
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, line, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) throw ConfigError(lineno, section, "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, line, "expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(lineno, key, "key outside any section");
        const auto& keys = schema().at(section);
        auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError(lineno, key, "unknown key '" + key + "' in [" + section + "]");
        try {
            it->second(c, value);
        } catch (const std::exception& e) {
            throw ConfigError(lineno, key, "bad value for '" + key + "': " + e.what());
        }
    }
    return c;
}

void set_value(RunConfig& c, const std::string& section, const std::string& key, const std::string& value)
{
    auto sec = schema().find(section);
    if (sec == schema().end()) throw std::invalid_argument("unknown section " + section);
    auto it = sec->second.find(key);
    if (it == sec->second.end()) throw std::invalid_argument("unknown key " + key);
    it->second(c, value);
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream f(path);
    if (!f) throw ConfigError(0, path, "cannot open config file " + path);
    return parse_config(f, std::move(base));
}

void validate(const RunConfig& c)
{
    if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (c.max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
    if (c.n < 8 || c.n % 2 != 0) throw std::invalid_argument("n must be even and at least 8");
    if (!(c.tau.imag() > 0.0)) throw std::invalid_argument("Im(tau) must be positive");
    if (!(c.area > 0.0)) throw std::invalid_argument("area must be positive");
    if (c.init != "zero" && c.init != "random" && c.init != "nondiagonal")
        throw std::invalid_argument("init must be zero, random or nondiagonal");
    if (c.background != "flat" && c.background != "degree")
        throw std::invalid_argument("background must be flat or degree");
    if (c.preset != "constant" && c.preset != "mu_cos") throw std::invalid_argument("preset must be constant or mu_cos");
    if (c.zero_root != "a1" && c.zero_root != "a2") throw std::invalid_argument("zero_root must be a1 or a2");
    if (!c.format.empty() && c.format != "text" && c.format != "csv")
        throw std::invalid_argument("format must be text or csv");
}

std::string output_dir(const RunConfig& c)
{
    if (const char* env = std::getenv("SP4_OUTPUT_DIR"); env && *env) return env;
    return c.dir;
}

std::string resolve_output(const RunConfig& c, const std::string& path)
{
    std::filesystem::path p(path);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(output_dir(c)) / p).string();
}

}  // namespace sp4::cli
