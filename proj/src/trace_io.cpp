#include "qdecay/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qdecay/config_file.hpp"

namespace qdecay {

namespace {

void put(std::ostream& out, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

double field_to_double(std::string_view text, std::size_t row, const char* column)
{
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        std::ostringstream os;
        os << "trace CSV row " << row << ": bad value '" << text << "' in column " << column;
        throw std::runtime_error(os.str());
    }
    return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const DecayTrace& trace)
{
    out << kTraceHeader << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        put(out, trace.t[k]);
        out << ',';
        put(out, trace.P[k]);
        out << ',';
        if (trace.g[k]) {
            put(out, *trace.g[k]);
        }
        out << ',';
        put(out, trace.j_a[k]);
        out << ',';
        put(out, trace.norm[k]);
        out << ',';
        put(out, trace.energy[k].real());
        out << ',';
        put(out, trace.energy[k].imag());
        out << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const DecayTrace& trace)
{
    std::ofstream out(path);
    if (!out) {
        throw FileError("cannot write " + path.string());
    }
    write_trace_csv(out, trace);
    if (!out) {
        throw FileError("write failed for " + path.string());
    }
}

DecayTrace read_trace_csv(std::istream& in)
{
    static constexpr const char* columns[] = {"t", "P", "g", "j_a", "norm", "energy_re", "energy_im"};

    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("trace CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kTraceHeader) {
        throw std::runtime_error("trace CSV header mismatch: '" + line + "'");
    }

    DecayTrace trace;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 7) {
            std::ostringstream os;
            os << "trace CSV row " << row << ": expected 7 fields, got " << fields.size();
            throw std::runtime_error(os.str());
        }
        trace.t.push_back(field_to_double(fields[0], row, columns[0]));
        trace.P.push_back(field_to_double(fields[1], row, columns[1]));
        if (fields[2].empty()) {
            trace.g.emplace_back(std::nullopt);
        } else {
            trace.g.emplace_back(field_to_double(fields[2], row, columns[2]));
        }
        trace.j_a.push_back(field_to_double(fields[3], row, columns[3]));
        trace.norm.push_back(field_to_double(fields[4], row, columns[4]));
        trace.energy.emplace_back(field_to_double(fields[5], row, columns[5]),
                                  field_to_double(fields[6], row, columns[6]));
    }
    return trace;
}

DecayTrace read_trace_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FileError("cannot open trace " + path.string());
    }
    return read_trace_csv(in);
}

}  // namespace qdecay
