#include "lfv/report.hpp"

#include <cstdio>

namespace lfv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ReportWriter::add(const std::string& key, const std::string& value) {
    body_ += key;
    body_ += '=';
    body_ += value;
    body_ += '\n';
}

void ReportWriter::add(const std::string& key, double value) { add(key, format_double(value)); }
void ReportWriter::add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
void ReportWriter::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void ReportWriter::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

void ReportWriter::add_complex(const std::string& key_prefix, std::complex<double> value) {
    add(key_prefix + "_re", value.real());
    add(key_prefix + "_im", value.imag());
}

std::string ReportWriter::str(bool pass) const {
    return body_ + "pass=" + (pass ? "true" : "false") + "\n";
}

} // namespace lfv
