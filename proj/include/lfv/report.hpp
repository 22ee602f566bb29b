#ifndef LFV_REPORT_HPP
#define LFV_REPORT_HPP

#include <complex>
#include <cstdint>
#include <string>

namespace lfv {

// Fixed float formatting so identical runs produce byte-identical reports.
std::string format_double(double v);

// Accumulates "key=value" lines in emission order, final line "pass=...".
class ReportWriter {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::int64_t value);
    void add(const std::string& key, int value);
    void add(const std::string& key, bool value);
    void add_complex(const std::string& key_prefix, std::complex<double> value);
    std::string str(bool pass) const;

private:
    std::string body_;
};

} // namespace lfv

#endif
