#include <cerrno>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "s25/errors.hpp"
#include "s25/metrics.hpp"

namespace s25 {

void write_profile(std::ostream& os, const MachineProfile& m) {
    os << std::setprecision(17);
    os << "peak_gflops_f32=" << m.peak_gflops_f32 << '\n';
    os << "peak_gflops_f64=" << m.peak_gflops_f64 << '\n';
    for (const auto& l : m.levels) os << "bw_" << l.label << '=' << l.bytes_per_s << '\n';
}

MachineProfile read_profile(std::istream& is) {
    MachineProfile m;
    bool f32 = false, f64 = false;
    std::string line;
    std::size_t offset = 0;
    while (std::getline(is, line)) {
        const std::size_t here = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw FormatError("machine profile: expected key=value, got '" + line + "'", here);
        const std::string key = line.substr(0, eq), text = line.substr(eq + 1);
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0' || errno == ERANGE)
            throw FormatError("machine profile: bad number for " + key, here + eq + 1);
        if (key == "peak_gflops_f32") {
            m.peak_gflops_f32 = v;
            f32 = true;
        } else if (key == "peak_gflops_f64") {
            m.peak_gflops_f64 = v;
            f64 = true;
        } else if (key.rfind("bw_", 0) == 0 && key.size() > 3) {
            if (m.level(key.substr(3)))
                throw FormatError("machine profile: duplicate key " + key, here);
            m.levels.push_back({key.substr(3), v});
        } else {
            throw FormatError("machine profile: unknown key " + key, here);
        }
    }
    if (!f32 || !f64) throw ConfigError("machine profile: missing peak_gflops_f32 or peak_gflops_f64");
    m.validate();
    return m;
}

}  // namespace s25
