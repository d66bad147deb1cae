#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "nsb/blowup_monitor.hpp"

namespace nsb {

/// Shortest decimal that round-trips exactly; "inf"/"-inf"/"nan" spelled out.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline constexpr const char* series_header = "t,l2,l3,l6,linf,besov_m1_inf,dist_to_omega,kato,tv_accum";

/// series.csv: one row per node; an optional kozono_shor column is appended
/// only when the series carries it.
inline void write_series_csv(std::ostream& out, const NormSeries& s) {
    out << series_header;
    if (s.kozono_shor) out << ",kozono_shor";
    out << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.times[i]) << ',' << format_double(s.l2[i]) << ',' << format_double(s.l3[i]) << ','
            << format_double(s.l6[i]) << ',' << format_double(s.linf[i]) << ',' << format_double(s.besov_m1_inf[i])
            << ',' << format_double(s.dist_to_omega[i]) << ',' << format_double(s.kato[i]) << ','
            << format_double(s.tv_accum[i]);
        if (s.kozono_shor) out << ',' << format_double((*s.kozono_shor)[i]);
        out << '\n';
    }
}

}  // namespace nsb
