#include "bvpforge/trace.hpp"

#include <cstdio>
#include <ostream>

namespace bvpforge {

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
    out << "k,v_a,E\n";
    char buf[80];
    for (const TraceRecord& r : trace.records) {
        std::snprintf(buf, sizeof(buf), "%d,%.15g,%.15g\n", r.k, r.value, r.residual);
        out << buf;
    }
}

void write_residual_csv(std::ostream& out, const IterationTrace& trace) {
    out << "k,residual\n";
    char buf[64];
    for (const TraceRecord& r : trace.records) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", r.k, r.residual);
        out << buf;
    }
}

}  // namespace bvpforge
