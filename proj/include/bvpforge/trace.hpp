#pragma once

#include <iosfwd>
#include <vector>

namespace bvpforge {

/// One iteration record. For shooting, value is the initial slope v_a^k and
/// residual is the end mismatch E_k; for scalar root-finding, value is x_k
/// and residual is F(x_k); for relaxation both carry the residual max-norm.
struct TraceRecord {
    int k = 0;
    double value = 0.0;
    double residual = 0.0;
};

struct IterationTrace {
    std::vector<TraceRecord> records;

    void add(int k, double value, double residual) {
        records.push_back({k, value, residual});
    }
    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }
    const TraceRecord& back() const { return records.back(); }
};

/// CSV with columns k,v_a,E at 15 significant digits — the shape of the
/// iteration tables this toolkit reproduces.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

/// CSV with columns k,residual at 17 significant digits (relaxation runs).
void write_residual_csv(std::ostream& out, const IterationTrace& trace);

}  // namespace bvpforge
