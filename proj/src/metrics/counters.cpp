#include "s25/counters.hpp"

#include <sstream>

namespace s25 {

const char* to_string(Array a) {
    switch (a) {
        case Array::UCur: return "u_cur";
        case Array::UPrev: return "u_prev";
        case Array::Velocity: return "velocity";
        case Array::Eta: return "eta";
        case Array::UNext: return "u_next";
        case Array::Scratch: return "scratch";
        case Array::Count_: break;
    }
    return "?";
}

std::uint64_t CounterReport::total_loads() const {
    std::uint64_t s = 0;
    for (auto v : loads) s += v;
    return s;
}

std::uint64_t CounterReport::total_stores() const {
    std::uint64_t s = 0;
    for (auto v : stores) s += v;
    return s;
}

std::uint64_t CounterReport::global_accesses() const {
    return all_accesses() - load(Array::Scratch) - store(Array::Scratch);
}

CounterReport& CounterReport::operator+=(const CounterReport& o) {
    for (std::size_t i = 0; i < kArrayCount; ++i) {
        loads[i] += o.loads[i];
        stores[i] += o.stores[i];
    }
    flops += o.flops;
    cells += o.cells;
    semi_axis_loads += o.semi_axis_loads;
    semi_axis_stores += o.semi_axis_stores;
    return *this;
}

std::string describe(const CounterReport& r) {
    std::ostringstream os;
    os << "cells=" << r.cells << " flops=" << r.flops;
    for (std::size_t i = 0; i < kArrayCount; ++i) {
        if (r.loads[i] == 0 && r.stores[i] == 0) continue;
        os << ' ' << to_string(Array(i)) << "[ld=" << r.loads[i] << " st=" << r.stores[i] << ']';
    }
    if (r.semi_axis_loads || r.semi_axis_stores)
        os << " semi[ld=" << r.semi_axis_loads << " st=" << r.semi_axis_stores << ']';
    return os.str();
}

namespace counting {

CounterReport& sink() {
    thread_local CounterReport report;
    return report;
}

}  // namespace counting

}  // namespace s25
