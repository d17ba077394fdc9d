#include "qnls/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qnls {

namespace {

void dump(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(depth * indent, ' ');
    const std::string pad1((depth + 1) * indent, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad1 + json(it.key()).dump() + ": ";
                dump(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad1;
                dump(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            if (std::isnan(v)) {
                out += "\"nan\"";
            } else if (std::isinf(v)) {
                out += v > 0 ? "\"inf\"" : "\"-inf\"";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out += buf;
            }
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_deterministic(const json& j, int indent) {
    std::string out;
    dump(j, out, indent, 0);
    out += "\n";
    return out;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << dump_deterministic(j);
}

} // namespace qnls
