#include "gridcast/mps.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "gridcast/errors.hpp"

namespace gridcast {
namespace {

std::string squash(const std::string& name) {
    std::string out;
    for (char c : name) {
        unsigned char u = static_cast<unsigned char>(c);
        out.push_back((std::isalnum(u) || c == '_') ? c : '_');
    }
    if (out.size() > 8) out.resize(8);
    if (out.empty()) out = "X";
    return out;
}

std::string claim(std::string base, std::set<std::string>& used) {
    if (used.insert(base).second) return base;
    for (long n = 2;; ++n) {
        std::string tag = std::to_string(n);
        std::string head = base.substr(0, 8 - tag.size());
        std::string cand = head + tag;
        if (used.insert(cand).second) return cand;
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12G", v);
    return buf;
}

void put(std::ofstream& os, const std::string& f1, const std::string& f2,
         const std::string& f3 = "", const std::string& f4 = "") {
    char buf[128];
    if (f3.empty()) {
        std::snprintf(buf, sizeof buf, " %-2s %-8s", f1.c_str(), f2.c_str());
    } else if (f4.empty()) {
        std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s", f1.c_str(),
                      f2.c_str(), f3.c_str());
    } else {
        std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s  %s", f1.c_str(),
                      f2.c_str(), f3.c_str(), f4.c_str());
    }
    os << buf << '\n';
}

}  // namespace

MpsNames mps_names(const LpProblem& p) {
    MpsNames out;
    std::set<std::string> rows_used{"COST"};
    std::set<std::string> cols_used;
    out.rows.reserve(p.rows().size());
    for (const auto& r : p.rows()) out.rows.push_back(claim(squash(r.name), rows_used));
    out.cols.reserve(p.variables().size());
    for (const auto& v : p.variables())
        out.cols.push_back(claim(squash(v.name), cols_used));
    return out;
}

void export_interchange(const LpProblem& p, const std::string& path) {
    p.validate();
    MpsNames names = mps_names(p);
    std::ofstream os(path);
    if (!os) throw InputError("cannot write " + path);

    os << "NAME          GRIDCAST\n";
    os << "ROWS\n";
    put(os, "N", "COST");
    for (std::size_t i = 0; i < p.rows().size(); ++i) {
        const char* s = p.rows()[i].sense == RowSense::eq   ? "E"
                        : p.rows()[i].sense == RowSense::le ? "L"
                                                          : "G";
        put(os, s, names.rows[i]);
    }

    os << "COLUMNS\n";
    // Per-variable coefficient lists, rebuilt from the row-wise storage.
    std::vector<std::vector<std::pair<std::size_t, double>>> by_col(
        p.variables().size());
    for (std::size_t r = 0; r < p.rows().size(); ++r)
        for (const auto& e : p.rows()[r].entries)
            by_col[e.var].push_back({r, e.coeff});
    for (std::size_t j = 0; j < p.variables().size(); ++j) {
        if (p.variables()[j].cost != 0.0)
            put(os, "", names.cols[j], "COST", num(p.variables()[j].cost));
        for (const auto& [r, v] : by_col[j])
            put(os, "", names.cols[j], names.rows[r], num(v));
    }

    os << "RHS\n";
    for (std::size_t r = 0; r < p.rows().size(); ++r)
        if (p.rows()[r].rhs != 0.0)
            put(os, "", "RHS", names.rows[r], num(p.rows()[r].rhs));

    os << "BOUNDS\n";
    for (std::size_t j = 0; j < p.variables().size(); ++j) {
        const auto& v = p.variables()[j];
        bool has_up = v.upper < lp_inf;
        if (has_up && v.lower == v.upper) {
            put(os, "FX", "BND", names.cols[j], num(v.lower));
            continue;
        }
        if (v.lower != 0.0) put(os, "LO", "BND", names.cols[j], num(v.lower));
        if (has_up) put(os, "UP", "BND", names.cols[j], num(v.upper));
    }
    os << "ENDATA\n";
    if (!os) throw InputError("write failed for " + path);
}

}  // namespace gridcast
