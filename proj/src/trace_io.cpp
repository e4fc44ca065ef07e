#include "vservo/trace_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vservo/errors.hpp"
#include "vservo/numfmt.hpp"

namespace vservo::trace_io {

namespace {

void push_indexed(std::vector<std::string>& cols, const std::string& stem, int n) {
    for (int i = 1; i <= n; ++i) {
        cols.push_back(stem + std::to_string(i));
    }
}

} // namespace

std::vector<std::string> csv_columns(const sim::Scenario& scn) {
    const int m1 = kinreg::depth_param_count(scn.arm);
    const int m2 = kinreg::perp_param_count(scn.arm);
    std::vector<std::string> cols;
    cols.push_back("schema");
    cols.push_back("t");
    push_indexed(cols, "q", 3);
    push_indexed(cols, "qd", 3);
    cols.push_back("x1");
    cols.push_back("x2");
    cols.push_back("xdot1");
    cols.push_back("xdot2");
    cols.push_back("xd1");
    cols.push_back("xd2");
    cols.push_back("dx1");
    cols.push_back("dx2");
    cols.push_back("z");
    cols.push_back("z_hat");
    cols.push_back("z_hat_dot");
    push_indexed(cols, "cmd", 3);
    push_indexed(cols, "s", 3);
    push_indexed(cols, "ad", kNumDynParams);
    push_indexed(cols, "az", m1);
    push_indexed(cols, "azp", m2);
    for (const char* name : {"Vs", "Vs_err", "V1", "V2", "xu", "dxu", "diss", "v2rhs",
                             "I_xu", "I_dxu", "I_diss", "I_v2"}) {
        cols.emplace_back(name);
    }
    return cols;
}

void write_csv(std::ostream& out, const sim::Trace& tr) {
    const auto cols = csv_columns(tr.scenario);
    for (size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << "\n";
    std::vector<double> vals;
    vals.reserve(cols.size());
    for (const sim::Row& r : tr.rows) {
        vals.clear();
        vals.push_back(kSchemaVersion);
        vals.push_back(r.t);
        for (int i = 0; i < 3; ++i) {
            vals.push_back(r.q[i]);
        }
        for (int i = 0; i < 3; ++i) {
            vals.push_back(r.qd[i]);
        }
        vals.push_back(r.x[0]);
        vals.push_back(r.x[1]);
        vals.push_back(r.xdot[0]);
        vals.push_back(r.xdot[1]);
        vals.push_back(r.x_d[0]);
        vals.push_back(r.x_d[1]);
        vals.push_back(r.dx[0]);
        vals.push_back(r.dx[1]);
        vals.push_back(r.z);
        vals.push_back(r.z_hat);
        vals.push_back(r.z_hat_dot);
        for (int i = 0; i < 3; ++i) {
            vals.push_back(r.command[i]);
        }
        for (int i = 0; i < 3; ++i) {
            vals.push_back(r.s[i]);
        }
        for (long i = 0; i < r.a_d.size(); ++i) {
            vals.push_back(r.a_d[i]);
        }
        for (long i = 0; i < r.a_z.size(); ++i) {
            vals.push_back(r.a_z[i]);
        }
        for (long i = 0; i < r.a_z_perp.size(); ++i) {
            vals.push_back(r.a_z_perp[i]);
        }
        for (double v : {r.Vs, r.Vs_err, r.V1, r.V2, r.xu, r.dxu, r.diss, r.v2rhs, r.I_xu,
                         r.I_dxu, r.I_diss, r.I_v2}) {
            vals.push_back(v);
        }
        for (size_t i = 0; i < vals.size(); ++i) {
            out << (i ? "," : "") << format_double(vals[i]);
        }
        out << "\n";
    }
}

void write_csv_file(const std::string& path, const sim::Trace& tr) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    write_csv(out, tr);
}

std::string to_csv(const sim::Trace& tr) {
    std::ostringstream out;
    write_csv(out, tr);
    return out.str();
}

long Table::col(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return static_cast<long>(i);
        }
    }
    return -1;
}

long Table::need(const std::string& name) const {
    const long i = col(name);
    if (i < 0) {
        throw ConfigError("trace is missing column '" + name + "'");
    }
    return i;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

Table read_table(std::istream& in) {
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("trace is empty (no header row)");
    }
    t.columns = split_csv_line(line);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != t.columns.size()) {
            throw ConfigError("trace line " + std::to_string(lineno) + ": expected " +
                              std::to_string(t.columns.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (size_t i = 0; i < fields.size(); ++i) {
            char* end = nullptr;
            row[i] = std::strtod(fields[i].c_str(), &end);
            if (end != fields[i].c_str() + fields[i].size() || fields[i].empty()) {
                throw ConfigError("trace line " + std::to_string(lineno) +
                                  ": field '" + fields[i] + "' is not numeric");
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open trace '" + path + "'");
    }
    return read_table(in);
}

} // namespace vservo::trace_io
