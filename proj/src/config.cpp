#include "vservo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "vservo/errors.hpp"
#include "vservo/numfmt.hpp"

namespace vservo::config {

namespace {

struct RawValue {
    enum class Type { scalar, word, tuple, diag, matrix };
    Type type = Type::scalar;
    double num = 0.0;
    std::string word;
    std::vector<double> vec;
    std::vector<std::vector<double>> rows;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return s.substr(a, b - a);
}

double parse_number(const std::string& text, const std::string& where) {
    const std::string tok = trim(text);
    if (tok.empty()) {
        throw ConfigError(where + ": missing number");
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
        throw ConfigError(where + ": '" + tok + "' is not a number");
    }
    return v;
}

std::vector<std::string> split_top_level(const std::string& text, char sep,
                                         const std::string& where) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '(') {
            ++depth;
        } else if (ch == ')') {
            --depth;
            if (depth < 0) {
                throw ConfigError(where + ": unbalanced parentheses");
            }
        }
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (depth != 0) {
        throw ConfigError(where + ": unbalanced parentheses");
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_number_list(const std::string& inside, const std::string& where) {
    std::vector<double> out;
    for (const std::string& part : split_top_level(inside, ',', where)) {
        out.push_back(parse_number(part, where));
    }
    return out;
}

// expects `text` to look like head(...) and returns the parenthesized interior
std::string unwrap(const std::string& text, const std::string& head,
                   const std::string& where) {
    if (text.size() < head.size() + 2 || text.compare(0, head.size(), head) != 0 ||
        text[head.size()] != '(' || text.back() != ')') {
        throw ConfigError(where + ": malformed " + head + "(...) value");
    }
    return text.substr(head.size() + 1, text.size() - head.size() - 2);
}

RawValue parse_value(const std::string& raw, const std::string& key, int line) {
    RawValue v;
    v.line = line;
    const std::string text = trim(raw);
    const std::string where = "line " + std::to_string(line) + ", key '" + key + "'";
    if (text.empty()) {
        throw ConfigError(where + ": empty value");
    }
    if (text.rfind("diag(", 0) == 0) {
        v.type = RawValue::Type::diag;
        v.vec = parse_number_list(unwrap(text, "diag", where), where);
        return v;
    }
    if (text.rfind("mat(", 0) == 0) {
        v.type = RawValue::Type::matrix;
        const std::string inside = unwrap(text, "mat", where);
        for (const std::string& part : split_top_level(inside, ',', where)) {
            const std::string row = trim(part);
            if (row.size() < 2 || row.front() != '(' || row.back() != ')') {
                throw ConfigError(where + ": each mat(...) row must be parenthesized");
            }
            v.rows.push_back(parse_number_list(row.substr(1, row.size() - 2), where));
        }
        return v;
    }
    if (text.front() == '(') {
        if (text.back() != ')') {
            throw ConfigError(where + ": unbalanced parentheses");
        }
        v.type = RawValue::Type::tuple;
        v.vec = parse_number_list(text.substr(1, text.size() - 2), where);
        return v;
    }
    char* end = nullptr;
    const double num = std::strtod(text.c_str(), &end);
    if (end == text.c_str() + text.size()) {
        v.type = RawValue::Type::scalar;
        v.num = num;
        return v;
    }
    const bool word_ok = std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
    if (!word_ok) {
        throw ConfigError(where + ": cannot parse value '" + text + "'");
    }
    v.type = RawValue::Type::word;
    v.word = text;
    return v;
}

using RawMap = std::map<std::string, RawValue>;

void ingest_line(RawMap& map, const std::string& line, int lineno, bool allow_overwrite) {
    std::string body = line;
    if (const size_t hash = body.find('#'); hash != std::string::npos) {
        body.resize(hash);
    }
    body = trim(body);
    if (body.empty()) {
        return;
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const bool key_ok =
        !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '_' || c == '.';
        });
    if (!key_ok) {
        throw ConfigError("line " + std::to_string(lineno) + ": bad key '" + key + "'");
    }
    if (!allow_overwrite && map.count(key)) {
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                          "'");
    }
    map[key] = parse_value(body.substr(eq + 1), key, lineno);
}

const RawValue* take(RawMap& map, const std::string& key) {
    auto it = map.find(key);
    if (it == map.end()) {
        return nullptr;
    }
    it->second.used = true;
    return &it->second;
}

double as_scalar(const RawValue& v, const std::string& key) {
    if (v.type != RawValue::Type::scalar) {
        throw ConfigError("key '" + key + "': expected a scalar");
    }
    return v.num;
}

std::string as_word(const RawValue& v, const std::string& key) {
    if (v.type != RawValue::Type::word) {
        throw ConfigError("key '" + key + "': expected a bare word");
    }
    return v.word;
}

VecX as_vector(const RawValue& v, const std::string& key, int expect = -1) {
    if (v.type != RawValue::Type::tuple) {
        throw ConfigError("key '" + key + "': expected a tuple (a, b, ...)");
    }
    if (expect >= 0 && static_cast<int>(v.vec.size()) != expect) {
        throw ConfigError("key '" + key + "': expected " + std::to_string(expect) +
                          " entries, got " + std::to_string(v.vec.size()));
    }
    return Eigen::Map<const VecX>(v.vec.data(), static_cast<long>(v.vec.size()));
}

MatX as_matrix(const RawValue& v, const std::string& key, int n) {
    if (v.type == RawValue::Type::scalar) {
        return v.num * MatX::Identity(n, n);
    }
    if (v.type == RawValue::Type::diag) {
        if (static_cast<int>(v.vec.size()) != n) {
            throw ConfigError("key '" + key + "': diag(...) needs " + std::to_string(n) +
                              " entries, got " + std::to_string(v.vec.size()));
        }
        return Eigen::Map<const VecX>(v.vec.data(), n).asDiagonal();
    }
    if (v.type == RawValue::Type::matrix) {
        if (static_cast<int>(v.rows.size()) != n) {
            throw ConfigError("key '" + key + "': mat(...) needs " + std::to_string(n) +
                              " rows");
        }
        MatX m(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(v.rows[i].size()) != n) {
                throw ConfigError("key '" + key + "': mat(...) rows need " +
                                  std::to_string(n) + " entries");
            }
            for (int j = 0; j < n; ++j) {
                m(i, j) = v.rows[i][j];
            }
        }
        return m;
    }
    throw ConfigError("key '" + key + "': expected a scalar, diag(...), or mat(...)");
}

control::Kind kind_from_word(const std::string& w, const std::string& key) {
    if (w == "inverse_jacobian") {
        return control::Kind::inverse_jacobian;
    }
    if (w == "transpose_jacobian") {
        return control::Kind::transpose_jacobian;
    }
    if (w == "kinematic") {
        return control::Kind::kinematic;
    }
    throw ConfigError("key '" + key + "': unknown controller '" + w + "'");
}

const char* kind_to_word(control::Kind k) {
    switch (k) {
    case control::Kind::inverse_jacobian: return "inverse_jacobian";
    case control::Kind::transpose_jacobian: return "transpose_jacobian";
    case control::Kind::kinematic: return "kinematic";
    }
    return "?";
}

sim::Scenario apply(RawMap& map) {
    sim::Scenario scn = sim::benchmark_scenario(control::Kind::inverse_jacobian);

    const auto scalar = [&](const std::string& key, double& dst) {
        if (const RawValue* v = take(map, key)) {
            dst = as_scalar(*v, key);
        }
    };
    const auto vec3 = [&](const std::string& key, Vec3& dst) {
        if (const RawValue* v = take(map, key)) {
            dst = as_vector(*v, key, 3);
        }
    };

    if (const RawValue* v = take(map, "controller")) {
        scn.controller = kind_from_word(as_word(*v, "controller"), "controller");
    }
    scalar("duration", scn.duration);
    scalar("control_period", scn.control_period);
    scalar("substep", scn.substep);
    scalar("record_period", scn.record_period);
    if (const RawValue* v = take(map, "control_mode")) {
        const std::string w = as_word(*v, "control_mode");
        if (w == "sampled") {
            scn.control_mode = sim::ControlMode::sampled;
        } else if (w == "continuous") {
            scn.control_mode = sim::ControlMode::continuous;
        } else {
            throw ConfigError("key 'control_mode': unknown mode '" + w + "'");
        }
    }
    if (const RawValue* v = take(map, "adaptation")) {
        const std::string w = as_word(*v, "adaptation");
        if (w == "held") {
            scn.adaptation = sim::AdaptationMode::held;
        } else if (w == "continuous") {
            scn.adaptation = sim::AdaptationMode::continuous;
        } else {
            throw ConfigError("key 'adaptation': unknown mode '" + w + "'");
        }
    }
    if (const RawValue* v = take(map, "servo")) {
        const std::string w = as_word(*v, "servo");
        if (w == "ideal") {
            scn.servo = sim::ServoMode::ideal;
        } else if (w == "first_order") {
            scn.servo = sim::ServoMode::first_order;
        } else {
            throw ConfigError("key 'servo': unknown mode '" + w + "'");
        }
    }
    scalar("servo_time_constant", scn.servo_time_constant);

    if (const RawValue* v = take(map, "arm.l")) {
        const VecX t = as_vector(*v, "arm.l", 3);
        scn.arm.l1 = t[0];
        scn.arm.l2 = t[1];
        scn.arm.l3 = t[2];
    }
    if (const RawValue* v = take(map, "arm.m")) {
        const VecX t = as_vector(*v, "arm.m", 3);
        scn.arm.m1 = t[0];
        scn.arm.m2 = t[1];
        scn.arm.m3 = t[2];
    }
    if (const RawValue* v = take(map, "arm.b")) {
        const VecX t = as_vector(*v, "arm.b", 3);
        scn.arm.b1 = t[0];
        scn.arm.b2 = t[1];
        scn.arm.b3 = t[2];
    }
    scalar("arm.gravity", scn.arm.gravity);
    vec3("arm.c", scn.arm.c);

    scalar("camera.f", scn.camera.f);
    scalar("camera.beta", scn.camera.beta);
    scalar("camera.d_C", scn.camera.d_C);
    if (const RawValue* v = take(map, "camera.principal_point")) {
        const VecX pp = as_vector(*v, "camera.principal_point", 2);
        scn.camera.u0 = pp[0];
        scn.camera.v0 = pp[1];
    }

    const int m1 = kinreg::depth_param_count(scn.arm);
    const int m2 = kinreg::perp_param_count(scn.arm);
    if (const RawValue* v = take(map, "gains.K")) {
        scn.gains.K = as_matrix(*v, "gains.K", 3);
    }
    if (const RawValue* v = take(map, "gains.K1")) {
        scn.gains.K1 = as_matrix(*v, "gains.K1", 2);
    }
    scalar("gains.alpha", scn.gains.alpha);
    if (const RawValue* v = take(map, "gains.Gamma_d")) {
        scn.gains.Gamma_d = as_matrix(*v, "gains.Gamma_d", kNumDynParams);
    }
    if (const RawValue* v = take(map, "gains.Gamma_z")) {
        scn.gains.Gamma_z = as_matrix(*v, "gains.Gamma_z", m1);
    }
    if (const RawValue* v = take(map, "gains.Gamma_z_perp")) {
        scn.gains.Gamma_z_perp = as_matrix(*v, "gains.Gamma_z_perp", m2);
    }

    vec3("init.q", scn.init_state.q);
    vec3("init.qd", scn.init_state.qd);
    if (const RawValue* v = take(map, "init.a_d_hat")) {
        scn.init_estimates.a_d = as_vector(*v, "init.a_d_hat", kNumDynParams);
    }
    if (const RawValue* v = take(map, "init.a_z_hat")) {
        scn.init_estimates.a_z = as_vector(*v, "init.a_z_hat");
    }
    if (const RawValue* v = take(map, "init.a_z_perp_hat")) {
        scn.init_estimates.a_z_perp = as_vector(*v, "init.a_z_perp_hat");
    }

    if (const RawValue* v = take(map, "trajectory.center")) {
        scn.trajectory.center = as_vector(*v, "trajectory.center", 2);
    }
    scalar("trajectory.radius", scn.trajectory.radius);
    scalar("trajectory.omega", scn.trajectory.omega);
    scalar("trajectory.phase", scn.trajectory.phase);

    if (const RawValue* v = take(map, "reference.a_d")) {
        scn.reference_a_d = as_vector(*v, "reference.a_d", kNumDynParams);
    }

    for (const auto& [key, value] : map) {
        if (!value.used) {
            throw ConfigError("line " + std::to_string(value.line) + ": unknown key '" +
                              key + "'");
        }
    }
    return scn;
}

std::string fmt(double v) { return format_double(v); }

std::string fmt_tuple(const VecX& v) {
    std::string out = "(";
    for (long i = 0; i < v.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += fmt(v[i]);
    }
    return out + ")";
}

std::string fmt_matrix(const MatX& m) {
    const bool diagonal = m.isDiagonal(0.0);
    if (diagonal) {
        std::string out = "diag(";
        for (long i = 0; i < m.rows(); ++i) {
            if (i) {
                out += ", ";
            }
            out += fmt(m(i, i));
        }
        return out + ")";
    }
    std::string out = "mat(";
    for (long i = 0; i < m.rows(); ++i) {
        if (i) {
            out += ", ";
        }
        out += fmt_tuple(m.row(i).transpose());
    }
    return out + ")";
}

} // namespace

sim::Scenario parse(const std::string& text, const std::vector<std::string>& overrides) {
    RawMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ingest_line(map, line, ++lineno, false);
    }
    for (const std::string& ov : overrides) {
        ingest_line(map, ov, 0, true);
    }
    sim::Scenario scn = apply(map);
    scn.validate();
    return scn;
}

sim::Scenario load(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), overrides);
}

std::string emit(const sim::Scenario& scn) {
    std::ostringstream out;
    out << "# vservo scenario\n";
    out << "controller = " << kind_to_word(scn.controller) << "\n";
    out << "duration = " << fmt(scn.duration) << "\n";
    out << "control_period = " << fmt(scn.control_period) << "\n";
    out << "substep = " << fmt(scn.substep) << "\n";
    out << "record_period = " << fmt(scn.record_period) << "\n";
    out << "control_mode = " << sim::to_string(scn.control_mode) << "\n";
    out << "adaptation = " << sim::to_string(scn.adaptation) << "\n";
    out << "servo = " << sim::to_string(scn.servo) << "\n";
    out << "servo_time_constant = " << fmt(scn.servo_time_constant) << "\n";
    out << "arm.l = " << fmt_tuple(Vec3{scn.arm.l1, scn.arm.l2, scn.arm.l3}) << "\n";
    out << "arm.m = " << fmt_tuple(Vec3{scn.arm.m1, scn.arm.m2, scn.arm.m3}) << "\n";
    out << "arm.b = " << fmt_tuple(Vec3{scn.arm.b1, scn.arm.b2, scn.arm.b3}) << "\n";
    out << "arm.gravity = " << fmt(scn.arm.gravity) << "\n";
    out << "arm.c = " << fmt_tuple(scn.arm.c) << "\n";
    out << "camera.f = " << fmt(scn.camera.f) << "\n";
    out << "camera.beta = " << fmt(scn.camera.beta) << "\n";
    out << "camera.d_C = " << fmt(scn.camera.d_C) << "\n";
    out << "camera.principal_point = (" << fmt(scn.camera.u0) << ", " << fmt(scn.camera.v0)
        << ")\n";
    out << "gains.K = " << fmt_matrix(scn.gains.K) << "\n";
    out << "gains.K1 = " << fmt_matrix(scn.gains.K1) << "\n";
    out << "gains.alpha = " << fmt(scn.gains.alpha) << "\n";
    out << "gains.Gamma_d = " << fmt_matrix(scn.gains.Gamma_d) << "\n";
    out << "gains.Gamma_z = " << fmt_matrix(scn.gains.Gamma_z) << "\n";
    out << "gains.Gamma_z_perp = " << fmt_matrix(scn.gains.Gamma_z_perp) << "\n";
    out << "init.q = " << fmt_tuple(scn.init_state.q) << "\n";
    out << "init.qd = " << fmt_tuple(scn.init_state.qd) << "\n";
    out << "init.a_d_hat = " << fmt_tuple(scn.init_estimates.a_d) << "\n";
    out << "init.a_z_hat = " << fmt_tuple(scn.init_estimates.a_z) << "\n";
    out << "init.a_z_perp_hat = " << fmt_tuple(scn.init_estimates.a_z_perp) << "\n";
    out << "trajectory.center = " << fmt_tuple(scn.trajectory.center) << "\n";
    out << "trajectory.radius = " << fmt(scn.trajectory.radius) << "\n";
    out << "trajectory.omega = " << fmt(scn.trajectory.omega) << "\n";
    out << "trajectory.phase = " << fmt(scn.trajectory.phase) << "\n";
    if (scn.reference_a_d.size() > 0) {
        out << "reference.a_d = " << fmt_tuple(scn.reference_a_d) << "\n";
    }
    return out.str();
}

} // namespace vservo::config
