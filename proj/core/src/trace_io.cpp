#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "duosim/errors.hpp"
#include "duosim/trace.hpp"
#include "json.hpp"

namespace duosim {

using nlohmann::json;

namespace {

const char* const kColumns =
    "round,q_l,q_h,rho,p_l,p_h,u_l,u_h,nash_value,alpha_l,alpha_h,defected_l,defected_h";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("trailing characters in number '" + s + "'");
    return v;
}

long long to_int(const std::string& s) {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::runtime_error("trailing characters in integer '" + s + "'");
    return v;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

// Header key/value pairs shared by both formats; JSON stores the same names.
std::vector<std::pair<std::string, std::string>> header_fields(const Trace& t) {
    const RunConfig& c = t.config;
    const TraceSummary& s = t.summary;
    return {
        {"config.scheme", to_string(c.scheme)},
        {"config.loss", to_string(c.loss)},
        {"config.dim", std::to_string(c.dim)},
        {"config.rounds", std::to_string(c.rounds)},
        {"config.seed", std::to_string(c.seed)},
        {"config.qhmax", fmt(c.target_q_h_max)},
        {"config.asymmetry", fmt(c.asymmetry)},
        {"config.n_per_firm", std::to_string(c.n_per_firm)},
        {"config.skew", fmt(c.skew)},
        {"config.warmup", std::to_string(c.warmup)},
        {"config.out", one_line(c.out)},
        {"config.format", to_string(c.format)},
        {"config.tolerance", fmt(c.tolerance)},
        {"config.tilde_b", fmt(c.tilde_b)},
        {"config.max_inner", std::to_string(c.max_inner)},
        {"summary.target_q_l", fmt(s.target.q_low)},
        {"summary.target_q_h", fmt(s.target.q_high)},
        {"summary.target_rho", fmt(s.target.ratio)},
        {"summary.target_objective", fmt(s.target.objective)},
        {"summary.u_l0", fmt(s.target.u_low0)},
        {"summary.u_h0", fmt(s.target.u_high0)},
        {"summary.tilde_b", fmt(s.tilde_b)},
        {"summary.smoothness", fmt(s.smoothness)},
        {"summary.q_h_gap", fmt(s.q_h_gap)},
        {"summary.rho_gap", fmt(s.rho_gap)},
        {"summary.nash_gap", fmt(s.nash_gap)},
        {"summary.defections_l", std::to_string(s.defections_l)},
        {"summary.defections_h", std::to_string(s.defections_h)},
        {"summary.wall_seconds", fmt(s.wall_seconds)},
        {"summary.error", one_line(s.error)},
    };
}

void apply_header_field(Trace& t, const std::string& key, const std::string& v) {
    RunConfig& c = t.config;
    TraceSummary& s = t.summary;
    if (key == "config.scheme") c.scheme = parse_scheme(v);
    else if (key == "config.loss") c.loss = parse_loss_kind(v);
    else if (key == "config.dim") c.dim = static_cast<int>(to_int(v));
    else if (key == "config.rounds") c.rounds = static_cast<int>(to_int(v));
    else if (key == "config.seed") c.seed = std::stoull(v);
    else if (key == "config.qhmax") c.target_q_h_max = to_double(v);
    else if (key == "config.asymmetry") c.asymmetry = to_double(v);
    else if (key == "config.n_per_firm") c.n_per_firm = static_cast<int>(to_int(v));
    else if (key == "config.skew") c.skew = to_double(v);
    else if (key == "config.warmup") c.warmup = static_cast<int>(to_int(v));
    else if (key == "config.out") c.out = v;
    else if (key == "config.format") c.format = parse_trace_format(v);
    else if (key == "config.tolerance") c.tolerance = to_double(v);
    else if (key == "config.tilde_b") c.tilde_b = to_double(v);
    else if (key == "config.max_inner") c.max_inner = static_cast<int>(to_int(v));
    else if (key == "summary.target_q_l") s.target.q_low = to_double(v);
    else if (key == "summary.target_q_h") s.target.q_high = to_double(v);
    else if (key == "summary.target_rho") s.target.ratio = to_double(v);
    else if (key == "summary.target_objective") s.target.objective = to_double(v);
    else if (key == "summary.u_l0") s.target.u_low0 = to_double(v);
    else if (key == "summary.u_h0") s.target.u_high0 = to_double(v);
    else if (key == "summary.tilde_b") s.tilde_b = to_double(v);
    else if (key == "summary.smoothness") s.smoothness = to_double(v);
    else if (key == "summary.q_h_gap") s.q_h_gap = to_double(v);
    else if (key == "summary.rho_gap") s.rho_gap = to_double(v);
    else if (key == "summary.nash_gap") s.nash_gap = to_double(v);
    else if (key == "summary.defections_l") s.defections_l = static_cast<int>(to_int(v));
    else if (key == "summary.defections_h") s.defections_h = static_cast<int>(to_int(v));
    else if (key == "summary.wall_seconds") s.wall_seconds = to_double(v);
    else if (key == "summary.error") s.error = v;
    else throw std::runtime_error("unknown trace header key '" + key + "'");
}

json record_to_json(const RoundRecord& r) {
    return {{"round", r.round},   {"q_l", r.q_l},         {"q_h", r.q_h},
            {"rho", r.rho},       {"p_l", r.p_l},         {"p_h", r.p_h},
            {"u_l", r.u_l},       {"u_h", r.u_h},         {"nash_value", r.nash_value},
            {"alpha_l", r.alpha_l}, {"alpha_h", r.alpha_h}, {"defected_l", r.defected_l},
            {"defected_h", r.defected_h}};
}

RoundRecord record_from_json(const json& j) {
    RoundRecord r;
    r.round = j.at("round").get<int>();
    r.q_l = j.at("q_l").get<double>();
    r.q_h = j.at("q_h").get<double>();
    r.rho = j.at("rho").get<double>();
    r.p_l = j.at("p_l").get<double>();
    r.p_h = j.at("p_h").get<double>();
    r.u_l = j.at("u_l").get<double>();
    r.u_h = j.at("u_h").get<double>();
    r.nash_value = j.at("nash_value").get<double>();
    r.alpha_l = j.at("alpha_l").get<double>();
    r.alpha_h = j.at("alpha_h").get<double>();
    r.defected_l = j.at("defected_l").get<bool>();
    r.defected_h = j.at("defected_h").get<bool>();
    return r;
}

}  // namespace

void summarise(Trace& trace) {
    TraceSummary& s = trace.summary;
    s.defections_l = 0;
    s.defections_h = 0;
    for (const RoundRecord& r : trace.records) {
        s.defections_l += r.defected_l;
        s.defections_h += r.defected_h;
    }
    if (trace.records.empty()) return;
    const RoundRecord& last = trace.records.back();
    s.q_h_gap = s.target.q_high - last.q_h;
    s.rho_gap = std::abs(s.target.ratio - last.rho);
    s.nash_gap = s.target.objective - last.nash_value;
}

Trace execute(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    const auto model = build_model(cfg);
    const TrainingState init = initial_state(*model, cfg.warmup);
    RunResult result = run_scheme(scheme_config(cfg), *model, init);

    Trace t;
    t.config = cfg;
    t.records = std::move(result.records);
    t.summary.target = result.target;
    t.summary.tilde_b = result.tilde_b;
    t.summary.smoothness = result.smoothness;
    summarise(t);
    t.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

std::string serialize_csv(const Trace& t) {
    std::ostringstream os;
    for (const auto& [k, v] : header_fields(t)) os << "# " << k << '=' << v << '\n';
    os << kColumns << '\n';
    for (const RoundRecord& r : t.records) {
        os << r.round << ',' << fmt(r.q_l) << ',' << fmt(r.q_h) << ',' << fmt(r.rho) << ','
           << fmt(r.p_l) << ',' << fmt(r.p_h) << ',' << fmt(r.u_l) << ',' << fmt(r.u_h) << ','
           << fmt(r.nash_value) << ',' << fmt(r.alpha_l) << ',' << fmt(r.alpha_h) << ','
           << (r.defected_l ? 1 : 0) << ',' << (r.defected_h ? 1 : 0) << '\n';
    }
    return os.str();
}

Trace parse_csv(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    bool seen_columns = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            if (line.rfind("# ", 0) == 0) {
                const auto eq = line.find('=');
                if (eq == std::string::npos) throw std::runtime_error("header line without '='");
                apply_header_field(t, line.substr(2, eq - 2), line.substr(eq + 1));
                continue;
            }
            if (!seen_columns) {
                if (line != kColumns) throw std::runtime_error("unexpected column header");
                seen_columns = true;
                continue;
            }
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            if (cells.size() != 13) throw std::runtime_error("expected 13 columns");
            RoundRecord r;
            r.round = static_cast<int>(to_int(cells[0]));
            double* fields[] = {&r.q_l, &r.q_h, &r.rho, &r.p_l, &r.p_h, &r.u_l,
                                &r.u_h, &r.nash_value, &r.alpha_l, &r.alpha_h};
            for (int i = 0; i < 10; ++i) *fields[i] = to_double(cells[i + 1]);
            r.defected_l = to_int(cells[11]) != 0;
            r.defected_h = to_int(cells[12]) != 0;
            t.records.push_back(r);
        } catch (const std::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!seen_columns) throw std::runtime_error("trace has no column header");
    return t;
}

std::string serialize_json(const Trace& t) {
    json header = json::object();
    for (const auto& [k, v] : header_fields(t)) header[k] = v;
    json doc;
    doc["header"] = header;
    doc["records"] = json::array();
    for (const RoundRecord& r : t.records) doc["records"].push_back(record_to_json(r));
    return doc.dump(1) + "\n";
}

Trace parse_json(const std::string& text) {
    Trace t;
    try {
        const json doc = json::parse(text);
        for (const auto& [k, v] : doc.at("header").items()) {
            apply_header_field(t, k, v.get<std::string>());
        }
        for (const json& r : doc.at("records")) t.records.push_back(record_from_json(r));
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed JSON trace: ") + e.what());
    }
    return t;
}

std::string serialize(const Trace& t, TraceFormat f) {
    return f == TraceFormat::csv ? serialize_csv(t) : serialize_json(t);
}

Trace parse_trace(const std::string& text) {
    const auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{') return parse_json(text);
    return parse_csv(text);
}

void write_trace(const Trace& t, const std::string& path, TraceFormat f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << serialize(t, f);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Trace read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read trace '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace(ss.str());
}

}  // namespace duosim
