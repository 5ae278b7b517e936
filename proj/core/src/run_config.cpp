#include "duosim/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "duosim/errors.hpp"
#include "json.hpp"

namespace duosim {

using nlohmann::json;

std::string to_string(LossKind k) { return k == LossKind::quadratic ? "quadratic" : "logistic"; }
std::string to_string(TraceFormat f) { return f == TraceFormat::csv ? "csv" : "json"; }

LossKind parse_loss_kind(const std::string& s) {
    if (s == "quadratic") return LossKind::quadratic;
    if (s == "logistic") return LossKind::logistic;
    throw ConfigError("unknown loss '" + s + "' (expected quadratic or logistic)");
}

TraceFormat parse_trace_format(const std::string& s) {
    if (s == "csv") return TraceFormat::csv;
    if (s == "json") return TraceFormat::json;
    throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (rounds < 1) fail("rounds must be >= 1");
    if (dim < 1) fail("dim must be >= 1");
    if (!(target_q_h_max > 0.0 && target_q_h_max < 1.0)) fail("qhmax must lie in (0,1)");
    if (!(asymmetry >= 0.0 && asymmetry < 1.0)) fail("asymmetry must lie in [0,1)");
    if (n_per_firm < 10) fail("n_per_firm must be >= 10");
    if (!(skew >= 0.0 && skew <= 1.0)) fail("skew must lie in [0,1]");
    if (warmup < 0) fail("warmup must be >= 0");
    if (!(tolerance >= 0.0)) fail("tolerance must be >= 0");
    if (tilde_b > 0.0 && !(tilde_b > 1.0)) fail("tilde_b must exceed 1 (or be <= 0 to compute it)");
    if (max_inner < 1) fail("max_inner must be >= 1");
}

RunConfig merge_config_json(const std::string& text, RunConfig cfg) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known = {
        "scheme", "loss", "dim", "rounds", "seed", "qhmax", "asymmetry", "n_per_firm",
        "skew", "warmup", "out", "format", "tolerance", "tilde_b", "max_inner"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    try {
        if (doc.contains("scheme")) cfg.scheme = parse_scheme(doc["scheme"].get<std::string>());
        if (doc.contains("loss")) cfg.loss = parse_loss_kind(doc["loss"].get<std::string>());
        if (doc.contains("dim")) cfg.dim = doc["dim"].get<int>();
        if (doc.contains("rounds")) cfg.rounds = doc["rounds"].get<int>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("qhmax")) cfg.target_q_h_max = doc["qhmax"].get<double>();
        if (doc.contains("asymmetry")) cfg.asymmetry = doc["asymmetry"].get<double>();
        if (doc.contains("n_per_firm")) cfg.n_per_firm = doc["n_per_firm"].get<int>();
        if (doc.contains("skew")) cfg.skew = doc["skew"].get<double>();
        if (doc.contains("warmup")) cfg.warmup = doc["warmup"].get<int>();
        if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
        if (doc.contains("format")) cfg.format = parse_trace_format(doc["format"].get<std::string>());
        if (doc.contains("tolerance")) cfg.tolerance = doc["tolerance"].get<double>();
        if (doc.contains("tilde_b")) cfg.tilde_b = doc["tilde_b"].get<double>();
        if (doc.contains("max_inner")) cfg.max_inner = doc["max_inner"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return merge_config_json(ss.str(), std::move(base));
}

std::string config_to_json(const RunConfig& c) {
    json doc = {{"scheme", to_string(c.scheme)},
                {"loss", to_string(c.loss)},
                {"dim", c.dim},
                {"rounds", c.rounds},
                {"seed", c.seed},
                {"qhmax", c.target_q_h_max},
                {"asymmetry", c.asymmetry},
                {"n_per_firm", c.n_per_firm},
                {"skew", c.skew},
                {"warmup", c.warmup},
                {"out", c.out},
                {"format", to_string(c.format)},
                {"tolerance", c.tolerance},
                {"tilde_b", c.tilde_b},
                {"max_inner", c.max_inner}};
    return doc.dump(2);
}

std::shared_ptr<const LossModel> build_model(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.loss == LossKind::quadratic) {
        return make_complementary_quadratics(cfg.dim, cfg.target_q_h_max, cfg.asymmetry, cfg.seed);
    }
    return make_synthetic_logistic(cfg.n_per_firm, cfg.dim, cfg.skew, cfg.seed);
}

SchemeConfig scheme_config(const RunConfig& cfg) {
    SchemeConfig s;
    s.scheme = cfg.scheme;
    s.rounds = cfg.rounds;
    s.tilde_b = cfg.tilde_b;
    s.tolerance = cfg.tolerance;
    s.max_inner = cfg.max_inner;
    return s;
}

}  // namespace duosim
