#include "cileda/serialize.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cileda/errors.hpp"

namespace cileda {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vector vec_from_json(const json& a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

json mat_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix mat_from_json(const json& rows, Eigen::Index cols_hint) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    if (n == 0) return Matrix(0, cols_hint);
    const Eigen::Index cols = static_cast<Eigen::Index>(rows[0].size());
    Matrix m(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw ManifestParse("ragged matrix in model file");
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    return m;
}

json nodes_to_json(const std::vector<HiddenNode>& nodes) {
    json a = json::array();
    for (const HiddenNode& n : nodes)
        a.push_back({{"w", vec_to_json(n.w)}, {"b", n.b}, {"scale", n.scale}});
    return a;
}

std::vector<HiddenNode> nodes_from_json(const json& a) {
    std::vector<HiddenNode> nodes;
    nodes.reserve(a.size());
    for (const json& jn : a) {
        HiddenNode n;
        n.w = vec_from_json(jn.at("w"));
        n.b = jn.at("b").get<double>();
        n.scale = jn.at("scale").get<double>();
        nodes.push_back(std::move(n));
    }
    return nodes;
}

json scn_config_to_json(const ScnConfig& c) {
    return {{"L_max", c.L_max},
            {"eps", c.eps},
            {"T_max", c.T_max},
            {"scale_set", c.scale_set},
            {"contraction_init", c.contraction_init},
            {"max_relax", c.max_relax},
            {"seed", c.seed}};
}

void scn_config_from_json(const json& j, ScnConfig& c) {
    c.L_max = j.at("L_max").get<int>();
    c.eps = j.at("eps").get<double>();
    c.T_max = j.at("T_max").get<int>();
    c.scale_set = j.at("scale_set").get<std::vector<double>>();
    c.contraction_init = j.at("contraction_init").get<double>();
    c.max_relax = j.at("max_relax").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ManifestParse("model file is not valid JSON");
    return j;
}

void expect_kind(const json& j, const std::string& kind) {
    if (!j.contains("kind") || j.at("kind").get<std::string>() != kind)
        throw ManifestParse("model file is not of kind '" + kind + "'");
}

}  // namespace

std::string scn_to_json(const ScnModel& model) {
    json j;
    j["kind"] = "scn";
    j["variant"] = model.variant == ScnVariant::SC1 ? "sc1" : "sc3";
    j["p"] = model.p;
    j["m"] = model.m;
    j["activation"] = model.activation;
    j["nodes"] = nodes_to_json(model.nodes);
    j["beta"] = mat_to_json(model.beta);
    j["trace"] = model.trace;
    j["config"] = scn_config_to_json(model.config);
    return j.dump(2) + "\n";
}

ScnModel scn_from_json(const std::string& text) {
    const json j = parse(text);
    expect_kind(j, "scn");
    ScnModel m;
    m.variant = j.at("variant").get<std::string>() == "sc1" ? ScnVariant::SC1 : ScnVariant::SC3;
    m.p = j.at("p").get<int>();
    m.m = j.at("m").get<int>();
    m.activation = j.at("activation").get<std::string>();
    m.nodes = nodes_from_json(j.at("nodes"));
    m.beta = mat_from_json(j.at("beta"), m.m);
    m.trace = j.at("trace").get<std::vector<double>>();
    scn_config_from_json(j.at("config"), m.config);
    m.converged = !m.trace.empty() && m.trace.back() <= m.config.eps;
    return m;
}

std::string cilda_to_json(const CildaModel& model) {
    json j;
    j["kind"] = "cilda";
    j["variant"] = model.variant == CildaVariant::CILDA1 ? "cilda1" : "cilda2";
    j["p"] = model.p;
    j["m"] = model.m;
    j["activation"] = model.activation;
    j["nodes"] = nodes_to_json(model.nodes);
    j["beta"] = mat_to_json(model.beta);
    j["source_id"] = model.source_id;
    j["target_id"] = model.target_id;
    j["trace"] = model.trace;
    json cfg = scn_config_to_json(model.config);
    cfg["C_S"] = model.config.C_S;
    cfg["C_T"] = model.config.C_T;
    cfg["lambda"] = model.config.lambda;
    j["config"] = std::move(cfg);
    return j.dump(2) + "\n";
}

CildaModel cilda_from_json(const std::string& text) {
    const json j = parse(text);
    expect_kind(j, "cilda");
    CildaModel m;
    m.variant = j.at("variant").get<std::string>() == "cilda1" ? CildaVariant::CILDA1
                                                               : CildaVariant::CILDA2;
    m.p = j.at("p").get<int>();
    m.m = j.at("m").get<int>();
    m.activation = j.at("activation").get<std::string>();
    m.nodes = nodes_from_json(j.at("nodes"));
    m.beta = mat_from_json(j.at("beta"), m.m);
    m.source_id = j.at("source_id").get<std::string>();
    m.target_id = j.at("target_id").get<std::string>();
    m.trace = j.at("trace").get<std::vector<double>>();
    const json& cfg = j.at("config");
    scn_config_from_json(cfg, m.config);
    m.config.C_S = cfg.at("C_S").get<double>();
    m.config.C_T = cfg.at("C_T").get<double>();
    m.config.lambda = cfg.at("lambda").get<double>();
    m.config.variant = m.variant;
    m.converged = !m.trace.empty() && m.trace.back() <= m.config.eps;
    return m;
}

std::string ensemble_to_json(const EnsembleModel& model) {
    json j;
    j["kind"] = "cileda";
    j["target_id"] = model.target_id;
    j["tie_policy"] = model.tie_policy;
    json members = json::array();
    for (const CildaModel& m : model.members) members.push_back(json::parse(cilda_to_json(m)));
    j["members"] = std::move(members);
    return j.dump(2) + "\n";
}

EnsembleModel ensemble_from_json(const std::string& text) {
    const json j = parse(text);
    expect_kind(j, "cileda");
    EnsembleModel m;
    m.target_id = j.at("target_id").get<std::string>();
    m.tie_policy = j.at("tie_policy").get<std::string>();
    for (const json& jm : j.at("members")) m.members.push_back(cilda_from_json(jm.dump()));
    return m;
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileMissing("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw FileMissing("short write to '" + path + "'");
}

std::string load_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileMissing("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

AnyModel load_model(const std::string& path) {
    const std::string text = load_text(path);
    const json j = parse(text);
    AnyModel out;
    out.kind = j.value("kind", "");
    if (out.kind == "scn")
        out.scn = scn_from_json(text);
    else if (out.kind == "cilda")
        out.cilda = cilda_from_json(text);
    else if (out.kind == "cileda")
        out.ensemble = ensemble_from_json(text);
    else
        throw ManifestParse("unknown model kind '" + out.kind + "'");
    return out;
}

}  // namespace cileda
