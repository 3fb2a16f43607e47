#include <doctest.h>

#include <filesystem>
#include <string>

#include "cileda/errors.hpp"
#include "cileda/serialize.hpp"

using namespace cileda;
namespace fs = std::filesystem;

namespace {

DomainDataset tiny_domain(const std::string& id, double shift, std::uint64_t seed) {
    SynthSpec sp;
    sp.n_classes = 2;
    sp.dim = 3;
    sp.samples_per_class = {8, 8};
    sp.domains = {{id, shift, 0.0}};
    sp.noise_sigma = 0.3;
    sp.seed = seed;
    return synth_domains(sp)[0];
}

CildaConfig tiny_config(std::uint64_t seed) {
    CildaConfig cfg;
    cfg.L_max = 6;
    cfg.eps = 0.01;
    cfg.T_max = 10;
    cfg.scale_set = {1, 3};
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("single-domain models survive the JSON round trip bit for bit") {
    const DomainDataset data = tiny_domain("T", 0.0, 4);
    ScnConfig cfg;
    cfg.L_max = 6;
    cfg.eps = 0.01;
    cfg.T_max = 10;
    cfg.scale_set = {0.5, 1, 3};
    cfg.seed = 2;
    const ScnModel model = scn_train(data, cfg, ScnVariant::SC3);
    REQUIRE(model.node_count() >= 1);

    const std::string text = scn_to_json(model);
    const ScnModel back = scn_from_json(text);
    CHECK(back.variant == model.variant);
    CHECK(back.p == model.p);
    CHECK(back.m == model.m);
    CHECK(back.activation == model.activation);
    REQUIRE(back.node_count() == model.node_count());
    CHECK((back.beta.array() == model.beta.array()).all());
    for (Eigen::Index i = 0; i < model.node_count(); ++i) {
        CHECK(back.nodes[i].b == model.nodes[i].b);
        CHECK(back.nodes[i].scale == model.nodes[i].scale);
        CHECK((back.nodes[i].w.array() == model.nodes[i].w.array()).all());
    }
    CHECK(back.trace == model.trace);
    CHECK(back.config.seed == model.config.seed);
    CHECK(back.config.scale_set == model.config.scale_set);
    CHECK(back.converged == model.converged);

    // serialization is a fixed point: dump(load(dump)) == dump
    CHECK(scn_to_json(back) == text);
    CHECK(text.back() == '\n');
}

TEST_CASE("adaptation models keep their domain ids, weights and trace") {
    const DomainDataset src = tiny_domain("S", 1.0, 5);
    const DomainDataset tgt = tiny_domain("T", 0.0, 6);
    const CildaModel model = cilda_train(src, tgt, tiny_config(3));
    REQUIRE(model.node_count() >= 1);

    const std::string text = cilda_to_json(model);
    const CildaModel back = cilda_from_json(text);
    CHECK(back.source_id == "S");
    CHECK(back.target_id == "T");
    CHECK(back.variant == model.variant);
    CHECK((back.beta.array() == model.beta.array()).all());
    CHECK(back.trace == model.trace);
    CHECK(back.config.C_S == model.config.C_S);
    CHECK(back.config.C_T == model.config.C_T);
    CHECK(back.config.lambda == model.config.lambda);
    CHECK(cilda_to_json(back) == text);

    // predictions of the reloaded model are identical
    CHECK(cilda_predict(back, tgt.features) == cilda_predict(model, tgt.features));
}

TEST_CASE("ensembles reload member by member through the kind dispatcher") {
    std::map<std::string, DomainDataset> datasets;
    datasets.emplace("A", tiny_domain("A", 1.2, 7));
    datasets.emplace("B", tiny_domain("B", 0.0, 8));
    const EnsembleModel model = train_ensemble(datasets, "B", tiny_config(9));

    const auto path = fs::temp_directory_path() / "cileda_test_model.json";
    save_text(path.string(), ensemble_to_json(model));

    const AnyModel any = load_model(path.string());
    CHECK(any.kind == "cileda");
    REQUIRE(any.ensemble.members.size() == model.members.size());
    CHECK(any.ensemble.target_id == "B");
    CHECK(any.ensemble.tie_policy == "self-then-lowest");
    for (std::size_t k = 0; k < model.members.size(); ++k) {
        CHECK((any.ensemble.members[k].beta.array() == model.members[k].beta.array()).all());
        CHECK(any.ensemble.members[k].source_id == model.members[k].source_id);
    }
    CHECK(ensemble_to_json(any.ensemble) == ensemble_to_json(model));

    const Matrix& X = datasets.at("B").features;
    CHECK(ensemble_predict(any.ensemble, X) == ensemble_predict(model, X));
    fs::remove(path);
}

TEST_CASE("loading rejects wrong kinds, bad JSON and missing files") {
    const DomainDataset data = tiny_domain("T", 0.0, 10);
    ScnConfig cfg;
    cfg.L_max = 2;
    cfg.eps = 0.01;
    cfg.T_max = 5;
    cfg.scale_set = {1};
    cfg.seed = 1;
    const std::string scn_text = scn_to_json(scn_train(data, cfg, ScnVariant::SC1));

    CHECK_THROWS_AS(cilda_from_json(scn_text), ManifestParse);
    CHECK_THROWS_AS(scn_from_json("{not json"), ManifestParse);
    CHECK_THROWS_AS(ensemble_from_json("{}"), ManifestParse);
    CHECK_THROWS_AS(load_text("/nonexistent/cileda/file.json"), FileMissing);

    const auto path = fs::temp_directory_path() / "cileda_test_badkind.json";
    save_text(path.string(), "{\"kind\":\"mystery\"}\n");
    CHECK_THROWS_AS(load_model(path.string()), ManifestParse);
    fs::remove(path);
}

TEST_CASE("extreme doubles survive the text encoding") {
    const DomainDataset data = tiny_domain("T", 0.0, 11);
    ScnConfig cfg;
    cfg.L_max = 1;
    cfg.eps = 1e-9;
    cfg.T_max = 5;
    cfg.scale_set = {1};
    cfg.seed = 3;
    ScnModel model = scn_train(data, cfg, ScnVariant::SC1);
    REQUIRE(model.node_count() == 1);

    // plant adversarial values and round trip them
    model.beta(0, 0) = 0x1.fffffffffffffp+1023;   // largest finite double
    model.beta(0, 1) = 5e-324;                    // smallest subnormal
    model.nodes[0].b = -0.1;
    model.nodes[0].w[0] = 1.0 + 0x1p-52;          // 1 + ulp
    const ScnModel back = scn_from_json(scn_to_json(model));
    CHECK(back.beta(0, 0) == model.beta(0, 0));
    CHECK(back.beta(0, 1) == model.beta(0, 1));
    CHECK(back.nodes[0].b == model.nodes[0].b);
    CHECK(back.nodes[0].w[0] == model.nodes[0].w[0]);
}
