#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "treecf/dataset.hpp"
#include "treecf/model_io.hpp"
#include "treecf/train.hpp"

using namespace treecf;
using testutil::TempFile;

namespace {

TreeEnsemble trained_model() {
    const Dataset sc = minmax_scale(testutil::toy_dataset());
    return train_random_forest(sc, 5, 3, 7);
}

}  // namespace

TEST_CASE("model save/load round-trips bit-exactly") {
    const TreeEnsemble ens = trained_model();
    TempFile a("model_a"), b("model_b");
    save_model(ens, a.path);
    const TreeEnsemble back = load_model(a.path);
    save_model(back, b.path);

    CHECK(testutil::read_text(a.path) == testutil::read_text(b.path));
    CHECK(back.n_features == ens.n_features);
    CHECK(back.n_classes == ens.n_classes);
    CHECK(back.weights == ens.weights);
    CHECK(back.feature_names == ens.feature_names);
    REQUIRE(back.trees.size() == ens.trees.size());

    // loaded model predicts identically
    const Dataset sc = minmax_scale(testutil::toy_dataset());
    for (const auto& row : sc.rows)
        CHECK(predict_label(back, row) == predict_label(ens, row));
}

TEST_CASE("model json carries the format header") {
    const nlohmann::json j = model_to_json(trained_model());
    CHECK(j["format_version"] == 1);
    CHECK(j["kind"] == "random-forest");
    CHECK(j.contains("scaling"));
    CHECK(j["scaling"].contains("min"));
    CHECK(j["trees"].is_array());
}

TEST_CASE("unsupported format_version is rejected") {
    nlohmann::json j = model_to_json(trained_model());
    j["format_version"] = 2;
    CHECK_THROWS_WITH(model_from_json(j),
                      Catch::Matchers::ContainsSubstring("unsupported model format_version"));
}

TEST_CASE("schema violations raise SchemaError") {
    const nlohmann::json good = model_to_json(trained_model());

    SECTION("not an object") {
        CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), SchemaError);
    }
    SECTION("missing format_version") {
        nlohmann::json j = good;
        j.erase("format_version");
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("missing kind") {
        nlohmann::json j = good;
        j.erase("kind");
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("weights length mismatch") {
        nlohmann::json j = good;
        j["weights"].push_back(0.5);
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("unnormalized leaf distribution") {
        nlohmann::json j = good;
        // find some leaf and break it
        for (auto& node : j["trees"][0]["nodes"])
            if (node.contains("distribution")) {
                node["distribution"][0] = node["distribution"][0].get<double>() + 0.5;
                break;
            }
        CHECK_THROWS_WITH(model_from_json(j),
                          Catch::Matchers::ContainsSubstring("not normalized"));
    }
    SECTION("child before parent") {
        nlohmann::json j = good;
        for (auto& node : j["trees"][0]["nodes"])
            if (node.contains("left")) {
                node["left"] = 0;
                break;
            }
        CHECK_THROWS_WITH(model_from_json(j),
                          Catch::Matchers::ContainsSubstring("follow its parent"));
    }
    SECTION("two parents for one node") {
        nlohmann::json j = good;
        for (auto& node : j["trees"][0]["nodes"])
            if (node.contains("left")) {
                node["right"] = node["left"];
                break;
            }
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("threshold outside the unit interval") {
        nlohmann::json j = good;
        for (auto& node : j["trees"][0]["nodes"])
            if (node.contains("threshold")) {
                node["threshold"] = 1.5;
                break;
            }
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("feature index out of bounds") {
        nlohmann::json j = good;
        for (auto& node : j["trees"][0]["nodes"])
            if (node.contains("feature")) {
                node["feature"] = 99;
                break;
            }
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("scaling min >= max") {
        nlohmann::json j = good;
        j["scaling"]["min"][0] = j["scaling"]["max"][0];
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
    SECTION("fewer than two classes") {
        nlohmann::json j = good;
        j["n_classes"] = 1;
        CHECK_THROWS_AS(model_from_json(j), SchemaError);
    }
}

TEST_CASE("file level errors") {
    CHECK_THROWS_AS(load_model("missing_model.json"), DataError);

    TempFile tf("badjson");
    testutil::write_text(tf.path, "{ not json");
    CHECK_THROWS_AS(load_model(tf.path), SchemaError);
}
