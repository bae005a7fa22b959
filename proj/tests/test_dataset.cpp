#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "treecf/dataset.hpp"
#include "treecf/errors.hpp"

using namespace treecf;
using testutil::TempFile;
using testutil::write_text;

TEST_CASE("split_csv_line handles quotes and delimiters") {
    auto f = detail::split_csv_line("a,b,\"c,d\",e");
    REQUIRE(f.size() == 4);
    CHECK(f[2] == "c,d");
    auto g = detail::split_csv_line("1;2;3", ';');
    REQUIRE(g.size() == 3);
    CHECK(g[1] == "2");
}

TEST_CASE("load_csv parses a plain file") {
    TempFile tf("csv");
    write_text(tf.path,
               "a,b,label\n"
               "1.0,2.0,yes\n"
               "3.0,4.0,no\n"
               "5.0,6.0,yes\n");
    Dataset ds = load_csv(tf.path, "label");
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(ds.n_rows() == 3);
    CHECK(ds.n_classes == 2);
    // distinct labels sorted lexicographically: "no" -> 0, "yes" -> 1
    CHECK(ds.label_names == std::vector<std::string>{"no", "yes"});
    CHECK(ds.labels == std::vector<int>{1, 0, 1});
    CHECK(ds.rows[1] == std::vector<double>{3.0, 4.0});
}

TEST_CASE("load_csv sorts numeric labels numerically") {
    TempFile tf("csvnum");
    write_text(tf.path, "x,q\n1,10\n2,2\n3,10\n4,2\n");
    Dataset ds = load_csv(tf.path, "q");
    // numeric sort gives 2 < 10 (lexicographic would give "10" < "2")
    CHECK(ds.label_names == std::vector<std::string>{"2", "10"});
    CHECK(ds.labels == std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("load_csv drops non-numeric feature columns with a note") {
    TempFile tf("csvdrop");
    write_text(tf.path, "a,color,label\n1,red,0\n2,blue,1\n");
    Dataset ds = load_csv(tf.path, "label");
    CHECK(ds.feature_names == std::vector<std::string>{"a"});
    REQUIRE(ds.notes.size() == 1);
    CHECK(ds.notes[0].find("color") != std::string::npos);
}

TEST_CASE("load_csv auto-detects semicolon delimiters") {
    TempFile tf("csvsemi");
    write_text(tf.path, "a;b;label\n1;2;0\n3;4;1\n");
    Dataset ds = load_csv(tf.path, "label");
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(ds.rows[1] == std::vector<double>{3.0, 4.0});
    CHECK(ds.n_classes == 2);
}

TEST_CASE("load_csv accepts a column index as label") {
    TempFile tf("csvidx");
    write_text(tf.path, "a,b,c\n1,0,5\n2,1,6\n");
    Dataset ds = load_csv(tf.path, "1");
    CHECK(ds.feature_names == std::vector<std::string>{"a", "c"});
    CHECK(ds.labels == std::vector<int>{0, 1});
}

TEST_CASE("label_geq binarizes numeric labels") {
    TempFile tf("csvgeq");
    write_text(tf.path, "x,quality\n1,4\n2,7\n3,6\n4,9\n");
    LoadOptions opts;
    opts.label_geq = 7.0;
    Dataset ds = load_csv(tf.path, "quality", opts);
    CHECK(ds.n_classes == 2);
    CHECK(ds.labels == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("load_csv error paths") {
    TempFile tf("csverr");

    SECTION("missing file") {
        CHECK_THROWS_AS(load_csv("no_such_file.csv", "label"), DataError);
    }
    SECTION("missing label column") {
        write_text(tf.path, "a,b\n1,2\n");
        CHECK_THROWS_AS(load_csv(tf.path, "label"), DataError);
    }
    SECTION("ragged row") {
        write_text(tf.path, "a,b,label\n1,2,0\n1,2\n");
        CHECK_THROWS_AS(load_csv(tf.path, "label"), DataError);
    }
    SECTION("single class") {
        write_text(tf.path, "a,label\n1,x\n2,x\n");
        CHECK_THROWS_AS(load_csv(tf.path, "label"), DataError);
    }
    SECTION("label_geq collapses to one side") {
        write_text(tf.path, "a,q\n1,3\n2,4\n");
        LoadOptions opts;
        opts.label_geq = 10.0;
        CHECK_THROWS_AS(load_csv(tf.path, "q", opts), DataError);
    }
    SECTION("label_geq on non-numeric labels") {
        write_text(tf.path, "a,q\n1,lo\n2,hi\n");
        LoadOptions opts;
        opts.label_geq = 1.0;
        CHECK_THROWS_AS(load_csv(tf.path, "q", opts), DataError);
    }
    SECTION("no numeric features") {
        write_text(tf.path, "a,label\nred,0\nblue,1\n");
        CHECK_THROWS_AS(load_csv(tf.path, "label"), DataError);
    }
}

TEST_CASE("minmax_scale maps onto the unit box and round-trips") {
    Dataset ds = testutil::toy_dataset();
    Dataset sc = minmax_scale(ds);
    REQUIRE(sc.is_scaled());
    REQUIRE(sc.n_features() == 2);
    for (const auto& row : sc.rows)
        for (double v : row) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    // min and max of each column are hit exactly
    CHECK(sc.rows[0][0] == 0.0);
    CHECK(sc.rows[9][0] == 1.0);

    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const auto back = sc.to_original_units(sc.rows[r]);
        for (std::size_t i = 0; i < back.size(); ++i)
            CHECK(back[i] == Catch::Approx(ds.rows[r][i]).margin(1e-9));
    }
}

TEST_CASE("minmax_scale drops constant columns") {
    Dataset ds = testutil::toy_dataset();
    for (auto& row : ds.rows) row.push_back(3.14);
    ds.feature_names.push_back("const");
    Dataset sc = minmax_scale(ds);
    CHECK(sc.n_features() == 2);
    bool noted = false;
    for (const auto& n : sc.notes) noted = noted || n.find("const") != std::string::npos;
    CHECK(noted);

    Dataset all_const;
    all_const.feature_names = {"c"};
    all_const.n_classes = 2;
    all_const.rows = {{1.0}, {1.0}};
    all_const.labels = {0, 1};
    CHECK_THROWS_AS(minmax_scale(all_const), DataError);
}

TEST_CASE("apply_scaling matches minmax_scale output") {
    Dataset ds = testutil::toy_dataset();
    Dataset sc = minmax_scale(ds);
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const auto via = apply_scaling(ds.rows[r], sc.scale_min, sc.scale_max);
        CHECK(via == sc.rows[r]);
    }
    CHECK_THROWS_AS(apply_scaling({1.0}, sc.scale_min, sc.scale_max), DataError);
}

TEST_CASE("split_70_30 partitions the rows") {
    Dataset ds = testutil::toy_dataset();
    auto [train, test] = split_70_30(ds, 42);
    CHECK(train.n_rows() == 7);  // floor(0.7 * 10)
    CHECK(test.n_rows() == 3);

    // every original row appears exactly once across the two splits
    std::multiset<double> seen;
    for (const auto& r : train.rows) seen.insert(r[0]);
    for (const auto& r : test.rows) seen.insert(r[0]);
    std::multiset<double> want;
    for (const auto& r : ds.rows) want.insert(r[0]);
    CHECK(seen == want);
}

TEST_CASE("split_indices_70_30 is deterministic per seed") {
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 2;
    const auto a = split_indices_70_30(labels, 2, 1);
    const auto b = split_indices_70_30(labels, 2, 1);
    const auto c = split_indices_70_30(labels, 2, 2);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.train != c.train);
}

TEST_CASE("stratified split keeps per-class ratios") {
    // 30 of class 0, 10 of class 1
    std::vector<int> labels;
    for (int i = 0; i < 30; ++i) labels.push_back(0);
    for (int i = 0; i < 10; ++i) labels.push_back(1);
    const auto idx = split_indices_70_30(labels, 2, 9, true);
    std::size_t train1 = 0;
    for (std::size_t i : idx.train)
        if (labels[i] == 1) ++train1;
    CHECK(idx.train.size() == 21 + 7);
    CHECK(train1 == 7);  // floor(0.7 * 10) of the minority class
    // stratified output is sorted, which keeps downstream row order stable
    CHECK(std::is_sorted(idx.train.begin(), idx.train.end()));
}

TEST_CASE("split refuses tiny datasets") {
    std::vector<int> labels = {0, 1, 0, 1};
    CHECK_THROWS_AS(split_indices_70_30(labels, 2, 0), DataError);
}
