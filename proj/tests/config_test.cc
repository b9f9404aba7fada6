#include "quditrep/config.hpp"

#include <sstream>

#include "gtest/gtest.h"

#include "quditrep/dataset.hpp"

using namespace quditrep;

TEST(run_config, defaults_are_the_baseline) {
    const RunConfig cfg;
    EXPECT_DOUBLE_EQ(cfg.phys.alpha_db_per_km, 0.2);
    EXPECT_DOUBLE_EQ(cfg.phys.f_m, 1e-2);
    EXPECT_DOUBLE_EQ(cfg.phys.f_g, 1e-3);
    EXPECT_DOUBLE_EQ(cfg.phys.gamma_db_per_ms, 1e-2);
    EXPECT_DOUBLE_EQ(cfg.phys.c_km_per_ms, 200.0);
    EXPECT_EQ(cfg.encoding, Encoding::Multimode);
    EXPECT_EQ(cfg.code.type, "polynomial");
    EXPECT_NO_THROW(cfg.validate());
}

TEST(run_config, canonical_round_trip_is_byte_identical) {
    RunConfig cfg;
    cfg.encoding = Encoding::Fock;
    cfg.code.dim = 17;
    TopologySelection topo;
    topo.total_km = 123.456;
    topo.n_links = 250;
    cfg.topology = topo;
    SweepSettings sweep;
    sweep.variable = "fM";
    sweep.from = 1e-5;
    sweep.to = 0.1;
    sweep.points = 50;
    cfg.sweep = sweep;
    cfg.oracle.samples = 31337;
    cfg.oracle.seed = 99;
    cfg.output.format = "json";
    cfg.output.path = "out.json";

    const std::string once = canonical_config(cfg);
    const RunConfig reread = config_from_string(once);
    const std::string twice = canonical_config(reread);
    EXPECT_EQ(once, twice);
    EXPECT_EQ(config_hash(cfg), config_hash(reread));
}

TEST(run_config, minimal_and_unknown_keys) {
    const RunConfig least = config_from_string("{}");
    EXPECT_DOUBLE_EQ(least.phys.alpha_db_per_km, 0.2);
    EXPECT_THROW(config_from_string(R"({"alpha": 0.2})"), ValidationError);
    EXPECT_THROW(config_from_string(R"({"physical": {"beta": 1}})"), ValidationError);
    EXPECT_THROW(config_from_string("not json"), ValidationError);
    EXPECT_THROW(config_from_string(R"({"schema": "quditrep.config/99"})"), ValidationError);
}

TEST(run_config, validation_failures) {
    RunConfig cfg;
    cfg.code.dim = 4;  // composite
    EXPECT_THROW(cfg.validate(), ValidationError);

    cfg = RunConfig{};
    cfg.phys.f_m = 1.5;
    EXPECT_THROW(cfg.validate(), ValidationError);

    cfg = RunConfig{};
    cfg.output.format = "xml";
    EXPECT_THROW(cfg.validate(), ValidationError);

    cfg = RunConfig{};
    TopologySelection topo;
    topo.total_km = 100.0;
    topo.n_links = 10;
    topo.spacing_km = 1.0;  // both given
    cfg.topology = topo;
    EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(topology_selection, spacing_converts_to_even_links) {
    TopologySelection topo;
    topo.total_km = 100.0;
    topo.spacing_km = 0.3;
    const Topology t = topo.make();
    EXPECT_EQ(t.n_links(), 334);  // 333.33 -> nearest even
    EXPECT_THROW((TopologySelection{100.0, std::nullopt, std::nullopt}.make()),
                 ValidationError);
}

TEST(run_config, scenario_requires_topology) {
    RunConfig cfg;
    EXPECT_THROW(cfg.make_scenario(), ValidationError);
    TopologySelection topo;
    topo.total_km = 200.0;
    topo.n_links = 100;
    cfg.topology = topo;
    const Scenario sc = cfg.make_scenario();
    EXPECT_EQ(sc.topo.n_links(), 100);
    EXPECT_EQ(sc.code.dim, 13);
}

TEST(dataset, csv_layout_and_precision) {
    Dataset ds;
    ds.columns = {"name", "value", "flag"};
    ds.meta = {{"version", kVersion}};
    ds.add_row({"third", 1.0 / 3.0, true});
    ds.add_row({"empty", nullptr, false});
    std::ostringstream os;
    write_csv(os, ds);
    const std::string text = os.str();
    EXPECT_NE(text.find("# quditrep.dataset/1"), std::string::npos);
    EXPECT_NE(text.find("# meta {"), std::string::npos);
    EXPECT_NE(text.find("name,value,flag"), std::string::npos);
    EXPECT_NE(text.find("third,0.33333333333333331,true"), std::string::npos);
    EXPECT_NE(text.find("empty,,false"), std::string::npos);
}

TEST(dataset, json_round_trips_rows) {
    Dataset ds;
    ds.columns = {"a", "b"};
    ds.meta = {{"k", "v"}};
    ds.add_row({1.5, "x"});
    std::ostringstream os;
    write_json(os, ds);
    const nlohmann::json doc = nlohmann::json::parse(os.str());
    EXPECT_EQ(doc.at("schema"), "quditrep.dataset/1");
    EXPECT_EQ(doc.at("columns").size(), 2u);
    EXPECT_DOUBLE_EQ(doc.at("rows")[0][0].get<double>(), 1.5);
}

TEST(dataset, rejects_ragged_rows) {
    Dataset ds;
    ds.columns = {"a"};
    EXPECT_THROW(ds.add_row({1, 2}), ValidationError);
}

TEST(dataset, csv_escaping) {
    Dataset ds;
    ds.columns = {"text"};
    ds.add_row({"a,b \"quoted\""});
    std::ostringstream os;
    write_csv(os, ds);
    EXPECT_NE(os.str().find("\"a,b \"\"quoted\"\"\""), std::string::npos);
}

TEST(dataset_meta, embeds_reproducibility_fields) {
    RunConfig cfg;
    const nlohmann::json meta = dataset_meta(cfg, "gain --dim 13");
    EXPECT_EQ(meta.at("version"), kVersion);
    EXPECT_EQ(meta.at("command"), "gain --dim 13");
    EXPECT_EQ(meta.at("config_hash"), config_hash(cfg));
    EXPECT_TRUE(meta.contains("config"));
    EXPECT_TRUE(meta.contains("seed"));
}
