#include <doctest.h>

#include <string>
#include <vector>

#include "bratteli/catalog.hpp"
#include "bratteli/error.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/json_io.hpp"
#include "bratteli/link_engine.hpp"
#include "bratteli/realize.hpp"
#include "test_support.hpp"

using namespace bratteli;

TEST_CASE("scalars serialize per numeric mode") {
  CHECK(scalar_to_json<Rational>(Rational(22, 7)) == Json("22/7"));
  CHECK(scalar_to_json<double>(0.1) == Json(0.1));

  // Both modes accept both spellings.
  CHECK(scalar_from_json<Rational>(Json("3/4")) == Rational(3, 4));
  CHECK(scalar_from_json<Rational>(Json(7)) == Rational(7));
  CHECK(scalar_from_json<Rational>(Json(0.25)) == Rational(1, 4));  // dyadic, exact
  CHECK(scalar_from_json<double>(Json("3/4")) == 0.75);
  CHECK(scalar_from_json<double>(Json(0.1)) == 0.1);

  CHECK(ext_to_json(ExtScalar<Rational>::infinity()) == Json("inf"));
  CHECK(ext_from_json<double>(Json("inf")).infinite());
  CHECK(ext_from_json<Rational>(Json("5/3")).finite() == Rational(5, 3));

  CHECK_THROWS_AS((void)scalar_from_json<Rational>(Json("x")), Error);
  CHECK_THROWS_AS((void)scalar_from_json<double>(Json::array()), Error);
}

TEST_CASE("vertex keys round-trip with and without brackets") {
  auto g = young(4);
  VertexRef v = g->vertex(3, "2+1");
  CHECK(vertex_key(*g, v) == "[3,2+1]");
  CHECK(vertex_from_key(*g, "[3,2+1]") == v);
  CHECK(vertex_from_key(*g, "3,2+1") == v);
  CHECK(vertex_from_json(*g, vertex_to_json(*g, v)) == v);

  CHECK_THROWS_AS((void)vertex_from_key(*g, "nocomma"), Error);
  CHECK_THROWS_AS((void)vertex_from_key(*g, "x,2+1"), Error);
  CHECK_THROWS_AS((void)vertex_from_key(*g, "3,9+9"), Error);
  CHECK_THROWS_AS((void)vertex_from_json(*g, Json::array({3})), Error);
}

TEST_CASE("graphs round-trip structurally") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    GraphPtr g = support::random_graph(rng, 4, 4);
    GraphPtr back = graph_from_json(graph_to_json(*g));
    CHECK(g->same_structure(*back));
  }
  GraphPtr y = young(5);
  CHECK(y->same_structure(*graph_from_json(graph_to_json(*y))));
}

TEST_CASE("graph parsing rejects malformed documents") {
  CHECK_THROWS_AS((void)graph_from_json(Json("nope")), Error);
  CHECK_THROWS_AS((void)graph_from_json(Json{{"levels", 3}}), Error);
  // Labels must be strings.
  CHECK_THROWS_AS((void)graph_from_json(Json{{"levels", Json::array({Json::array({1})})}}),
                  Error);
  // Edge endpoints must exist and climb exactly one level.
  Json j{{"levels", Json::array({Json::array({"1"}), Json::array({"a"})})},
         {"edges", Json::array({Json{{"from", Json::array({0, "1"})},
                                     {"to", Json::array({1, "zzz"})}}})}};
  CHECK_THROWS_AS((void)graph_from_json(j), Error);
  j["edges"][0]["to"] = Json::array({0, "1"});
  CHECK_THROWS_AS((void)graph_from_json(j), Error);
  // Multiplicity below 1.
  j["edges"][0]["to"] = Json::array({1, "a"});
  j["edges"][0]["m"] = 0;
  CHECK_THROWS_AS((void)graph_from_json(j), Error);
  j["edges"][0]["m"] = 2;
  CHECK(graph_from_json(j)->edges_at(1)[0].multiplicity == 2);
}

TEST_CASE("flows round-trip with identical partition tables") {
  // Spectrum-backed flow, float mode.
  Rng rng(23);
  GraphPtr g = support::random_graph(rng, 4, 3);
  auto f = support::random_spectrum_flow(rng, g, 0.9);
  auto back = flow_from_json<double>(flow_to_json(f));
  CHECK(back.beta() == f.beta());
  CHECK(back.graph().same_structure(f.graph()));
  for (int n = 0; n <= 4; ++n)
    for (int v = 0; v < g->level_size(n); ++v)
      CHECK(back.vertex_partition({n, v}).finite() ==
            doctest::Approx(f.vertex_partition({n, v}).finite()).epsilon(1e-15));

  // Weight-backed flow, exact mode: values survive exactly through the
  // emitted weights even though the spectrum view is approximate.
  auto fr = support::random_weight_flow<Rational>(rng, g, 1.25);
  auto backr = flow_from_json<Rational>(flow_to_json(fr));
  for (int n = 1; n <= 4; ++n)
    for (std::size_t e = 0; e < g->edges_at(n).size(); ++e)
      CHECK(backr.edge_partition(n, static_cast<int>(e)).finite() ==
            fr.edge_partition(n, static_cast<int>(e)).finite());

  // Partition-only flows keep their "inf" marks.
  Json pj = flow_to_json(fr);
  pj["edges"][0].erase("spectrum");
  pj["edges"][0].erase("weights");
  pj["edges"][0]["Z"] = "inf";
  auto fp = flow_from_json<Rational>(pj);
  CHECK(fp.edge_partition(1, 0).infinite());

  // beta is mandatory.
  Json nf = flow_to_json(f);
  nf.erase("beta");
  CHECK_THROWS_AS((void)flow_from_json<double>(nf), Error);
}

TEST_CASE("coherent systems and measures round-trip") {
  auto nu = bernoulli_system<Rational>(5, Rational(1, 3));
  Json j = system_to_json(nu);
  auto back = system_from_json<Rational>(j, nu.graph);
  CHECK(back.depth() == 5);
  for (int n = 0; n <= 5; ++n) CHECK(back.values[n] == nu.values[n]);

  // Omitted vertices read back as zero mass.
  Json sparse{{"[0,1]", 1}, {"[1,1]", "1"}};
  auto point = system_from_json<Rational>(sparse, nu.graph);
  CHECK(point.depth() == 1);
  CHECK(point.values[1] == std::vector<Rational>{Rational(0), Rational(1)});

  LevelMeasure<Rational> mu{3, {Rational(1, 6), Rational(1, 2), Rational(1, 4), Rational(1, 12)}};
  auto mback = measure_from_json<Rational>(measure_to_json(mu, *nu.graph), *nu.graph);
  CHECK(mback.level == 3);
  CHECK(mback.weights == mu.weights);

  CHECK_THROWS_AS((void)measure_from_json<Rational>(Json{{"weights", Json::object()}},
                                                    *nu.graph),
                  Error);
  CHECK_THROWS_AS(
      (void)measure_from_json<Rational>(
          Json{{"level", 1}, {"weights", Json{{"bogus", 1}}}}, *nu.graph),
      Error);
}

TEST_CASE("abstract links round-trip through their edge list") {
  Rng rng(31);
  GraphPtr g = support::random_graph(rng, 3, 3);
  auto k = support::random_link<Rational>(rng, g);
  auto back = link_spec_from_json<Rational>(link_spec_to_json(k));
  CHECK(back.graph->same_structure(*g));
  for (int n = 1; n <= 3; ++n) CHECK(back.weights[n] == k.weights[n]);

  Json j = link_spec_to_json(k);
  j["edges"][0].erase("kappa");
  CHECK_THROWS_AS((void)link_spec_from_json<Rational>(j), Error);
}

TEST_CASE("partition tables and link matrices export cleanly") {
  auto f = q_pascal<Rational>(3, Rational(1, 2), 1.0);
  Json t = partition_table_to_json(f);
  CHECK(t["beta"] == Json(1.0));
  CHECK(t["vertexZ"]["[3,2]"] == Json("3/8"));
  CHECK(t["vertexZ"]["[0,1]"] == Json("1"));

  auto fp = pascal_flow<Rational>(3, 0.0);
  auto m = link_matrix(fp, 3, 2);
  Json mj = link_matrix_to_json(m, fp.graph());
  CHECK(mj["upper"] == Json(3));
  CHECK(mj["rows"]["[3,1]"][1] == Json("2/3"));

  std::string csv = link_matrix_to_csv(m, fp.graph());
  CHECK(csv.find("vertex,0,1,2\n") == 0);
  CHECK(csv.find("[3,1],1/3,2/3,0\n") != std::string::npos);

  CHECK(csv.back() == '\n');
}

TEST_CASE("ergodic tables print one row per level") {
  auto f = pascal_flow<Rational>(5, 0.0);
  auto nu = bernoulli_system<Rational>(5, Rational(1, 2));
  std::vector<VertexRef> path{{1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 2}};
  auto table = ergodic_experiment(f, nu, {VertexRef{1, 1}}, path);

  std::string csv = ergodic_table_to_csv<Rational>(table, f.graph(), nullptr);
  CHECK(csv == "m,[1,1]\n2,1/2\n3,1/3\n4,1/2\n5,2/5\n");

  std::string dev = ergodic_table_to_csv(table, f.graph(), &nu);
  CHECK(dev.find("m,[1,1],dev [1,1]\n") == 0);
  CHECK(dev.find("5,2/5,1/10\n") != std::string::npos);
}

TEST_CASE("sampled paths round-trip with their seed") {
  auto f = pascal_flow<double>(4, 0.0);
  auto nu = bernoulli_system<double>(4, 0.5);
  Rng rng(99);
  auto p = sample_down(f, nu, 4, rng);
  Json j = sampled_path_to_json(p, f.graph());
  CHECK(j["seed"] == Json(p.seed));
  auto verts = path_from_json(j, f.graph());
  CHECK(verts == p.vertices);

  CHECK_THROWS_AS((void)path_from_json(Json{{"seed", 1}}, f.graph()), Error);
}

TEST_CASE("file io reports missing and malformed inputs") {
  CHECK_THROWS_AS((void)load_json_file("/nonexistent/nowhere.json"), Error);
  std::string tmp = "/tmp/bratteli_test_bad.json";
  write_text_file(tmp, "{ not json");
  CHECK_THROWS_AS((void)load_json_file(tmp), Error);
  write_text_file(tmp, "{\"levels\":[[\"1\"]]}");
  CHECK(graph_from_json(load_json_file(tmp))->depth() == 0);
}
