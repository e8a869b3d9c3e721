#include <catch2/catch_amalgamated.hpp>

#include "facmed/io.hpp"
#include "facmed/median.hpp"

using namespace facmed;

TEST_CASE("minimal instance document parses") {
    const std::string doc = R"({
      "schema": 1,
      "kind": "instance",
      "metric": {"vertices": ["only"], "edges": []},
      "mediators": [["only"]]
    })";
    auto parsed = parse_document(doc);
    REQUIRE(std::holds_alternative<Instance>(parsed));
    const Instance& inst = std::get<Instance>(parsed);
    CHECK(inst.total_agents() == 1);
    CHECK(inst.z == inst.metric.vertex_point(0)); // defaulted to the smallest-id vertex
    CHECK(inst.z_list.size() == 1);
}

TEST_CASE("documents with bad fields are rejected with the field named") {
    const std::string zero_len = R"({
      "schema": 1, "kind": "instance",
      "metric": {"vertices": ["a", "b"], "edges": [{"a": "a", "b": "b", "length": "0/1"}]},
      "mediators": [["a"]]
    })";
    CHECK_THROWS_WITH(parse_document(zero_len),
                      Catch::Matchers::ContainsSubstring("non-positive"));

    const std::string decimal = R"({
      "schema": 1, "kind": "instance",
      "metric": {"vertices": ["a", "b"], "edges": [{"a": "a", "b": "b", "length": "1.5"}]},
      "mediators": [["a"]]
    })";
    CHECK_THROWS_WITH(parse_document(decimal), Catch::Matchers::ContainsSubstring("length"));

    const std::string unknown_vertex = R"({
      "schema": 1, "kind": "instance",
      "metric": {"vertices": ["a", "b"], "edges": [{"a": "a", "b": "b", "length": "1"}]},
      "mediators": [["zz"]]
    })";
    CHECK_THROWS_WITH(parse_document(unknown_vertex),
                      Catch::Matchers::ContainsSubstring("unknown vertex 'zz'"));

    const std::string empty_mediator = R"({
      "schema": 1, "kind": "instance",
      "metric": {"vertices": ["a", "b"], "edges": [{"a": "a", "b": "b", "length": "1"}]},
      "mediators": [[]]
    })";
    CHECK_THROWS_WITH(parse_document(empty_mediator),
                      Catch::Matchers::ContainsSubstring("mediators[0]"));

    const std::string cyclic = R"({
      "schema": 1, "kind": "instance",
      "metric": {"vertices": ["a", "b", "c"],
                 "edges": [{"a": "a", "b": "b", "length": "1"},
                            {"a": "b", "b": "c", "length": "1"},
                            {"a": "c", "b": "a", "length": "1"}]},
      "mediators": [["a"]]
    })";
    CHECK_THROWS_AS(parse_document(cyclic), validation_error);

    const std::string bad_offset = R"({
      "schema": 1, "kind": "instance",
      "metric": {"vertices": ["a", "b"], "edges": [{"a": "a", "b": "b", "length": "1"}]},
      "mediators": [[{"edge": ["a", "b"], "offset": "3/2"}]]
    })";
    CHECK_THROWS_WITH(parse_document(bad_offset), Catch::Matchers::ContainsSubstring("offset"));
}

TEST_CASE("serialize then parse is the identity on canonical documents") {
    for (const std::string doc :
         {serialize(fig1_tree()), serialize(family_ex51(Rational(0), Rational(1), 2, 1)),
          serialize(sec6_example()), serialize(family_ex61(2, 3, 2))}) {
        auto parsed = parse_document(doc);
        const std::string again =
            std::holds_alternative<Instance>(parsed)
                ? serialize(std::get<Instance>(parsed))
                : serialize(std::get<HierarchyInstance>(parsed));
        CHECK(doc == again);
    }
}

TEST_CASE("interior points round-trip with offsets measured from the smaller endpoint") {
    TreeMetric::Builder b;
    VertexId hi = b.add_vertex("zz");
    VertexId lo = b.add_vertex("aa");
    b.add_edge(hi, lo, Rational(4)); // stored orientation runs zz -> aa
    Instance inst;
    inst.metric = b.build();
    inst.mediators = {{inst.metric.point_on_edge(0, Rational(1))}};
    inst.z = inst.metric.vertex_point(lo);
    inst.z_list = {inst.z};

    const std::string doc = serialize(inst);
    CHECK(doc.find("\"aa\",") != std::string::npos);
    auto reparsed = std::get<Instance>(parse_document(doc));
    // The reparsed point must denote the same location: 1 away from zz.
    PointRef p = reparsed.mediators[0][0];
    CHECK(reparsed.metric.distance(p, reparsed.metric.vertex_point(*reparsed.metric.find_vertex("zz"))) ==
          1);
    CHECK(serialize(reparsed) == doc);
}

TEST_CASE("generator is a pure function of the seed") {
    GeneratorParams params;
    params.seed = 1;
    CHECK(serialize(gen_random(params)) == serialize(gen_random(params)));
    CHECK(serialize(gen_random_hierarchy(params)) == serialize(gen_random_hierarchy(params)));

    GeneratorParams other = params;
    other.seed = 2;
    CHECK(serialize(gen_random(params)) != serialize(gen_random(other)));
}

TEST_CASE("generator degenerate ranges stay valid") {
    GeneratorParams params;
    params.seed = 42;
    params.min_vertices = params.max_vertices = 1;
    params.min_mediators = params.max_mediators = 1;
    params.min_agents = params.max_agents = 1;
    Instance inst = gen_random(params);
    CHECK(inst.total_agents() == 1);
    CHECK(inst.metric.vertex_count() == 1);

    GeneratorParams bad;
    bad.min_vertices = 5;
    bad.max_vertices = 2;
    CHECK_THROWS_AS(gen_random(bad), validation_error);
}

TEST_CASE("generated instances parse back and validate") {
    GeneratorParams params;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        params.seed = seed;
        Instance inst = gen_random(params);
        if (seed % 20 == 0) {
            auto round = std::get<Instance>(parse_document(serialize(inst)));
            CHECK(serialize(round) == serialize(inst));
        }
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        params.seed = seed;
        HierarchyInstance h = gen_random_hierarchy(params);
        CHECK(h.depth() >= static_cast<std::size_t>(params.min_depth));
        CHECK(h.depth() <= static_cast<std::size_t>(params.max_depth));
    }
}

TEST_CASE("path-forced generation yields a path metric") {
    GeneratorParams params;
    params.force_path = true;
    params.min_vertices = 2;
    params.max_vertices = 9;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        params.seed = seed;
        CHECK(gen_random(params).metric.is_path_graph());
    }
}

TEST_CASE("two-block line family lays out agents as specified") {
    Instance i1 = family_ex51(Rational(0), Rational(1), 2, 1);
    CHECK(i1.total_agents() == 10);
    REQUIRE(i1.mediators.size() == 2);
    const PointRef zero = i1.metric.vertex_point(0);
    const PointRef one = i1.metric.vertex_point(1);
    CHECK(std::count(i1.mediators[0].begin(), i1.mediators[0].end(), zero) == 3);
    CHECK(std::count(i1.mediators[0].begin(), i1.mediators[0].end(), one) == 2);
    CHECK(std::count(i1.mediators[1].begin(), i1.mediators[1].end(), one) == 5);

    Instance i3 = family_ex51(Rational(0), Rational(1), 1, 3);
    CHECK(i3.mediators[0] == std::vector<PointRef>(3, zero));
    CHECK(i3.mediators[1] == std::vector<PointRef>(3, one));

    // Each mediator's unique median is l for the first and h for the second.
    for (int variant = 1; variant <= 3; ++variant) {
        Instance inst = family_ex51(make_rational(1, 4), make_rational(3, 4), 3, variant);
        const PointRef pl = inst.metric.point_on_edge(0, make_rational(1, 4));
        const PointRef ph = inst.metric.point_on_edge(0, make_rational(3, 4));
        for (const PointRef& z : {inst.metric.vertex_point(0), inst.metric.vertex_point(1)}) {
            CHECK(median_of_points(inst.metric, inst.mediators[0], z) == pl);
            CHECK(median_of_points(inst.metric, inst.mediators[1], z) == ph);
        }
    }

    CHECK_THROWS_AS(family_ex51(Rational(1), Rational(0), 2, 1), validation_error);
    CHECK_THROWS_AS(family_ex51(Rational(0), Rational(1), 0, 1), validation_error);
    CHECK_THROWS_AS(family_ex51(Rational(0), Rational(1), 2, 4), validation_error);
}

TEST_CASE("hierarchy family agent totals and layout") {
    HierarchyInstance h = family_ex61(2, 3, 2);
    CHECK(h.total_agents() == 5);
    CHECK(h.depth() == 3);
    // The lopsided mediator holds three agents at 0; its sibling two at 1.
    const HierarchyNode& lvl2 = h.root.children[0];
    REQUIRE(lvl2.children.size() == 2);
    const HierarchyNode& d11 = lvl2.children[0];
    CHECK(d11.children.size() == 3);
    for (const auto& a : d11.children) CHECK(a.location == h.metric.vertex_point(0));
    const HierarchyNode& d12 = lvl2.children[1];
    CHECK(d12.children.size() == 2);
    for (const auto& a : d12.children) CHECK(a.location == h.metric.vertex_point(1));

    for (long long r : {1LL, 2LL, 5LL}) {
        for (int s : {3, 4, 5}) {
            HierarchyInstance v1 = family_ex61(r, s, 1);
            CHECK(v1.total_agents() == static_cast<std::size_t>(r * (1LL << (s - 2)) + 1));
            CHECK(v1.depth() == static_cast<std::size_t>(s));
        }
    }
    CHECK(family_ex61(1, 3, 1).total_agents() == 3);
    CHECK_THROWS_AS(family_ex61(1, 2, 1), validation_error);
    CHECK_THROWS_AS(family_ex61(0, 3, 1), validation_error);
}

TEST_CASE("seven-mediator tree instance matches its stated layout") {
    Instance f = fig1_tree();
    CHECK(f.total_agents() == 100);
    CHECK(f.mediators.size() == 7);
    CHECK(f.metric.vertex_count() == 8);
    CHECK(f.metric.find_vertex("E").has_value());
    // E is a pure junction: no mediator sits there.
    const PointRef e = f.metric.vertex_point(*f.metric.find_vertex("E"));
    for (const auto& m : f.mediators)
        for (const auto& t : m) CHECK(t != e);
}

TEST_CASE("two-level worked example has five agents at depth three") {
    HierarchyInstance h = sec6_example();
    CHECK(h.total_agents() == 5);
    CHECK(h.depth() == 3);
    CHECK(h.root.children.size() == 1);
    CHECK(h.root.children[0].name == "C");
}

TEST_CASE("digest is stable and content sensitive") {
    const std::string a = serialize(fig1_tree());
    CHECK(digest(a) == digest(a));
    CHECK(digest(a) != digest(a + " "));
    CHECK(digest(a).substr(0, 8) == "fnv1a64:");
}
