#include "webalign/ax_tree.hpp"

#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "webalign/errors.hpp"

using namespace webalign;
using namespace webalign::ax;

namespace {

std::set<int> ids_of(const std::vector<NodePath>& paths, const AXTree& tree) {
    std::set<int> out;
    for (const auto& path : paths) {
        const AXNode& node = tree.node_at(path);
        if (node.node_id) out.insert(*node.node_id);
    }
    return out;
}

}  // namespace

TEST_CASE("parse: three-node tree with attribute") {
    const std::string text =
        "RootWebArea [1] 'Google'\n"
        "\tsearch [6]\n"
        "\t\tcombobox [12] 'Search' [required: False]";
    AXTree tree = parse_ax_tree(text);

    CHECK(tree.node_count() == 3);
    CHECK(tree.root().role == "RootWebArea");
    CHECK(tree.root().node_id == 1);
    CHECK(tree.root().name == "Google");

    const AXNode* combobox = tree.find(12);
    REQUIRE(combobox != nullptr);
    CHECK(combobox->role == "combobox");
    CHECK(combobox->depth == 2);
    REQUIRE(combobox->attributes.size() == 1);
    CHECK(combobox->attributes[0].first == "required");
    CHECK(combobox->attributes[0].second == "False");
}

TEST_CASE("parse: empty input raises EmptyObservation") {
    CHECK_THROWS_AS(parse_ax_tree(""), EmptyObservationError);
    CHECK_THROWS_AS(parse_ax_tree("  \n\t\n"), EmptyObservationError);
}

TEST_CASE("parse: indentation jump names the line") {
    const std::string text = "RootWebArea [1] 'A'\n\t\tlink [2] 'B'";
    try {
        parse_ax_tree(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("parse: second root rejected") {
    CHECK_THROWS_AS(parse_ax_tree("RootWebArea [1] 'A'\nRootWebArea [2] 'B'"), ParseError);
}

TEST_CASE("parse: duplicate ids rejected") {
    CHECK_THROWS_AS(parse_ax_tree("RootWebArea [1] 'A'\n\tlink [1] 'B'"), ParseError);
}

TEST_CASE("parse: id-less, name-less and attribute-only rows") {
    const std::string text =
        "RootWebArea [1] 'Admin'\n"
        "\ttext 'Scope:'\n"
        "\tcontentinfo\n"
        "\ttextbox [894] [required: False]";
    AXTree tree = parse_ax_tree(text);
    REQUIRE(tree.root().children.size() == 3);

    const AXNode& scope = tree.root().children[0];
    CHECK(!scope.node_id.has_value());
    CHECK(scope.name == "Scope:");

    const AXNode& info = tree.root().children[1];
    CHECK(info.role == "contentinfo");
    CHECK(!info.name.has_value());

    const AXNode& box = tree.root().children[2];
    CHECK(box.node_id == 894);
    CHECK(!box.name.has_value());
    REQUIRE(box.attributes.size() == 1);
    CHECK(box.attributes[0].first == "required");
}

TEST_CASE("parse: unterminated quote runs to end of line") {
    AXTree tree = parse_ax_tree("RootWebArea [1] 'A'\n\ttabpanel 'The information in this tab");
    CHECK(tree.root().children[0].name == "The information in this tab");
}

TEST_CASE("parse: bracketed substrings inside quoted names are not attributes") {
    AXTree tree = parse_ax_tree("row '| a [1] | b |' [selected: True]");
    CHECK(tree.root().name == "| a [1] | b |");
    REQUIRE(tree.root().attributes.size() == 1);
    CHECK(tree.root().attributes[0].first == "selected");
}

TEST_CASE("parse: malformed rows degrade to name-only nodes") {
    AXTree tree = parse_ax_tree("RootWebArea [1] 'A'\n\theading Dashboard and more");
    const AXNode& node = tree.root().children[0];
    CHECK(node.role == "heading");
    CHECK(node.name == "Dashboard and more");
    CHECK(!node.node_id.has_value());
}

TEST_CASE("parse: space-indented dumps are auto-detected") {
    const std::string text =
        "RootWebArea [1] 'A'\n"
        "    link [2] 'B'\n"
        "        StaticText 'C'\n"
        "    link [3] 'D'";
    AXTree tree = parse_ax_tree(text);
    CHECK(tree.node_count() == 4);
    CHECK(tree.find(3)->depth == 1);
}

TEST_CASE("serialize: canonical single lines") {
    AXNode root;
    root.role = "RootWebArea";
    root.node_id = 1;
    root.name = "Google";
    CHECK(serialize(AXTree(std::move(root))) == "RootWebArea [1] 'Google'");

    AXNode bare;
    bare.role = "contentinfo";
    CHECK(serialize(AXTree(std::move(bare))) == "contentinfo");

    AXNode apostrophe;
    apostrophe.role = "button";
    apostrophe.node_id = 273;
    apostrophe.name = "I'm Feeling Lucky";
    CHECK(serialize(AXTree(std::move(apostrophe))) == "button [273] \"I'm Feeling Lucky\"");
}

TEST_CASE("serialize: strip_ids leaves names and attributes") {
    AXTree tree = parse_ax_tree("combobox [12] 'Search' [required: False]");
    CHECK(serialize(tree, {.strip_ids = true}) == "combobox 'Search' [required: False]");
}

TEST_CASE("golden fixtures round-trip byte-exactly") {
    for (const char* name : {"google_search_page.ax", "admin_dashboard.ax"}) {
        CAPTURE(name);
        std::string text = testutil::read_fixture(name);
        while (!text.empty() && text.back() == '\n') text.pop_back();
        AXTree tree = parse_ax_tree(text);
        CHECK(serialize(tree) == text);
    }
}

TEST_CASE("property: parse(serialize(T)) == T on random trees") {
    testutil::TreeGen gen(20240901);
    for (int i = 0; i < 1000; ++i) {
        AXTree tree = gen.tree(64);
        AXTree reparsed = parse_ax_tree(serialize(tree));
        REQUIRE(reparsed == tree);
    }
}

TEST_CASE("relatives: root has no ancestors or siblings") {
    AXTree tree = testutil::TreeGen(7).tree(32);
    REQUIRE(tree.root().node_id.has_value());
    Relatives r = relatives(tree, *tree.root().node_id);
    CHECK(r.ancestors.empty());
    CHECK(r.siblings.empty());
    CHECK(r.descendants.size() == tree.node_count() - 1);
}

TEST_CASE("relatives: combobox 12 in the transcribed search page") {
    // Same shape as the worked search-page example, with an id on the root so
    // the ancestor set is checkable by id.
    std::string text = testutil::read_fixture("google_search_page.ax");
    text.replace(text.find("RootWebArea 'Google'"), 20, "RootWebArea [1] 'Google'");
    AXTree tree = parse_ax_tree(text);

    Relatives r = relatives(tree, 12);
    CHECK(ids_of(r.ancestors, tree) == std::set<int>{6, 1});
    CHECK(ids_of(r.siblings, tree) == std::set<int>{294, 295, 272, 273});
    CHECK(r.descendants.empty());
}

TEST_CASE("relatives: unknown id raises UnknownNode") {
    AXTree tree = parse_ax_tree("RootWebArea [1] 'A'");
    CHECK_THROWS_AS(relatives(tree, 99), UnknownNodeError);
}

TEST_CASE("property: relatives matches the brute-force oracle") {
    testutil::TreeGen gen(424242);
    for (int i = 0; i < 250; ++i) {
        AXTree tree = gen.tree(48);
        testutil::FlatTree flat = testutil::FlatTree::build(tree);
        for (const auto& [id, path] : tree.id_index()) {
            Relatives r = relatives(tree, id);
            testutil::BruteRelatives expected =
                testutil::brute_relatives(flat, flat.index_of_path(path));

            std::set<NodePath> got_anc(r.ancestors.begin(), r.ancestors.end());
            std::set<NodePath> got_sib(r.siblings.begin(), r.siblings.end());
            std::set<NodePath> got_desc(r.descendants.begin(), r.descendants.end());
            REQUIRE(got_anc == expected.ancestors);
            REQUIRE(got_sib == expected.siblings);
            REQUIRE(got_desc == expected.descendants);

            // |ancestors(n)| = depth(n); relative sets are disjoint from self.
            REQUIRE(static_cast<int>(r.ancestors.size()) == tree.node_at(path).depth);
            REQUIRE(got_anc.count(path) == 0);
            REQUIRE(got_sib.count(path) == 0);
            std::set<NodePath> overlap;
            for (const auto& p : got_anc) {
                if (got_desc.count(p)) overlap.insert(p);
            }
            REQUIRE(overlap.empty());
        }
    }
}
