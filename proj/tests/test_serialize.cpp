#include "classhier/serialize.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace classhier;
using testutil::lf;

TEST(Serialize, JsonLayout) {
  const auto t = combine({lf(0), lf(1)}, 2);
  const auto j = tree_to_json(t);
  EXPECT_EQ(j["id"], 2);
  EXPECT_TRUE(j["label"].is_null());
  EXPECT_EQ(j["classes"], (std::vector<int>{0, 1}));
  ASSERT_EQ(j["children"].size(), 2u);
  EXPECT_EQ(j["children"][0]["id"], 0);
  EXPECT_EQ(j["children"][0]["label"], "class0");
  EXPECT_EQ(j["children"][0]["classes"], (std::vector<int>{0}));
  EXPECT_TRUE(j["children"][0]["children"].empty());
}

TEST(Serialize, JsonRoundTripIsExact) {
  const auto t = testutil::expected_mit();
  const auto back = tree_from_json_string(to_json_string(t));
  EXPECT_EQ(back, t);  // ids, labels, and child order all survive
  EXPECT_TRUE(canonical_equal(back, t));
}

TEST(Serialize, JsonParserRejectsGarbage) {
  EXPECT_THROW(tree_from_json_string("not json"), ParseError);
  EXPECT_THROW(tree_from_json_string("{\"children\": []}"), ParseError);
  EXPECT_THROW(tree_from_json_string("{\"id\": 0, \"children\": []}"), ParseError);
  // declared classes contradict the leaves
  EXPECT_THROW(tree_from_json_string(R"({"id": 5, "label": null, "classes": [1, 2],
      "children": [{"id": 0, "label": "a", "children": []},
                   {"id": 1, "label": "b", "children": []}]})"),
               ParseError);
}

TEST(Serialize, Dot) {
  const auto t = combine({lf(0), combine({lf(0), lf(5)}, 6)}, 7);
  const std::string dot = to_dot(t);
  EXPECT_EQ(dot,
            "digraph hierarchy {\n"
            "  n0 [label=\"C7\"];\n"
            "  n1 [shape=box, label=\"class0\"];\n"
            "  n2 [label=\"C6\"];\n"
            "  n3 [shape=box, label=\"class0\"];\n"
            "  n4 [shape=box, label=\"class5\"];\n"
            "  n0 -> n1;\n"
            "  n0 -> n2;\n"
            "  n2 -> n3;\n"
            "  n2 -> n4;\n"
            "}\n");
}

TEST(Serialize, Newick) {
  EXPECT_EQ(to_newick(testutil::expected_sit()),
            "(((class0,class1),class5),(class2,class3,class4));\n");
  EXPECT_EQ(to_newick(lf(3)), "class3;\n");
}

TEST(Serialize, AsciiOutline) {
  EXPECT_EQ(to_ascii(testutil::expected_sit()),
            "C9\n"
            "  C8\n"
            "    C7\n"
            "      class0\n"
            "      class1\n"
            "    class5\n"
            "  C6\n"
            "    class2\n"
            "    class3\n"
            "    class4\n");
}
