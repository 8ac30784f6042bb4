#include <doctest.h>

#include <functional>
#include <limits>

#include "tensor1/errors.hpp"
#include "tensor1/om_ast.hpp"

using namespace tensor1;
using namespace tensor1::om;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const EngineError& e) {
        return e.code();
    }
    FAIL("expected an EngineError");
    return Errc::XmlSyntax;
}

}  // namespace

TEST_CASE("parse_xml maps the element subset") {
    NodePtr n = parse_xml("<OMOBJ><OMI>3</OMI></OMOBJ>");
    REQUIRE(n->get_if<Integer>());
    CHECK(n->get_if<Integer>()->digits == "3");

    n = parse_xml("<OMOBJ><OMI> -042 </OMI></OMOBJ>");
    CHECK(n->get_if<Integer>()->digits == "-42");

    n = parse_xml(R"(<OMOBJ><OMA><OMS cd="tensor1" name="Cartesian"/><OMI>1</OMI></OMA></OMOBJ>)");
    const auto* app = n->get_if<Application>();
    REQUIRE(app);
    CHECK(app->head->is_symbol("tensor1", "Cartesian"));
    REQUIRE(app->args.size() == 1);
    CHECK(app->args[0]->get_if<Integer>()->digits == "1");

    n = parse_xml(R"(<OMOBJ><OMF dec="1.5"/></OMOBJ>)");
    CHECK(n->get_if<Float>()->value == 1.5);

    n = parse_xml(R"(<OMOBJ><OMV name="v"/></OMOBJ>)");
    CHECK(n->get_if<Variable>()->name == "v");
}

TEST_CASE("parse_xml rejects unsupported constructs") {
    CHECK(code_of([] { parse_xml("<OMOBJ><OMSTR>hi</OMSTR></OMOBJ>"); }) ==
          Errc::UnsupportedElement);
    CHECK(code_of([] {
              parse_xml(R"(<OMOBJ><OMBIND><OMS cd="fns1" name="lambda"/><OMBVAR><OMV name="x"/></OMBVAR><OMV name="x"/></OMBIND></OMOBJ>)");
          }) == Errc::UnsupportedElement);
    CHECK(code_of([] { parse_xml(R"(<OMOBJ><OMS cd="tensor1" name="2bad"/></OMOBJ>)"); }) ==
          Errc::BadName);
    CHECK(code_of([] { parse_xml(R"(<OMOBJ><OMA><OMS cd="a" name="b"/></OMA></OMOBJ>)"); }) ==
          Errc::UnsupportedElement);
    CHECK(code_of([] { parse_xml("<NOTOM/>"); }) == Errc::UnsupportedElement);
    CHECK(code_of([] { parse_xml("<OMOBJ><OMI>abc</OMI></OMOBJ>"); }) == Errc::XmlSyntax);
}

TEST_CASE("hyphenated symbol names are accepted") {
    NodePtr n = parse_xml(
        R"(<OMOBJ><OMA><OMS cd="tensor1" name="Levi-Civita"/><OMI>3</OMI></OMA></OMOBJ>)");
    CHECK(n->get_if<Application>()->head->is_symbol("tensor1", "Levi-Civita"));
    CHECK(valid_name("Levi-Civita"));
    CHECK(!valid_name("-leading"));
    CHECK(!valid_name("1leading"));
    CHECK(!valid_name(""));
    CHECK(valid_name("_ok2"));
}

TEST_CASE("summation shape folds into SumBinder and back") {
    const char* doc = R"(<OMOBJ>
  <OMA>
    <OMS cd="arith1" name="sum"/>
    <OMA><OMS cd="interval1" name="integer_interval"/><OMI>1</OMI><OMI>3</OMI></OMA>
    <OMBIND>
      <OMS cd="fns1" name="lambda"/>
      <OMBVAR><OMV name="j"/></OMBVAR>
      <OMV name="j"/>
    </OMBIND>
  </OMA>
</OMOBJ>)";
    NodePtr n = parse_xml(doc);
    const auto* s = n->get_if<SumBinder>();
    REQUIRE(s);
    CHECK(s->var == "j");
    CHECK(s->lower->get_if<Integer>()->digits == "1");
    CHECK(s->upper->get_if<Integer>()->digits == "3");
    CHECK(s->body->get_if<Variable>()->name == "j");

    NodePtr again = parse_xml(serialize_xml(*n));
    CHECK(structurally_equal(*n, *again));
}

TEST_CASE("serialize_xml is canonical") {
    NodePtr n = apply(sym("tensor1", "Cartesian"), {integer(1)});
    CHECK(serialize_xml(*n) ==
          "<OMOBJ>\n"
          "  <OMA>\n"
          "    <OMS cd=\"tensor1\" name=\"Cartesian\"/>\n"
          "    <OMI>1</OMI>\n"
          "  </OMA>\n"
          "</OMOBJ>\n");
    CHECK(serialize_xml(*integer(3)) == "<OMOBJ>\n  <OMI>3</OMI>\n</OMOBJ>\n");
    CHECK(serialize_xml(*floating(1.5)) == "<OMOBJ>\n  <OMF dec=\"1.5\"/>\n</OMOBJ>\n");
    CHECK(serialize_xml(*floating(2.0)) == "<OMOBJ>\n  <OMF dec=\"2.0\"/>\n</OMOBJ>\n");
}

TEST_CASE("float round-trips preserve bits") {
    for (double v : {0.1, -0.0, 1e-300, 12345.6789e100, 3.0,
                     std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::quiet_NaN()}) {
        NodePtr n = floating(v);
        NodePtr back = parse_xml(serialize_xml(*n));
        CHECK(structurally_equal(*n, *back));
    }
    NodePtr hex = parse_xml(R"(<OMOBJ><OMF hex="3FF8000000000000"/></OMOBJ>)");
    CHECK(hex->get_if<Float>()->value == 1.5);
}

TEST_CASE("compact grammar parses the documented forms") {
    NodePtr a = parse_compact("Cartesian(2)");
    NodePtr b = parse_xml(
        R"(<OMOBJ><OMA><OMS cd="tensor1" name="Cartesian"/><OMI>2</OMI></OMA></OMOBJ>)");
    CHECK(structurally_equal(*a, *b));

    NodePtr s = parse_compact("sum(j=1..3, times(m, v_j))");
    REQUIRE(s->get_if<SumBinder>());
    CHECK(s->get_if<SumBinder>()->var == "j");

    NodePtr q = parse_compact("linalg1:vector_selector(1, x)");
    CHECK(q->get_if<Application>()->head->is_symbol("linalg1", "vector_selector"));

    NodePtr lc = parse_compact("Levi-Civita(3)");
    CHECK(lc->get_if<Application>()->head->is_symbol("tensor1", "Levi-Civita"));

    NodePtr t = parse_compact("tensor_selector(T, tuple(contra_index(1)), unspecified)");
    const auto* app = t->get_if<Application>();
    REQUIRE(app);
    CHECK(app->args.size() == 3);
    CHECK(app->args[2]->is_symbol("tensor1", "unspecified"));

    CHECK(parse_compact("-3")->get_if<Integer>()->digits == "-3");
    CHECK(parse_compact("2.5e2")->get_if<Float>()->value == 250.0);
    CHECK(parse_compact("x")->get_if<Variable>());
    CHECK(parse_compact("Kronecker_tensor")->is_symbol("tensor1", "Kronecker_tensor"));
}

TEST_CASE("compact grammar rejects unknown and malformed input") {
    CHECK(code_of([] { parse_compact("frobnicate(1)"); }) == Errc::AmbiguousName);
    CHECK(code_of([] { parse_compact("plus(1,"); }) == Errc::CompactSyntax);
    CHECK(code_of([] { parse_compact("sum(j, x)"); }) == Errc::CompactSyntax);
    CHECK(code_of([] { parse_compact("plus(1, 2) trailing"); }) == Errc::CompactSyntax);
    CHECK(code_of([] { parse_compact(""); }) == Errc::CompactSyntax);
}

TEST_CASE("spans nest inside parents") {
    std::string text = "times(plus(a, b), tuple_selector(tuple(x, y), 2))";
    NodePtr n = parse_compact(text);

    std::function<void(const OMNode&)> walk = [&](const OMNode& node) {
        if (const auto* app = node.get_if<Application>()) {
            CHECK(node.span.contains(app->head->span));
            for (const auto& arg : app->args) {
                CHECK(node.span.contains(arg->span));
                walk(*arg);
            }
        }
    };
    CHECK(n->span.begin == 0);
    CHECK(n->span.end == text.size());
    walk(*n);
}

TEST_CASE("xml spans nest inside parents") {
    std::string doc =
        R"(<OMOBJ><OMA><OMS cd="arith1" name="plus"/><OMI>1</OMI><OMI>2</OMI></OMA></OMOBJ>)";
    NodePtr n = parse_xml(doc);
    const auto* app = n->get_if<Application>();
    REQUIRE(app);
    CHECK(app->head->span.begin > n->span.begin);
    for (const auto& arg : app->args) CHECK(n->span.contains(arg->span));
}

TEST_CASE("integer literals keep arbitrary precision") {
    const char* big = "123456789012345678901234567890123456789";
    NodePtr n = parse_compact(big);
    CHECK(n->get_if<Integer>()->digits == big);
    CHECK(!n->get_if<Integer>()->to_int64().has_value());
    CHECK(parse_compact("42")->get_if<Integer>()->to_int64() == 42);
    NodePtr back = parse_xml(serialize_xml(*n));
    CHECK(structurally_equal(*n, *back));
}
