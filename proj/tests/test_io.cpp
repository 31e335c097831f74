#include <doctest.h>

#include <filesystem>

#include "bilat/format.hpp"
#include "bilat/landmark_io.hpp"
#include "bilat/report.hpp"
#include "support.hpp"

using namespace bilat;
using namespace bilat::testing;

namespace {

const std::filesystem::path data_dir = BILAT_TEST_DATA;

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

std::string minimal(const std::string& scheme, const std::string& coords) {
  return R"({"dimension": 2, "scheme": )" + scheme + R"(, "registration": "raw", "subjects": [{"id": "s", "group": "a", "coords": )" +
         coords + "}]}";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("reads the square fixture") {
    const LandmarkFile f = read_landmark_file(data_dir / "square.json");
    CHECK(f.dimension == 2);
    CHECK(f.scheme == square_scheme());
    CHECK(f.registration == Registration::basis);
    CHECK(f.frame == "rest");
    REQUIRE(f.subjects.size() == 6);
    CHECK(f.subjects[3].coords.coords() == square_x2().coords());
    CHECK(f.subjects[4].extra["note"] == "kept");
    CHECK(f.group_labels() == std::vector<std::string>{"control", "patient"});
  }

  TEST_CASE("write then read reproduces every value and unknown field") {
    const LandmarkFile f = read_landmark_file(data_dir / "square.json");
    const std::string text = to_landmark_json(f);
    const LandmarkFile g = parse_landmark_json(text);
    CHECK(to_landmark_json(g) == text);
    for (std::size_t i = 0; i < f.subjects.size(); ++i) {
      CHECK(g.subjects[i].coords.coords() == f.subjects[i].coords.coords());
      CHECK(g.subjects[i].id == f.subjects[i].id);
    }
    CHECK(g.subjects[4].extra == f.subjects[4].extra);
  }

  TEST_CASE("random coordinates survive a round trip bit for bit") {
    Rng rng(21);
    LandmarkFile f{3, PairingScheme({{0, 1}, {2, 3}}, {4}), Registration::raw, {}, {}, {}, {}, {}, nlohmann::json::object()};
    for (int i = 0; i < 20; ++i) {
      f.subjects.push_back({"s" + std::to_string(i), i % 2 ? "b" : "a", random_config(5, 3, rng, 1e3), nlohmann::json::object()});
    }
    const LandmarkFile g = parse_landmark_json(to_landmark_json(f));
    for (std::size_t i = 0; i < 20; ++i) CHECK(g.subjects[i].coords.coords() == f.subjects[i].coords.coords());
  }

  TEST_CASE("shortest round-trip number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("errors name the offending subject and landmark") {
    const std::string short_rows = error_text([] {
      parse_landmark_json(minimal(R"({"pairs": [[1, 3]], "solos": [2, 4]})", "[[0, 0], [1, 1], [2, 2]]"));
    });
    CHECK(short_rows.find("subject 's'") != std::string::npos);
    CHECK(short_rows.find("landmark 4") != std::string::npos);

    const std::string dup = error_text([] {
      parse_landmark_json(minimal(R"({"pairs": [[1, 1]], "solos": []})", "[[0, 0], [1, 1]]"));
    });
    CHECK(dup.find("landmark 1") != std::string::npos);

    const std::string syntax = error_text([] { parse_landmark_json("{\n  \"dimension\": 2,\n  oops\n}", "bad.json"); });
    CHECK(syntax.find("bad.json:3") != std::string::npos);

    try {
      parse_landmark_json(minimal(R"({"pairs": [[1, 2]], "solos": []})", "[[0, 0], [1]]"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::dimension_mismatch);
    }
  }

  TEST_CASE("long CSV with sidecar") {
    const LandmarkFile f = read_landmark_csv(data_dir / "square.csv", data_dir / "square_scheme.json");
    REQUIRE(f.subjects.size() == 2);
    CHECK(f.registration == Registration::basis);
    CHECK(f.subjects[1].id == "b");
    CHECK(f.subjects[1].coords.coords() == square_x2().coords());
  }

  TEST_CASE("score tables parse back") {
    const std::vector<ScoreRow> rows{{"", "a", "g1", "l1", 0.25}, {"", "b,c", "g2", "l1", 1.0 / 3.0}};
    const std::vector<ScoreRow> back = parse_scores_csv(scores_csv(rows));
    REQUIRE(back.size() == 2);
    CHECK(back[1].id == "b,c");
    CHECK(back[1].value == 1.0 / 3.0);
    CHECK(scores_csv(rows).rfind("id,group,score,value\n", 0) == 0);
  }

  TEST_CASE("p-value cells") {
    CHECK(p_with_stars(0.0004) == "0.0004(***)");
    CHECK(p_with_stars(0.2).find('*') == std::string::npos);
  }
}
