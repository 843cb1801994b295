#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ses/error.hpp"
#include "ses/io.hpp"

using namespace ses;

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.03) == "0.03");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(-1.0986122886681098) == "-1.09861228867");
  CHECK(io::format_number(0.0) == "0");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(kInfinity) == "inf");
  CHECK(io::format_number(-kInfinity) == "-inf");
  CHECK(io::format_number(1e-20) == "1e-20");
  CHECK(io::format_bool(true) == "true");
}

TEST_CASE("spectrum JSON round trip") {
  const Spectrum s = build_finite({{1, 2}, {0, 1}, {1, 1}}, "merged");
  const Spectrum back = io::spectrum_from_json(io::spectrum_to_json(s));
  CHECK(back.label() == "merged");
  REQUIRE(back.size() == 2);
  CHECK(back.levels()[1].degeneracy == 3.0);
  CHECK(back.bounded());

  const Spectrum osc = build_oscillator_auto(1.0, {1.0});
  const Spectrum osc_back = io::spectrum_from_json(io::spectrum_to_json(osc));
  CHECK_FALSE(osc_back.bounded());
  CHECK(osc_back.min_beta() == doctest::Approx(osc.min_beta()).epsilon(1e-15));
  CHECK(osc_back.size() == osc.size());

  const auto pairs = io::Json::parse(R"({"levels": [[0, 1], [2, 3]]})");
  CHECK(io::spectrum_from_json(pairs).levels()[1].degeneracy == 3.0);
  auto code = [](const char* text) {
    try {
      io::spectrum_from_json(io::Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(R"({"levels": [{"degeneracy": 1}]})") == ErrorCode::ParseError);
  CHECK(code(R"({"levels": [[0, 1], [1, 1]], "bounded": false})") == ErrorCode::ParseError);
  CHECK(code(R"({"levels": [[0, -1]]})") == ErrorCode::NonPositiveDegeneracy);
}

TEST_CASE("state files and CSV tables") {
  const auto dir = std::filesystem::temp_directory_path() / "ses_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "two.json") << R"({"levels": [[0, 1], [1, 1]]})";
    std::ofstream(dir / "state.json") << R"({"spectrum": "two.json", "probs": [0.25, 0.75]})";
    std::ofstream(dir / "cycle.csv") << "Q,T\n# comment\n2,1\n-1,0.5\n";
    std::ofstream(dir / "bad.csv") << "Q,T\n2,1\nx,y\n";
  }
  const LevelDistribution st = io::state_from_json(io::read_json_file(dir / "state.json"), dir);
  CHECK(st.probs[1] == 0.75);
  CHECK(st.spectrum->size() == 2);
  const auto rows = io::read_numeric_csv(dir / "cycle.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<double>{-1, 0.5});
  CHECK_THROWS_AS(io::read_numeric_csv(dir / "bad.csv"), Error);
  CHECK_THROWS_AS(io::read_json_file(dir / "missing.json"), Error);

  io::Table t{{"lower", "upper", "admissible"}, {}};
  t.add({io::format_number(0.03), io::format_number(0.04), io::format_bool(true)});
  CHECK(t.csv() == "lower,upper,admissible\n0.03,0.04,true\n");
  CHECK(t.json()["rows"][0]["admissible"] == true);
  CHECK(t.json()["rows"][0]["lower"] == 0.03);
  std::filesystem::remove_all(dir);
}
