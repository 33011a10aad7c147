// Copyright 2026 The lambda-clock authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <variant>

#include "lambdaclock/dynamics.hpp"
#include "lambdaclock/serialization.hpp"

using namespace lambdaclock;

TEST_CASE("formatted doubles survive a round trip") {
  for (double x : {1.0 / 3.0, 1e-300, M_PI, -0.0, 12345.678901234567,
                   2.2250738585072014e-308}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("JSON writer produces well-formed nested output") {
  JsonWriter w;
  w.begin_object();
  w.key("name");
  w.value(std::string_view("a\"b\\c\nd"));
  w.key("count");
  w.value(3L);
  w.key("flag");
  w.value(true);
  w.key("items");
  w.begin_array();
  w.value(1.5);
  w.value(false);
  w.begin_object();
  w.key("inner");
  w.value(2);
  w.end_object();
  w.end_array();
  w.end_object();
  const std::string text = w.str();

  const nlohmann::json parsed = nlohmann::json::parse(text);
  CHECK(parsed["name"].get<std::string>() == "a\"b\\c\nd");
  CHECK(parsed["count"].get<long>() == 3);
  CHECK(parsed["flag"].get<bool>() == true);
  CHECK(parsed["items"].size() == 3);
  CHECK(parsed["items"][2]["inner"].get<int>() == 2);
}

TEST_CASE("complex vectors and matrices round trip through JSON") {
  VectorXc v(3);
  v[0] = Complex(1.0, -2.0);
  v[1] = Complex(0.0, 1.0 / 3.0);
  v[2] = Complex(-4.5, 0.0);
  JsonWriter wv;
  write_complex_vector(wv, v);
  const VectorXc back = decode_complex_vector(nlohmann::json::parse(wv.str()));
  REQUIRE(back.size() == v.size());
  CHECK((back - v).norm() == 0.0);

  MatrixXc m(2, 2);
  m(0, 0) = Complex(0.5, 0.0);
  m(0, 1) = Complex(0.1, 0.2);
  m(1, 0) = Complex(0.1, -0.2);
  m(1, 1) = Complex(0.5, 0.0);
  JsonWriter wm;
  write_complex_matrix(wm, m);
  const MatrixXc mback = decode_complex_matrix(nlohmann::json::parse(wm.str()));
  CHECK((mback - m).norm() == 0.0);
}

TEST_CASE("decoders reject malformed input") {
  CHECK_THROWS_AS(decode_complex_vector(nlohmann::json::parse("[]")),
                  ConfigError);
  CHECK_THROWS_AS(decode_complex_vector(nlohmann::json::parse("[[1,2,3]]")),
                  ConfigError);
  CHECK_THROWS_AS(decode_complex_vector(nlohmann::json::parse("\"x\"")),
                  ConfigError);
  CHECK_THROWS_AS(decode_complex_matrix(nlohmann::json::parse("[[1],[1,2]]")),
                  ConfigError);
  CHECK_THROWS_AS(decode_complex_matrix(nlohmann::json::parse("[1,2]")),
                  ConfigError);
  // Bare reals are accepted as complex entries.
  const VectorXc v = decode_complex_vector(nlohmann::json::parse("[1, [0,1]]"));
  CHECK(v[0] == Complex(1.0, 0.0));
  CHECK(v[1] == Complex(0.0, 1.0));
}

TEST_CASE("record sequences decode from both accepted layouts") {
  const std::string bare = R"([[[0.75,0],[0,0]],[[0,0],[0,0.25]]])";
  CHECK_THROWS_AS(decode_record_sequence(nlohmann::json::parse(bare)),
                  TraceNotPreserved);

  const std::string good = R"({"states":
      [[[0.75,0],[0,0.25]], [[0.5,0],[0,0.5]]]})";
  const RecordSequence seq =
      decode_record_sequence(nlohmann::json::parse(good));
  CHECK(seq.states.size() == 2);

  CHECK_THROWS_AS(
      decode_record_sequence(nlohmann::json::parse(R"({"wrong": 1})")),
      ConfigError);
  CHECK_THROWS_AS(
      decode_record_sequence(nlohmann::json::parse(R"([[[1,0],[0,0]]])")),
      ConfigError);
}

TEST_CASE("tick CSV parsing skips headers and comment lines") {
  const std::string text =
      "# produced by a clock run\n"
      "N,p0,p1\n"
      "0,0.5,0.5\n"
      "\n"
      "1,0.25,0.75\n"
      "2,0.1,0.9\n";
  const TickSeries series = parse_raw_ticks_csv(text);
  const auto& raw = std::get<RawTicks>(series);
  REQUIRE(raw.indices.size() == 3);
  CHECK(raw.indices[2] == 2);
  CHECK(raw.distributions[1][1] == 0.75);
  CHECK_THROWS_AS(parse_raw_ticks_csv("0,0.5,0.5\n0,0.5,0.5\n"),
                  NonMonotoneSamples);
  CHECK_THROWS_AS(parse_raw_ticks_csv("0,1e999,0\n1,0.5,0.5\n"), IoError);
}

TEST_CASE("trajectory dump leads with the clock-facing columns") {
  const PhysicalConstants constants = default_constants();
  const NumericalConfig cfg = default_config();
  MatrixXc hm = MatrixXc::Zero(2, 2);
  hm(0, 0) = 0.5;
  hm(1, 1) = -0.5;
  const HermitianOperator h = make_hermitian_operator(hm);
  VectorXc amps(2);
  amps[0] = amps[1] = 1.0 / std::sqrt(2.0);
  UnitaryEvolutionSpec spec{h, make_pure_state(amps), linspace(0.0, 1.0, 5)};
  const LambdaParameterization param = reparameterize_by_lambda(
      evolve_unitary(spec, constants), h, cfg, constants);

  const std::string csv = trajectory_csv(param);
  CHECK(csv.rfind("t,Lambda,DeltaH,overlap,re_0,im_0,re_1,im_1\n", 0) == 0);
  // Header plus one row per sample, each ending in a newline.
  std::size_t newlines = 0;
  for (char c : csv) newlines += c == '\n';
  CHECK(newlines == 1 + param.states.size());
  CHECK(trajectory_csv(param) == csv);
}

TEST_CASE("text files round trip") {
  const std::string path = "serialization_test_roundtrip.txt";
  const std::string payload = "line one\nline two\n";
  write_text_file(path, payload);
  CHECK(read_text_file(path) == payload);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("no/such/dir/na.txt"), IoError);
  CHECK_THROWS_AS(write_text_file("no/such/dir/na.txt", "x"), IoError);
}
