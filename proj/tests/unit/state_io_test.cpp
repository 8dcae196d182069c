#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "trisep/state_io.hpp"

namespace {

using namespace trisep;

Json valid_file() { return state_to_json(random_canonical_state(2, 3), Json{{"kind", "canonical"}}); }

TEST(StateIo, RoundTripIsExact) {
  Rng rng(41);
  for (int n = 1; n <= 4; ++n) {
    const auto mix = oracle::random_mixture(n, 3, rng);
    const TripartiteState s(mix.rho, Dims{n});
    const TripartiteState back = state_from_json(Json::parse(state_to_json(s).dump()));
    EXPECT_EQ(back.rho(), s.rho());
    EXPECT_EQ(back.dims(), s.dims());
  }
}

TEST(StateIo, FileRoundTripKeepsMeta) {
  const auto path = std::filesystem::temp_directory_path() / "trisep_state_io_test.json";
  const TripartiteState s = shifts_upb_state();
  save(s, path, Json{{"kind", "upb"}});
  EXPECT_EQ(load(path).rho(), s.rho());
  EXPECT_EQ(read_json_file(path)["meta"]["kind"], "upb");
  std::filesystem::remove(path);
}

TEST(StateIo, SchemaViolationsAreFormatErrors) {
  Json j = valid_file();
  j["version"] = 2;
  EXPECT_THROW(state_from_json(j), FormatError);
  j = valid_file();
  j["dims"] = {2, 3, 2};
  EXPECT_THROW(state_from_json(j), FormatError);
  j = valid_file();
  j["dims"] = {2, 2, 3};
  EXPECT_THROW(state_from_json(j), FormatError);
  j = valid_file();
  j.erase("matrix");
  EXPECT_THROW(state_from_json(j), FormatError);
  j = valid_file();
  j["matrix"][0][1] = {5.0, 0.0};
  EXPECT_THROW(state_from_json(j), FormatError);
  j = valid_file();
  j["matrix"][0][0] = "x";
  EXPECT_THROW(state_from_json(j), FormatError);
  EXPECT_THROW(state_from_json(Json::array()), FormatError);
}

TEST(StateIo, TraceRule) {
  Json j = valid_file();
  CMatrix m = matrix_from_json(j["matrix"]);
  j["matrix"] = matrix_to_json(m * (1.0 + 1e-8));
  EXPECT_NEAR(state_from_json(j).trace(), 1.0, 1e-14);
  j["matrix"] = matrix_to_json(m * 1.01);
  EXPECT_THROW(state_from_json(j), FormatError);
}

TEST(StateIo, NonPsdIsFormatError) {
  CMatrix m = CMatrix::Identity(8, 8) / 8.0;
  m(0, 0) = -0.125;
  m(1, 1) = 0.375;
  Json j = valid_file();
  j["matrix"] = matrix_to_json(m);
  EXPECT_THROW(state_from_json(j), FormatError);
}

TEST(StateIo, MissingFileAndBadJson) {
  EXPECT_THROW(read_json_file("/nonexistent/trisep.json"), FormatError);
  const auto path = std::filesystem::temp_directory_path() / "trisep_bad.json";
  {
    std::ofstream f(path);
    f << "{not json";
  }
  EXPECT_THROW(read_json_file(path), FormatError);
  std::filesystem::remove(path);
}

TEST(StateIo, DecompositionRoundTrip) {
  Rng rng(42);
  const Ensemble e = random_ensemble(Dims{3}, 4, rng);
  const Decomposition d{e.weights, e.vectors};
  const Decomposition back = decomposition_from_json(Json::parse(decomposition_to_json(d).dump()));
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.weights[i], d.weights[i]);
    EXPECT_NEAR(product_fidelity(back.vectors[i], d.vectors[i]), 1.0, 1e-15);
  }
}

}  // namespace
