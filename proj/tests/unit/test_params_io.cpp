#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "fsa/params_io.hpp"

namespace fsa {
namespace {

TEST(ParamsIo, ReadsFlatObject) {
  const auto p = params_from_json(R"({"preset": "gys", "e_detector": 0.033, "L": 25})");
  EXPECT_DOUBLE_EQ(p.e_detector, 0.033);
  EXPECT_DOUBLE_EQ(p.distance, 25.0);
  EXPECT_DOUBLE_EQ(p.mu, 0.48);
}

TEST(ParamsIo, UnknownKeyIsNamed) {
  try {
    params_from_json(R"({"mu": 0.5, "muu": 0.4})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "muu");
  }
}

TEST(ParamsIo, TypeAndSyntaxErrors) {
  EXPECT_THROW(params_from_json(R"({"mu": "high"})"), ConfigError);
  EXPECT_THROW(params_from_json("[1, 2]"), ConfigError);
  EXPECT_THROW(params_from_json("{not json"), ConfigError);
  EXPECT_THROW(params_from_json(R"({"preset": "lab"})"), ConfigError);
}

TEST(ParamsIo, Overrides) {
  SystemParams p;
  apply_override(p, "dark_count=2e-6");
  apply_override(p, "d=3e-6");
  EXPECT_DOUBLE_EQ(p.dark_count, 3e-6);
  EXPECT_THROW(apply_override(p, "mu"), ConfigError);
  EXPECT_THROW(apply_override(p, "mu=abc"), ConfigError);
  try {
    apply_override(p, "gain=1");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "gain");
  }
}

TEST(ParamsIo, LoadsFromFile) {
  const std::string path = testing::TempDir() + "fsa_params.json";
  {
    std::ofstream f(path);
    f << R"({"alpha": 0.2, "distance": 10})";
  }
  const auto p = load_params(path);
  EXPECT_DOUBLE_EQ(p.alpha, 0.2);
  EXPECT_DOUBLE_EQ(p.distance, 10.0);
  std::remove(path.c_str());
  EXPECT_THROW(load_params(path), ConfigError);
}

}  // namespace
}  // namespace fsa
