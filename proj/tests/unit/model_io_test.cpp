#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "reluinv/errors.hpp"
#include "reluinv/instance_lab.hpp"
#include "reluinv/model_io.hpp"
#include "test_oracles.hpp"

namespace reluinv {
namespace {

bool same_network(const Network& a, const Network& b) {
  if (a.input_dim() != b.input_dim() || a.layer_count() != b.layer_count()) return false;
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    if (a.layer(l).weights != b.layer(l).weights) return false;
    if (a.layer(l).bias != b.layer(l).bias) return false;
    if (a.layer(l).activation != b.layer(l).activation) return false;
  }
  return true;
}

TEST(ModelIo, ParsesMinimalModel) {
  const Network net = parse_network(R"({"input_dim": 2, "layers": [
      {"weights": [[1, 2], [3, 4]], "bias": [0.5, -0.5], "activation": "relu"},
      {"weights": [[1, -1]], "bias": [0], "activation": "linear"}]})");
  EXPECT_EQ(net.input_dim(), 2u);
  EXPECT_EQ(net.output_dim(), 1u);
  EXPECT_EQ(net.relu_count(), 2u);
  EXPECT_EQ(net.layer(0).weights(1, 0), 3.0);
  EXPECT_EQ(net.layer(0).bias[1], -0.5);
}

TEST(ModelIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Network net = oracle::random_network({3, 5, 4, 2}, rng);
    EXPECT_TRUE(same_network(net, parse_network(dump_network(net))));
  }
}

TEST(ModelIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "reluinv_model_io_test.json";
  save_network(toy_network_1d(), path);
  EXPECT_TRUE(same_network(toy_network_1d(), load_network(path)));
  std::filesystem::remove(path);
}

TEST(ModelIo, RejectsMalformedDocuments) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"layers": []})",
      R"({"input_dim": 1})",
      R"({"input_dim": -1, "layers": []})",
      R"({"input_dim": 1, "layers": [{"weights": [[1]], "bias": [0], "activation": "tanh"}]})",
      R"({"input_dim": 2, "layers": [{"weights": [[1]], "bias": [0], "activation": "linear"}]})",
      R"({"input_dim": 1, "layers": [{"weights": [[1]], "bias": [0, 1], "activation": "linear"}]})",
      R"({"input_dim": 1, "layers": [{"weights": [["a"]], "bias": [0], "activation": "linear"}]})",
      R"({"input_dim": 1, "layers": [{"weights": [[1]], "bias": [0], "activation": "relu"}]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_network(text), InvalidInput) << text;
}

TEST(ModelIo, MissingFileIsInvalidInput) {
  EXPECT_THROW(load_network("/nonexistent/reluinv/model.json"), InvalidInput);
}

}  // namespace
}  // namespace reluinv
