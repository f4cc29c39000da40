#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "macgan/checkpoint.hpp"

using namespace macgan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / "macgan_unit" / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("checkpoint round trip is exact") {
  Rng rng(1);
  const std::size_t widths[] = {3, 7, 5, 2};
  const Activation acts[] = {Activation::LeakyReLU, Activation::Tanh, Activation::Logistic};
  MlpNetwork net = MlpNetwork::build(widths, acts, rng);
  for (Layer& l : net.mutable_layers()) {
    for (double& v : l.bias.values()) v = rng.normal() / 3.0;
  }
  const fs::path dir = scratch("roundtrip");
  save_checkpoint(dir, net);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "layer2_bias.csv"));
  const MlpNetwork back = load_checkpoint(dir);
  CHECK(back == net);
  const Matrix x = random_normal(3, 4, rng);
  CHECK(back.predict(x) == net.predict(x));
}

TEST_CASE("load_checkpoint rejects broken bundles") {
  CHECK_THROWS_AS(load_checkpoint(scratch("missing")), InputError);

  Rng rng(2);
  const std::size_t widths[] = {2, 2};
  const fs::path dir = scratch("broken");
  save_checkpoint(dir, MlpNetwork::build(widths, Activation::ReLU, Activation::ReLU, rng));
  std::ofstream(dir / "layer0_weight.csv") << "1,2,3\n";
  CHECK_THROWS_AS(load_checkpoint(dir), InputError);

  std::ofstream(dir / "manifest.json") << "{ not json";
  CHECK_THROWS_AS(load_checkpoint(dir), InputError);
}
