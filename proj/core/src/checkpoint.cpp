#include "macgan/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "macgan/csv.hpp"

namespace macgan {

void save_checkpoint(const std::filesystem::path& dir, const MlpNetwork& net) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "macgan-mlp";
  manifest["version"] = 1;
  auto& layers = manifest["layers"] = nlohmann::json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layers()[l];
    const std::string w = "layer" + std::to_string(l) + "_weight.csv";
    const std::string b = "layer" + std::to_string(l) + "_bias.csv";
    write_matrix_csv(dir / w, layer.weight);
    write_matrix_csv(dir / b, layer.bias);
    layers.push_back({{"in", layer.in()},
                      {"out", layer.out()},
                      {"activation", std::string(to_string(layer.activation))},
                      {"weight", w},
                      {"bias", b}});
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw InputError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

MlpNetwork load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw InputError("missing " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError((dir / "manifest.json").string() + ": " + e.what());
  }
  std::vector<Layer> layers;
  try {
    for (const auto& entry : manifest.at("layers")) {
      Layer layer;
      layer.weight = read_matrix_csv(dir / entry.at("weight").get<std::string>());
      layer.bias = read_matrix_csv(dir / entry.at("bias").get<std::string>());
      layer.activation = activation_from_string(entry.at("activation").get<std::string>());
      if (layer.weight.rows() != entry.at("out").get<std::size_t>() ||
          layer.weight.cols() != entry.at("in").get<std::size_t>()) {
        throw InputError((dir / "manifest.json").string() + ": layer shape disagrees with CSV");
      }
      layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError((dir / "manifest.json").string() + ": " + e.what());
  }
  return MlpNetwork(std::move(layers));
}

}  // namespace macgan
