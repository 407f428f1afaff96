// Regenerates the shipped fixture files under data/ from the built-in
// definitions. Usage: make_fixtures [output-dir]
#include <filesystem>
#include <iostream>

#include "iclab/json_io.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  using namespace iclab;

  save_json(functional_to_json(i3322_functional()),
            (dir / "i3322_functional.json").string());
  save_json(protocol_to_json(protocol_3322()),
            (dir / "protocol_3322.json").string());
  save_json(protocol_to_json(van_dam_protocol()),
            (dir / "protocol_van_dam.json").string());
  save_json(box_to_json(pr_box(1.0)), (dir / "box_pr.json").string());
  save_json(box_to_json(box_3322(1.0)), (dir / "box_3322.json").string());
  save_json(channel_to_json(identity_channel(2)),
            (dir / "channel_identity_2.json").string());

  std::cout << "fixtures written to " << dir << "\n";
  return 0;
}
