// Regenerates presets/*.cfg from the built-in table presets so the
// shipped files and the `table` subcommand can never drift apart.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "osfrl/config.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "presets";
  std::filesystem::create_directories(dir);
  for (int table : {2, 3, 4, 5}) {
    for (int H : {1, 3, 5}) {
      for (long K : {100L, 500L, 2000L}) {
        const osfrl::CliConfig c = osfrl::table_preset(table, H, K);
        const std::string name = "table" + std::to_string(table) + "_H" +
                                 std::to_string(H) + "_K" + std::to_string(K) +
                                 ".cfg";
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) {
          std::cerr << "cannot write " << (dir / name).string() << "\n";
          return 2;
        }
        f << osfrl::emit_config(c);
        std::cout << (dir / name).string() << "\n";
      }
    }
  }
  return 0;
}
