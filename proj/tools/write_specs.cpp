// Writes the bundled specs as JSON files into the given directory.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "tdual/io/bundled.hpp"
#include "tdual/io/json.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the bundled group specs as spec files"};
  std::string dir = "specs";
  app.add_option("dir", dir, "Output directory");
  CLI11_PARSE(app, argc, argv);
  std::filesystem::create_directories(dir);
  for (const auto& spec : tdual::bundled::all()) {
    const auto path = (std::filesystem::path(dir) / (spec.name + ".json")).string();
    tdual::io::save_spec(spec, path);
    std::cout << path << "\n";
  }
  return 0;
}
