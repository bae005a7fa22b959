#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "treecf/datagen.hpp"
#include "treecf/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"generate the deterministic wine-shaped benchmark CSV"};
    std::string out_path;
    std::size_t rows = 4898;
    std::uint64_t seed = 20260821;
    app.add_option("--out", out_path, "output CSV path")->required();
    app.add_option("--rows", rows, "row count");
    app.add_option("--seed", seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        treecf::write_wine_like_csv(out_path, {rows, seed});
    } catch (const treecf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const treecf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << "wrote " << rows << " rows to " << out_path << "\n";
    return 0;
}
