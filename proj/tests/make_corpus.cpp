// Generates a verification corpus: for each entry an instance file, a result
// bundle, and the binary idempotent dump, all cross-checkable by the CLI's
// corpus verify mode. Usage: make_corpus <out_dir> [count]

#include "specidem/io.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace specidem;

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_corpus <out_dir> [count]\n";
        return 1;
    }
    const std::filesystem::path dir(argv[1]);
    const int count = argc > 2 ? std::atoi(argv[2]) : 20;
    std::filesystem::create_directories(dir);

    int made = 0;
    for (std::uint64_t seed = 1; made < count && seed < 5000; ++seed) {
        GeneratorConfig cfg;
        cfg.N = 8 + 4 * (made % 6);
        cfg.R = 1 + made % 3;
        cfg.seed = 300 + seed;
        try {
            const GeneratedInstance inst = random_instance(cfg);
            const double xi = pick_xi(inst);
            const Side side = made % 2 == 0 ? Side::plus : Side::minus;
            const auto t0 = std::chrono::steady_clock::now();
            const SpectralIdempotent j = half_plane_idempotent(inst.op, xi, side);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            const std::string tag = std::to_string(made);
            std::ofstream((dir / ("instance_" + tag + ".json")).string())
                << serialize_instance(inst.op);
            std::ofstream((dir / ("bundle_" + tag + ".json")).string())
                << serialize_bundle(inst.op, j, secs);
            dump_matrix(j.J, (dir / ("J_" + tag + ".bin")).string());
            ++made;
        } catch (const Error&) {
            continue;  // no usable abscissa for this draw; move on
        }
    }
    if (made < count) {
        std::cerr << "make_corpus: only " << made << " of " << count << " entries\n";
        return 1;
    }
    std::cout << "wrote " << made << " corpus entries to " << dir << "\n";
    return 0;
}
