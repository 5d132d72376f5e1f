// Writes the small input fixtures the CLI tests consume into the current
// working directory.

#include <fstream>

#include "gradwave/field.hpp"

using namespace gradwave;

int main() {
    {
        std::ofstream out("ramp.pgm");
        out << "P2\n64 64\n63\n";
        for (int row = 0; row < 64; ++row)
            for (int col = 0; col < 64; ++col) out << col << (col == 63 ? '\n' : ' ');
    }
    {
        std::ofstream out("ramp_rot.pgm");
        out << "P2\n64 64\n63\n";
        for (int row = 0; row < 64; ++row)
            for (int col = 0; col < 64; ++col) out << row << (col == 63 ? '\n' : ' ');
    }
    const auto f = catalog("quadratic1d");
    save_field_csv(sample_field(f, f.default_domain(), GridSpec({4096})), "quadratic1d_4096.csv");
    return 0;
}
