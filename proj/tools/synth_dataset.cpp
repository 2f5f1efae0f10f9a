// Writes a seeded synthetic dataset CSV generated at a given exponent.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <mixlaw/dataset_csv.hpp>

int main(int argc, char** argv)
{
    CLI::App app{"Synthetic dataset CSV generated by the power-mean law", "synth_dataset"};
    mixlaw::SyntheticSpec spec;
    std::string output = "-";
    app.add_option("--p", spec.p, "Exponent used to generate the measurements")->required();
    app.add_option("--samples", spec.samples, "Number of rows");
    app.add_option("--phases", spec.phases, "Number of phases");
    app.add_option("--value-lo", spec.value_lo, "Smallest phase value");
    app.add_option("--value-hi", spec.value_hi, "Largest phase value");
    app.add_option("--noise", spec.noise, "Relative multiplicative noise half-width");
    app.add_option("--seed", spec.seed, "Random seed");
    app.add_option("--output,-o", output, "Output file, '-' for standard output");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto data = mixlaw::synthetic_dataset(spec);
        if (output == "-") {
            mixlaw::write_dataset_csv(std::cout, data);
            return 0;
        }
        std::ofstream file(output, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "synth_dataset: cannot write '" << output << "'\n";
            return 73;
        }
        mixlaw::write_dataset_csv(file, data);
    } catch (const mixlaw::Error& e) {
        std::cerr << "synth_dataset: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
