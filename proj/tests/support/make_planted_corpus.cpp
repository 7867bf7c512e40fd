// Writes the planted-fact corpus: <out>/clean/... and <out>/qa.jsonl.
#include <iostream>

#include "synthetic.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_planted_corpus <out-dir>\n";
        return 2;
    }
    const std::filesystem::path out = argv[1];
    ragqa::testing::write_planted_corpus(ragqa::testing::make_planted_corpus(), out / "clean", out / "qa.jsonl");
    return 0;
}
