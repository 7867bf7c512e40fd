#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ragqa::annotation {

struct AgreementResult {
    double kappa = 0;
    double p_o = 0;  // observed agreement
    double p_e = 0;  // chance agreement from the two marginals
    std::size_t n_items = 0;
    std::vector<std::string> categories;  // sorted union of labels
    bool degenerate = false;  // p_e == 1: both annotators used one identical label; kappa set to 1
};

/// Cohen's kappa for two annotators over the same items.
/// Throws ValidationError on empty input or a length mismatch.
AgreementResult cohen_kappa(const std::vector<std::string>& labels_a, const std::vector<std::string>& labels_b);

/// p_e that makes (p_o - p_e) / (1 - p_e) equal `kappa`.
double implied_chance_agreement(double p_o, double kappa);

/// One label per line. With commas, the last field is the label ("item,label").
/// Blank lines and `#` comments skipped.
std::vector<std::string> parse_label_file(std::string_view contents);

}  // namespace ragqa::annotation
