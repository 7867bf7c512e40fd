#include "ragqa/annotation/kappa.hpp"

#include <map>

#include "ragqa/errors.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::annotation {

AgreementResult cohen_kappa(const std::vector<std::string>& labels_a, const std::vector<std::string>& labels_b) {
    if (labels_a.empty() || labels_b.empty()) throw ValidationError("kappa needs at least one labelled item");
    if (labels_a.size() != labels_b.size()) {
        throw ValidationError("annotators labelled different item counts: " + std::to_string(labels_a.size()) +
                              " vs " + std::to_string(labels_b.size()));
    }
    const std::size_t n = labels_a.size();
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[labels_a[i]].first;
        ++counts[labels_b[i]].second;
        if (labels_a[i] == labels_b[i]) ++agree;
    }

    AgreementResult r;
    r.n_items = n;
    // Integer sum of marginal products keeps the p_e == 1 test exact.
    unsigned long long marginal_products = 0;
    for (const auto& [label, c] : counts) {
        r.categories.push_back(label);
        marginal_products += static_cast<unsigned long long>(c.first) * c.second;
    }
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    r.p_o = static_cast<double>(agree) / static_cast<double>(n);
    r.p_e = static_cast<double>(marginal_products) / nn;
    if (marginal_products == static_cast<unsigned long long>(n) * n) {
        r.degenerate = true;
        r.kappa = 1.0;
        return r;
    }
    r.kappa = (r.p_o - r.p_e) / (1.0 - r.p_e);
    return r;
}

double implied_chance_agreement(double p_o, double kappa) {
    if (kappa == 1.0) throw ValidationError("kappa = 1 does not determine p_e");
    return (p_o - kappa) / (1.0 - kappa);
}

std::vector<std::string> parse_label_file(std::string_view contents) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= contents.size()) {
        const auto nl = contents.find('\n', start);
        auto line = text::trim(contents.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (!line.empty() && line.front() != '#') {
            if (const auto comma = line.rfind(','); comma != std::string_view::npos) {
                line = text::trim(line.substr(comma + 1));
            }
            out.emplace_back(line);
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

}  // namespace ragqa::annotation
