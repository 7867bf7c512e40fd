#include "ragqa/evaluation/eval_runner.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ragqa/errors.hpp"
#include "ragqa/evaluation/metrics.hpp"
#include "ragqa/util/random.hpp"
#include "ragqa/util/text.hpp"

namespace ragqa::evaluation {
namespace {

constexpr std::string_view kAbsent = "\xE2\x80\x94";  // em dash

std::string header_for(std::string_view metric) {
    if (metric == "recall") return "Recall";
    if (metric == "f1") return "F1";
    if (metric == "cosine") return "Cosine Sim";
    if (metric == "bleu") return "BLEU";
    return std::string(metric);
}

std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Pads by code points so the dash lines up with ASCII cells.
std::string pad(const std::string& s, std::size_t width) {
    const std::size_t len = text::utf8_length(s);
    return len >= width ? s : s + std::string(width - len, ' ');
}

std::string render_rows(const std::vector<ComparisonRow>& rows) {
    std::size_t name_w = std::string_view("Config").size();
    for (const auto& r : rows) name_w = std::max(name_w, text::utf8_length(r.name));
    constexpr std::size_t cell_w = 16;

    std::string out = pad("Config", name_w + 2);
    for (const auto m : kTableMetrics) out += pad(header_for(m), cell_w);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    for (const auto& r : rows) {
        std::string line = pad(r.name, name_w + 2);
        for (const auto& c : r.cells) line += pad(format_cell(c), cell_w);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

ComparisonRow row_for(const std::string& name, const MetricReport& report) {
    ComparisonRow row{name, {}};
    for (std::size_t i = 0; i < kTableMetrics.size(); ++i) row.cells[i] = report.stat(kTableMetrics[i]);
    return row;
}

}  // namespace

void EvalConfig::validate() const {
    if (sample_size < 1) throw ValidationError("sample_size must be at least 1");
    if (num_runs < 1) throw ValidationError("num_runs must be at least 1");
}

AnswerFn chain_pipeline(const generation::QaChain& chain, bool rag_enabled) {
    return [&chain, rag_enabled](const std::string& q) {
        return rag_enabled ? chain.answer(q).answer : chain.answer_baseline(q).answer;
    };
}

std::optional<double> ItemRecord::metric(std::string_view name) const {
    if (failed) return std::nullopt;
    if (name == "precision") return precision;
    if (name == "recall") return recall;
    if (name == "f1") return f1;
    if (name == "cosine") return cosine;
    if (name == "bleu") return bleu;
    throw ValidationError("unknown metric: " + std::string(name));
}

std::optional<double> RunSummary::mean(std::string_view metric) const {
    for (const auto& [name, value] : means) {
        if (name == metric) return value;
    }
    return std::nullopt;
}

std::optional<MeanStd> MetricReport::stat(std::string_view metric) const {
    for (const auto& [name, value] : aggregate) {
        if (name == metric) return value;
    }
    return std::nullopt;
}

std::size_t MetricReport::failed_count() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const ItemRecord& r) { return r.failed; }));
}

json MetricReport::to_json() const {
    json cfg{{"sample_size", config.sample_size},
             {"num_runs", config.num_runs},
             {"seed", config.seed},
             {"rag_enabled", config.rag_enabled}};
    json agg = json::object();
    for (const auto& [name, s] : aggregate) {
        agg[name] = s ? json{{"mean", s->mean}, {"std", s->std}} : json(nullptr);
    }
    json run_list = json::array();
    for (const auto& r : runs) {
        json means = json::object();
        for (const auto& [name, v] : r.means) means[name] = optional_number(v);
        run_list.push_back({{"run", r.run}, {"seed", r.seed}, {"items", r.items}, {"failed", r.failed}, {"means", means}});
    }
    json item_list = json::array();
    for (const auto& it : items) {
        json j{{"run", it.run},
               {"question", it.question},
               {"gold", it.gold},
               {"prediction", it.prediction},
               {"chunk_id", it.chunk_id},
               {"failed", it.failed}};
        if (it.failed) {
            j["error"] = it.error;
        } else {
            j["precision"] = it.precision;
            j["recall"] = it.recall;
            j["f1"] = it.f1;
            j["cosine"] = optional_number(it.cosine);
            j["bleu"] = it.bleu;
        }
        item_list.push_back(std::move(j));
    }
    return json{{"label", label},
                {"config", cfg},
                {"dataset_size", dataset_size},
                {"effective_sample", effective_sample},
                {"warnings", warnings},
                {"failed_items", failed_count()},
                {"aggregate", agg},
                {"runs", run_list},
                {"items", item_list},
                {"table", render_table(*this)}};
}

MetricReport MetricReport::from_json(const json& j) {
    try {
        MetricReport r;
        r.label = j.value("label", std::string());
        if (j.contains("config")) {
            const auto& c = j.at("config");
            r.config.sample_size = c.value("sample_size", r.config.sample_size);
            r.config.num_runs = c.value("num_runs", r.config.num_runs);
            r.config.seed = c.value("seed", r.config.seed);
            r.config.rag_enabled = c.value("rag_enabled", r.config.rag_enabled);
        }
        r.dataset_size = j.value("dataset_size", std::size_t{0});
        r.effective_sample = j.value("effective_sample", std::size_t{0});
        if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
        const json& agg = j.at("aggregate");
        for (const auto m : kAllMetrics) {
            const std::string key(m);
            if (agg.contains(key) && !agg.at(key).is_null()) {
                r.aggregate.emplace_back(key, MeanStd{agg.at(key).at("mean").get<double>(), agg.at(key).at("std").get<double>()});
            } else {
                r.aggregate.emplace_back(key, std::nullopt);
            }
        }
        if (j.contains("runs")) {
            for (const auto& rj : j.at("runs")) {
                RunSummary s;
                s.run = rj.at("run").get<std::size_t>();
                s.seed = rj.at("seed").get<std::uint64_t>();
                s.items = rj.at("items").get<std::size_t>();
                s.failed = rj.at("failed").get<std::size_t>();
                for (const auto m : kAllMetrics) {
                    const std::string key(m);
                    const json& v = rj.at("means").value(key, json(nullptr));
                    s.means.emplace_back(key, v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
                }
                r.runs.push_back(std::move(s));
            }
        }
        if (j.contains("items")) {
            for (const auto& ij : j.at("items")) {
                ItemRecord it;
                it.run = ij.at("run").get<std::size_t>();
                it.question = ij.at("question").get<std::string>();
                it.gold = ij.at("gold").get<std::string>();
                it.prediction = ij.at("prediction").get<std::string>();
                it.chunk_id = ij.value("chunk_id", std::string());
                it.failed = ij.at("failed").get<bool>();
                if (it.failed) {
                    it.error = ij.value("error", std::string());
                } else {
                    it.precision = ij.at("precision").get<double>();
                    it.recall = ij.at("recall").get<double>();
                    it.f1 = ij.at("f1").get<double>();
                    if (!ij.at("cosine").is_null()) it.cosine = ij.at("cosine").get<double>();
                    it.bleu = ij.at("bleu").get<double>();
                }
                r.items.push_back(std::move(it));
            }
        }
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad metric report: ") + e.what());
    }
}

std::string format_cell(const std::optional<MeanStd>& s) {
    if (!s) return std::string(kAbsent);
    return fmt::format("{:.3f} ({:.3f})", s->mean, s->std);
}

std::string render_table(const MetricReport& report) {
    return render_rows({row_for(report.label.empty() ? "run" : report.label, report)});
}

MetricReport run_eval(const std::vector<annotation::QAPair>& dataset, const AnswerFn& pipeline,
                      providers::EmbeddingProvider* eval_embed, const EvalConfig& config, std::string label) {
    config.validate();
    if (dataset.empty()) throw ValidationError("evaluation dataset is empty");

    MetricReport report;
    report.label = label.empty() ? std::string(config.rag_enabled ? "rag" : "baseline") : std::move(label);
    report.config = config;
    report.dataset_size = dataset.size();
    report.effective_sample = std::min(config.sample_size, dataset.size());
    if (report.effective_sample < config.sample_size) {
        report.warnings.push_back(fmt::format("sample size {} exceeds dataset size {}; clamped", config.sample_size,
                                              dataset.size()));
        spdlog::warn("{}", report.warnings.back());
    }

    std::vector<std::vector<double>> run_means(kAllMetrics.size());
    for (std::size_t run = 0; run < config.num_runs; ++run) {
        std::vector<std::size_t> order(dataset.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const std::uint64_t run_seed = config.seed + run;
        deterministic_shuffle(std::span<std::size_t>(order), run_seed);
        order.resize(report.effective_sample);

        RunSummary summary;
        summary.run = run;
        summary.seed = run_seed;
        summary.items = order.size();
        const std::size_t first_item = report.items.size();
        for (const std::size_t idx : order) {
            const auto& qa = dataset[idx];
            ItemRecord rec;
            rec.run = run;
            rec.question = qa.question;
            rec.gold = qa.answer;
            rec.chunk_id = qa.chunk_id;
            try {
                rec.prediction = pipeline(qa.question);
            } catch (const std::exception& e) {
                rec.failed = true;
                rec.error = e.what();
                ++summary.failed;
                spdlog::warn("run {}: item failed: {}", run, e.what());
                report.items.push_back(std::move(rec));
                continue;
            }
            const PRF prf = token_prf(rec.prediction, rec.gold);
            rec.precision = prf.precision;
            rec.recall = prf.recall;
            rec.f1 = prf.f1;
            rec.bleu = bleu(rec.prediction, rec.gold);
            if (eval_embed != nullptr) {
                try {
                    rec.cosine = answer_cosine(rec.prediction, rec.gold, *eval_embed);
                } catch (const std::exception& e) {
                    spdlog::warn("run {}: cosine unavailable: {}", run, e.what());
                }
            }
            report.items.push_back(std::move(rec));
        }

        for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
            std::vector<double> values;
            for (std::size_t i = first_item; i < report.items.size(); ++i) {
                if (const auto v = report.items[i].metric(kAllMetrics[m])) values.push_back(*v);
            }
            const auto mean = mean_of(values);
            summary.means.emplace_back(std::string(kAllMetrics[m]), mean);
            if (mean) run_means[m].push_back(*mean);
        }
        report.runs.push_back(std::move(summary));
    }

    for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
        const auto& xs = run_means[m];
        if (xs.empty()) {
            report.aggregate.emplace_back(std::string(kAllMetrics[m]), std::nullopt);
            continue;
        }
        const double mean = *mean_of(xs);
        double ss = 0;
        for (const double x : xs) ss += (x - mean) * (x - mean);
        report.aggregate.emplace_back(std::string(kAllMetrics[m]),
                                      MeanStd{mean, std::sqrt(ss / static_cast<double>(xs.size()))});
    }
    return report;
}

json ComparisonTable::to_json() const {
    json out = json::array();
    for (const auto& r : rows) {
        json row{{"name", r.name}};
        for (std::size_t i = 0; i < kTableMetrics.size(); ++i) {
            const auto& c = r.cells[i];
            row[std::string(kTableMetrics[i])] = c ? json{{"mean", c->mean}, {"std", c->std}} : json(nullptr);
        }
        out.push_back(std::move(row));
    }
    return json{{"rows", out}, {"metrics", kTableMetrics}};
}

std::string ComparisonTable::to_text() const { return render_rows(rows); }

ComparisonTable compare_configs(const std::vector<std::pair<std::string, MetricReport>>& reports) {
    if (reports.size() < 2) throw ValidationError("compare needs at least two reports");
    ComparisonTable t;
    for (const auto& [name, report] : reports) t.rows.push_back(row_for(name, report));
    return t;
}

}  // namespace ragqa::evaluation
