#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include "ragqa/acquisition/corpus_store.hpp"
#include "ragqa/acquisition/crawler.hpp"
#include "ragqa/acquisition/scholar.hpp"
#include "ragqa/acquisition/url.hpp"
#include "ragqa/annotation/annotate.hpp"
#include "ragqa/annotation/kappa.hpp"
#include "ragqa/chunking/chunker.hpp"
#include "ragqa/errors.hpp"
#include "ragqa/evaluation/eval_runner.hpp"
#include "ragqa/extraction/ingest.hpp"
#include "ragqa/generation/qa_chain.hpp"
#include "ragqa/providers/provider.hpp"
#include "ragqa/retrieval/retriever.hpp"
#include "ragqa/retrieval/vector_index.hpp"
#include "ragqa/service/server.hpp"
#include "ragqa/service/stats.hpp"
#include "ragqa/util/config.hpp"
#include "ragqa/util/json_io.hpp"

namespace fs = std::filesystem;
using namespace ragqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGeneric = 1;
constexpr int kExitValidation = 2;
constexpr int kExitMissing = 3;
constexpr int kExitProvider = 4;

// Shared by every subcommand.
struct Globals {
    std::string config_path;
    std::string log_level = "info";
    providers::ProviderOverrides overrides;
    ConfigFile config;
};

// flag if given, else config key, else fallback
std::string pick(const std::string& flag, const Globals& g, const std::string& key, const std::string& fallback = {}) {
    if (!flag.empty()) return flag;
    return g.config.get(key).value_or(fallback);
}

template <typename T>
T pick_num(const CLI::Option* opt, T flag, const Globals& g, const std::string& key) {
    if (opt->count() > 0) return flag;
    const auto v = g.config.get(key);
    if (!v) return flag;
    try {
        if constexpr (std::is_floating_point_v<T>) {
            return static_cast<T>(std::stod(*v));
        } else {
            return static_cast<T>(std::stoll(*v));
        }
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + " is not a number: " + *v);
    }
}

fs::path require_path(const std::string& value, const char* what) {
    if (value.empty()) throw ValidationError(std::string("missing ") + what + " (flag or [paths] config)");
    return value;
}

void print_json(const json& j) { std::cout << io::dump_pretty(j) << '\n'; }

retrieval::VectorIndex load_index(const fs::path& path) {
    if (!fs::exists(path)) throw MissingArtifactError("index not found: " + path.string() + " (run `ragqa index` first)");
    return retrieval::VectorIndex::load(path);
}

void check_index_dim(const retrieval::VectorIndex& index, const providers::EmbeddingProvider& embed) {
    if (index.size() > 0 && embed.dim() != 0 && index.dim() != embed.dim()) {
        throw ValidationError(fmt::format("index dimension {} does not match embedding provider dimension {}; rebuild the index",
                                          index.dim(), embed.dim()));
    }
}

struct RetrievalFlags {
    std::size_t fetch_k = 10;
    std::size_t final_k = 5;
    double lambda = 0.5;
    bool no_rerank = false;
    CLI::Option* fetch_opt = nullptr;
    CLI::Option* final_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;

    void add(CLI::App* cmd, const char* final_flag) {
        fetch_opt = cmd->add_option("--fetch-k", fetch_k, "Candidates kept after MMR and sent to the reranker");
        final_opt = cmd->add_option(final_flag, final_k, "Contexts returned");
        lambda_opt = cmd->add_option("--lambda", lambda, "MMR trade-off, 1 = pure similarity");
        cmd->add_flag("--no-rerank", no_rerank, "Skip the cross-encoder stage");
    }

    retrieval::RetrieveOptions resolve(const Globals& g) const {
        retrieval::RetrieveOptions o;
        o.fetch_k = pick_num(fetch_opt, fetch_k, g, "retrieval.fetch_k");
        o.final_k = pick_num(final_opt, final_k, g, "retrieval.final_k");
        o.lambda = pick_num(lambda_opt, lambda, g, "retrieval.lambda");
        o.rerank = !no_rerank && g.config.get("retrieval.rerank").value_or("true") != "false";
        o.validate();
        return o;
    }
};

generation::ChainOptions chain_options(const Globals& g, const retrieval::RetrieveOptions& ro, const std::string& template_flag) {
    generation::ChainOptions c;
    c.retrieve = ro;
    if (const auto b = g.config.get("generation.char_budget")) c.char_budget = static_cast<std::size_t>(std::stoull(*b));
    const std::string tmpl = pick(template_flag, g, "generation.template");
    if (!tmpl.empty()) c.prompt = generation::QAPromptTemplate::from_file(tmpl);
    return c;
}

// ---- crawl ---------------------------------------------------------------

void tag_sample(const fs::path& root, const std::vector<fs::path>& stored, const std::vector<std::string>& urls,
                const std::vector<std::string>& sample_urls) {
    std::size_t tagged = 0;
    for (const auto& raw : sample_urls) {
        const auto canon = acquisition::canonicalize(raw);
        bool found = false;
        for (std::size_t i = 0; i < urls.size(); ++i) {
            if (!canon || urls[i] != *canon) continue;
            const fs::path src = root / stored[i];
            const fs::path dst = root / "sample" / stored[i];
            fs::create_directories(dst.parent_path());
            fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
            const fs::path meta_src = src.parent_path() / (src.stem().string() + ".meta.json");
            if (fs::exists(meta_src)) {
                fs::copy_file(meta_src, dst.parent_path() / meta_src.filename(), fs::copy_options::overwrite_existing);
            }
            found = true;
            ++tagged;
        }
        if (!found) spdlog::warn("sample URL was not crawled: {}", raw);
    }
    spdlog::info("tagged {} documents into {}", tagged, (root / "sample").string());
}

int run_crawl(const Globals& g, const std::string& seeds_file, int depth, std::size_t max_pages, long delay_ms,
              std::size_t workers, bool no_robots, const std::string& out, const std::string& sample_file) {
    const auto seeds = acquisition::parse_seed_file(io::read_file(seeds_file));
    if (seeds.empty()) throw ValidationError("seed file has no URLs: " + seeds_file);
    acquisition::CrawlPolicy policy;
    policy.max_depth = depth;
    policy.max_pages = max_pages;
    policy.per_host_delay = std::chrono::milliseconds(delay_ms);
    policy.workers = workers;
    policy.respect_robots = !no_robots;
    policy.user_agent = g.config.get("crawl.user_agent").value_or(policy.user_agent);
    policy.validate();

    const fs::path root = require_path(pick(out, g, "paths.raw"), "--out");
    acquisition::HttpFetcher fetcher(policy.timeout, policy.user_agent);
    const auto result = acquisition::crawl(seeds, policy, fetcher);

    std::vector<fs::path> stored;
    std::vector<std::string> urls;
    for (const auto& doc : result.documents) {
        stored.push_back(acquisition::store_raw(doc, root));
        urls.push_back(doc.url);
    }
    if (!sample_file.empty()) tag_sample(root, stored, urls, acquisition::parse_seed_file(io::read_file(sample_file)));

    json failures = json::array();
    for (const auto& f : result.failures) {
        failures.push_back({{"url", f.url}, {"depth", f.depth}, {"status", f.status}, {"reason", f.reason}});
    }
    json report{{"visited", result.documents.size()},
                {"failures", failures},
                {"robots_blocked", result.robots_blocked},
                {"hit_page_limit", result.hit_page_limit}};
    io::write_file(root / "crawl_report.json", io::dump_pretty(report));
    print_json({{"stored", result.documents.size()}, {"failures", result.failures.size()}, {"root", root.string()}});
    return kExitOk;
}

int run_fetch_papers(const Globals& g, const std::string& authors_file, int year, const std::string& out,
                     const std::string& api) {
    acquisition::ScholarQuery q;
    q.author_names = acquisition::parse_author_file(io::read_file(authors_file));
    q.year = year;
    q.validate();
    acquisition::ScholarClientOptions opts;
    opts.base_url = pick(api, g, "scholar.base_url", opts.base_url);
    acquisition::HttpFetcher fetcher(std::chrono::milliseconds(30000), "ragqa-scholar/1.0");
    const auto result = acquisition::fetch_papers(q, opts, fetcher);

    const fs::path root = require_path(pick(out, g, "paths.raw"), "--out");
    for (const auto& doc : result.documents) acquisition::store_raw(doc, root);
    json skipped = json::array();
    for (const auto& s : result.skipped) skipped.push_back({{"paper_id", s.paper_id}, {"title", s.title}, {"reason", s.reason}});
    print_json({{"stored", result.documents.size()}, {"skipped", skipped}, {"errors", result.errors}});
    return result.errors.empty() || !result.documents.empty() ? kExitOk : kExitProvider;
}

// ---- corpus --------------------------------------------------------------

int run_ingest(const Globals& g, const std::string& raw, const std::string& out, const std::string& keywords,
               const CLI::Option* min_opt, std::size_t min_chars) {
    extraction::IngestOptions opts;
    const std::string kw = pick(keywords, g, "ingest.keywords");
    if (!kw.empty()) opts.keywords = extraction::parse_keyword_file(io::read_file(kw));
    opts.min_chars = pick_num(min_opt, min_chars, g, "ingest.min_chars");
    const fs::path raw_root = require_path(pick(raw, g, "paths.raw"), "--raw");
    if (!fs::is_directory(raw_root)) throw MissingArtifactError("raw corpus not found: " + raw_root.string());
    const auto report = extraction::ingest(raw_root, require_path(pick(out, g, "paths.clean"), "--out"), opts);
    print_json({{"kept_by_category", report.kept_by_category},
                {"dropped_by_reason", report.dropped_by_reason},
                {"errors", report.errors},
                {"boilerplate_lines_removed", report.boilerplate_lines_removed}});
    return kExitOk;
}

int run_chunk(const Globals& g, const std::string& clean, const std::string& out, std::size_t size) {
    const fs::path clean_root = require_path(pick(clean, g, "paths.clean"), "--clean");
    if (!fs::is_directory(clean_root)) throw MissingArtifactError("clean corpus not found: " + clean_root.string());
    const auto docs = extraction::load_clean_corpus(clean_root);
    const auto chunks = chunking::chunk_corpus(docs, size);
    chunking::save_chunks(require_path(pick(out, g, "paths.chunks"), "--out"), chunks);
    print_json({{"documents", docs.size()}, {"chunks", chunks.size()}});
    return kExitOk;
}

// ---- annotation ----------------------------------------------------------

int run_annotate(const Globals& g, const std::string& chunks_path, const std::string& out, std::size_t num_qas,
                 std::size_t concurrency, const std::string& annotate_url, const std::string& report_path) {
    auto cfg = providers::resolve_config(providers::Role::generation, g.overrides, g.config);
    const std::string url = pick(annotate_url, g, "providers.annotate_url");
    if (!url.empty()) cfg.endpoint = url;
    cfg.model_id = g.config.get("providers.annotate_model").value_or(std::string(providers::kDefaultAnnotatorModel));
    cfg.validate();
    const auto generator = providers::make_generator(cfg);

    const fs::path cp = require_path(pick(chunks_path, g, "paths.chunks"), "--chunks");
    if (!fs::exists(cp)) throw MissingArtifactError("chunk store not found: " + cp.string());
    annotation::AnnotationOptions opts;
    opts.num_qas = num_qas;
    opts.concurrency = concurrency;
    const auto result = annotation::annotate_corpus(chunking::load_chunks(cp), *generator, opts);
    annotation::save_dataset(require_path(pick(out, g, "paths.qa"), "--out"), result.pairs);
    if (!report_path.empty()) io::write_file(report_path, io::dump_pretty(result.report_json()));
    std::size_t failed = 0;
    for (const auto& c : result.chunks) failed += c.status == "parse_failed" || c.status == "provider_failed";
    print_json({{"pairs", result.pairs.size()}, {"chunks", result.chunks.size()}, {"failed_chunks", failed}});
    return kExitOk;
}

int run_split(const std::string& in, const std::string& out, double fraction, std::uint64_t seed) {
    auto pairs = annotation::load_dataset(in);
    auto [train, test] = annotation::split_dataset(std::move(pairs), fraction, seed);
    std::vector<annotation::QAPair> all = train;
    all.insert(all.end(), test.begin(), test.end());
    annotation::save_dataset(out.empty() ? fs::path(in) : fs::path(out), all);
    print_json({{"train", train.size()}, {"test", test.size()}});
    return kExitOk;
}

int run_kappa(const std::string& a, const std::string& b) {
    const auto r = annotation::cohen_kappa(annotation::parse_label_file(io::read_file(a)),
                                           annotation::parse_label_file(io::read_file(b)));
    print_json({{"kappa", r.kappa},
                {"p_o", r.p_o},
                {"p_e", r.p_e},
                {"n_items", r.n_items},
                {"categories", r.categories},
                {"degenerate", r.degenerate}});
    return kExitOk;
}

// ---- retrieval / generation ----------------------------------------------

int run_index(const Globals& g, const std::string& chunks_path, const std::string& out) {
    const fs::path cp = require_path(pick(chunks_path, g, "paths.chunks"), "--chunks");
    if (!fs::exists(cp)) throw MissingArtifactError("chunk store not found: " + cp.string());
    const auto embed = providers::make_embedding(providers::resolve_config(providers::Role::embedding, g.overrides, g.config));
    const auto index = retrieval::build_index(chunking::load_chunks(cp), *embed);
    const fs::path op = require_path(pick(out, g, "paths.index"), "--out");
    index.save(op);
    print_json({{"entries", index.size()}, {"dim", index.dim()}, {"model_id", index.model_id()}, {"path", op.string()}});
    return kExitOk;
}

int run_query(const Globals& g, const std::string& index_path, const std::string& question, const RetrievalFlags& rf) {
    const auto ro = rf.resolve(g);
    const auto index = load_index(require_path(pick(index_path, g, "paths.index"), "--index"));
    const auto set = providers::make_provider_set(g.overrides, g.config);
    check_index_dim(index, *set.embed);
    const auto r = retrieval::retrieve(question, index, *set.embed, ro.rerank ? set.rerank.get() : nullptr, ro);
    json results = json::array();
    for (const auto& c : r.chunks) results.push_back(c.to_json());
    json out{{"question", question}, {"results", results}, {"rerank_degraded", r.rerank_degraded}};
    if (!r.warning.empty()) out["warning"] = r.warning;
    print_json(out);
    return kExitOk;
}

int run_ask(const Globals& g, const std::string& index_path, const std::string& question, bool no_rag,
            const std::string& template_file, const RetrievalFlags& rf, bool as_json) {
    const auto ro = rf.resolve(g);
    const auto set = providers::make_provider_set(g.overrides, g.config);
    retrieval::VectorIndex index;
    if (!no_rag) {
        index = load_index(require_path(pick(index_path, g, "paths.index"), "--index"));
        check_index_dim(index, *set.embed);
    }
    const generation::QaChain chain(index, *set.embed, set.rerank.get(), *set.generate, chain_options(g, ro, template_file));
    generation::SystemAnswer a;
    try {
        a = no_rag ? chain.answer_baseline(question) : chain.answer(question);
    } catch (const generation::AnswerError& e) {
        spdlog::error("{}", e.what());
        if (!e.partial().contexts.empty()) {
            std::cerr << "retrieved before the failure:\n";
            for (std::size_t i = 0; i < e.partial().contexts.size(); ++i) {
                std::cerr << fmt::format("  [{}] {}\n", i + 1, e.partial().contexts[i].source_path);
            }
        }
        throw;
    }
    if (as_json) {
        print_json(a.to_json(true));
        return kExitOk;
    }
    std::cout << a.answer << "\n";
    if (!a.contexts.empty()) std::cout << "\n";
    for (std::size_t i = 0; i < a.contexts.size(); ++i) {
        const auto& c = a.contexts[i];
        std::string scores = fmt::format("sim={:.4f}", c.sim_score);
        if (c.rerank_score) scores += fmt::format(" rerank={:.4f}", *c.rerank_score);
        std::cout << fmt::format("[{}] {} ({}) {}\n", i + 1, c.source_path, c.chunk_id, scores);
    }
    if (a.rerank_degraded) std::cout << "warning: " << a.warning << "\n";
    return kExitOk;
}

int run_export(const std::string& qa, const std::string& chunks, const std::string& out) {
    const auto stats = generation::export_finetune(qa, chunks, out);
    print_json({{"written", stats.written}, {"missing_chunk", stats.missing_chunk}});
    return kExitOk;
}

// ---- evaluation ----------------------------------------------------------

int run_eval(const Globals& g, const std::string& dataset, const std::string& split, const std::string& index_path,
             std::size_t runs, std::size_t sample, std::uint64_t seed, bool no_rag, const std::string& out,
             const std::string& label, const RetrievalFlags& rf) {
    const auto ro = rf.resolve(g);
    const fs::path dp = require_path(pick(dataset, g, "paths.qa"), "--dataset");
    if (!fs::exists(dp)) throw MissingArtifactError("dataset not found: " + dp.string());
    std::vector<annotation::QAPair> items;
    for (auto& p : annotation::load_dataset(dp)) {
        if (split == "all" || annotation::to_string(p.split) == split) items.push_back(std::move(p));
    }
    if (items.empty()) throw ValidationError("no QA pairs with split '" + split + "' in " + dp.string());

    const auto set = providers::make_provider_set(g.overrides, g.config);
    retrieval::VectorIndex index;
    if (!no_rag) {
        index = load_index(require_path(pick(index_path, g, "paths.index"), "--index"));
        check_index_dim(index, *set.embed);
    }
    const generation::QaChain chain(index, *set.embed, set.rerank.get(), *set.generate, chain_options(g, ro, {}));

    evaluation::EvalConfig cfg;
    cfg.num_runs = runs;
    cfg.sample_size = sample;
    cfg.seed = seed;
    cfg.rag_enabled = !no_rag;
    const auto report = evaluation::run_eval(items, evaluation::chain_pipeline(chain, cfg.rag_enabled), set.eval_embed.get(),
                                             cfg, label);
    if (!out.empty()) io::write_file(out, io::dump_pretty(report.to_json()));
    std::cout << evaluation::render_table(report);
    if (report.failed_count() > 0) std::cout << report.failed_count() << " items failed\n";
    return kExitOk;
}

int run_compare(const std::vector<std::string>& paths, const std::vector<std::string>& names, const std::string& out) {
    if (!names.empty() && names.size() != paths.size()) throw ValidationError("--names must match --reports one to one");
    std::vector<std::pair<std::string, evaluation::MetricReport>> reports;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        json j;
        try {
            j = json::parse(io::read_file(paths[i]));
        } catch (const json::parse_error& e) {
            throw FormatError(paths[i] + ": " + e.what());
        }
        auto r = evaluation::MetricReport::from_json(j);
        std::string name = !names.empty() ? names[i] : (r.label.empty() ? fs::path(paths[i]).stem().string() : r.label);
        reports.emplace_back(std::move(name), std::move(r));
    }
    const auto table = evaluation::compare_configs(reports);
    if (!out.empty()) io::write_file(out, io::dump_pretty(table.to_json()));
    std::cout << table.to_text();
    return kExitOk;
}

// ---- service -------------------------------------------------------------

service::StorePaths store_paths(const Globals& g, const std::string& clean, const std::string& chunks, const std::string& qa) {
    return {pick(clean, g, "paths.clean"), pick(chunks, g, "paths.chunks"), pick(qa, g, "paths.qa")};
}

int run_serve(const Globals& g, const std::string& index_path, const std::string& host, const CLI::Option* port_opt,
              int port, bool dev, const service::StorePaths& stores, const RetrievalFlags& rf) {
    // SIGINT/SIGTERM are routed to a waiter thread instead of an async handler.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    service::ServiceOptions opts;
    opts.host = pick(host, g, "serve.host", opts.host);
    opts.port = pick_num(port_opt, port, g, "serve.port");
    opts.dev_mode = dev || g.config.get("serve.dev").value_or("false") == "true";
    opts.cors_origin = g.config.get("serve.cors_origin").value_or(opts.cors_origin);
    opts.stores = stores;
    opts.chain = chain_options(g, rf.resolve(g), {});

    auto index = load_index(require_path(pick(index_path, g, "paths.index"), "--index"));
    const service::QaService svc(std::move(index), providers::make_provider_set(g.overrides, g.config), opts);
    service::HttpServer server(svc);
    const int bound = server.bind(opts.host, opts.port);
    spdlog::info("listening on http://{}:{}{}", opts.host, bound, opts.dev_mode ? " (dev mode, CORS on)" : "");

    std::thread waiter([&server, signals]() {
        int sig = 0;
        sigwait(&signals, &sig);
        spdlog::info("signal {} received, shutting down", sig);
        server.stop();
    });
    waiter.detach();
    server.listen();
    spdlog::info("server stopped");
    return kExitOk;
}

int run_stats(const service::StorePaths& stores) {
    print_json(service::corpus_stats(stores));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("ragqa"));

    CLI::App app{"ragqa: domain corpus construction, retrieval-augmented QA and evaluation"};
    app.require_subcommand(1);
    Globals g;
    std::string embed_url, rerank_url, gen_url, eval_embed_url;
    app.add_option("--config", g.config_path, "TOML-style settings file")->check(CLI::ExistingFile);
    app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off");
    app.add_option("--embed-url", embed_url, "Embedding endpoint or mock:<seed>");
    app.add_option("--rerank-url", rerank_url, "Reranker endpoint or mock:<seed>");
    app.add_option("--gen-url", gen_url, "Generation endpoint or mock:<seed>");
    app.add_option("--eval-embed", eval_embed_url, "Embedding endpoint for the answer-cosine metric");

    std::function<int()> action;

    // crawl
    auto* crawl = app.add_subcommand("crawl", "Breadth-first crawl from seed URLs into the raw corpus");
    std::string seeds, crawl_out, sample_file;
    int depth = 2;
    std::size_t max_pages = 10000, workers = 4;
    long delay_ms = 500;
    bool no_robots = false;
    crawl->add_option("--seeds", seeds, "File with one seed URL per line")->required()->check(CLI::ExistingFile);
    crawl->add_option("--depth", depth, "Maximum hops from a seed");
    crawl->add_option("--out", crawl_out, "Raw corpus root");
    crawl->add_option("--max-pages", max_pages, "Stop after this many pages");
    crawl->add_option("--delay-ms", delay_ms, "Minimum gap between requests to one host");
    crawl->add_option("--workers", workers, "Concurrent fetches per level");
    crawl->add_flag("--no-robots", no_robots, "Ignore robots.txt");
    crawl->add_option("--sample", sample_file, "URLs to copy into <out>/sample/ after the crawl")->check(CLI::ExistingFile);
    crawl->callback([&]() {
        action = [&]() { return run_crawl(g, seeds, depth, max_pages, delay_ms, workers, no_robots, crawl_out, sample_file); };
    });

    // fetch-papers
    auto* papers = app.add_subcommand("fetch-papers", "Download open-access papers by author and year");
    std::string authors, papers_out, api;
    int year = 2023;
    papers->add_option("--authors", authors, "File with one author name per line")->required()->check(CLI::ExistingFile);
    papers->add_option("--year", year, "Publication year");
    papers->add_option("--out", papers_out, "Raw corpus root");
    papers->add_option("--api", api, "Scholarly graph API base URL");
    papers->callback([&]() { action = [&]() { return run_fetch_papers(g, authors, year, papers_out, api); }; });

    // ingest
    auto* ing = app.add_subcommand("ingest", "Extract text, filter and write the clean corpus");
    std::string raw_root, clean_out, keywords;
    std::size_t min_chars = 200;
    ing->add_option("--raw", raw_root, "Raw corpus root");
    ing->add_option("--out", clean_out, "Clean corpus root");
    ing->add_option("--keywords", keywords, "Relevance keyword file")->check(CLI::ExistingFile);
    auto* min_opt = ing->add_option("--min-chars", min_chars, "Drop documents shorter than this");
    ing->callback([&]() { action = [&]() { return run_ingest(g, raw_root, clean_out, keywords, min_opt, min_chars); }; });

    // chunk
    auto* chk = app.add_subcommand("chunk", "Split the clean corpus into word chunks");
    std::string clean_in, chunks_out;
    std::size_t chunk_size = chunking::kDefaultChunkSize;
    chk->add_option("--clean", clean_in, "Clean corpus root");
    chk->add_option("--out", chunks_out, "chunks.jsonl");
    chk->add_option("--size", chunk_size, "Words per chunk");
    chk->callback([&]() { action = [&]() { return run_chunk(g, clean_in, chunks_out, chunk_size); }; });

    // annotate
    auto* ann = app.add_subcommand("annotate", "Generate QA pairs from chunks with the annotator model");
    std::string ann_chunks, ann_out, annotate_url, ann_report;
    std::size_t num_qas = 10, concurrency = 1;
    ann->add_option("--chunks", ann_chunks, "chunks.jsonl");
    ann->add_option("--out", ann_out, "qa.jsonl");
    ann->add_option("--num-qas", num_qas, "Pairs requested per chunk");
    ann->add_option("--concurrency", concurrency, "Parallel annotator calls");
    ann->add_option("--annotate-url", annotate_url, "Annotator endpoint (defaults to the generation endpoint)");
    ann->add_option("--report", ann_report, "Per-chunk status report");
    ann->callback([&]() {
        action = [&]() { return run_annotate(g, ann_chunks, ann_out, num_qas, concurrency, annotate_url, ann_report); };
    });

    // split
    auto* spl = app.add_subcommand("split", "Tag QA pairs train/test with a seeded shuffle");
    std::string split_in, split_out;
    double fraction = 0.8;
    std::uint64_t split_seed = 13;
    spl->add_option("--in", split_in, "qa.jsonl")->required()->check(CLI::ExistingFile);
    spl->add_option("--out", split_out, "Output (defaults to rewriting --in)");
    spl->add_option("--fraction", fraction, "Train share");
    spl->add_option("--seed", split_seed, "Shuffle seed");
    spl->callback([&]() { action = [&]() { return run_split(split_in, split_out, fraction, split_seed); }; });

    // kappa
    auto* kap = app.add_subcommand("kappa", "Cohen's kappa between two label files");
    std::string labels_a, labels_b;
    kap->add_option("--a", labels_a, "First annotator labels")->required()->check(CLI::ExistingFile);
    kap->add_option("--b", labels_b, "Second annotator labels")->required()->check(CLI::ExistingFile);
    kap->callback([&]() { action = [&]() { return run_kappa(labels_a, labels_b); }; });

    // index
    auto* idx = app.add_subcommand("index", "Embed every chunk into a vector index");
    std::string idx_chunks, idx_out;
    idx->add_option("--chunks", idx_chunks, "chunks.jsonl");
    idx->add_option("--out", idx_out, "index.bin");
    idx->callback([&]() { action = [&]() { return run_index(g, idx_chunks, idx_out); }; });

    // query
    auto* qry = app.add_subcommand("query", "Retrieve contexts for a question");
    std::string q_index, q_text;
    RetrievalFlags q_flags;
    qry->add_option("--index", q_index, "index.bin");
    qry->add_option("--q", q_text, "Question")->required();
    q_flags.add(qry, "--k");
    qry->callback([&]() { action = [&]() { return run_query(g, q_index, q_text, q_flags); }; });

    // ask
    auto* ask = app.add_subcommand("ask", "Answer a question, printing cited contexts");
    std::string a_index, a_text, a_template;
    bool a_no_rag = false, a_json = false;
    RetrievalFlags a_flags;
    ask->add_option("--index", a_index, "index.bin");
    ask->add_option("--q", a_text, "Question")->required();
    ask->add_flag("--no-rag", a_no_rag, "Answer without retrieval");
    ask->add_option("--template", a_template, "Prompt template with {question} and {context}")->check(CLI::ExistingFile);
    ask->add_flag("--json", a_json, "Print the full answer record");
    a_flags.add(ask, "--k");
    ask->callback([&]() { action = [&]() { return run_ask(g, a_index, a_text, a_no_rag, a_template, a_flags, a_json); }; });

    // export-finetune
    auto* exp = app.add_subcommand("export-finetune", "Write QA pairs in the fine-tuning prompt layout");
    std::string e_qa, e_chunks, e_out;
    exp->add_option("--qa,--in", e_qa, "qa.jsonl")->required()->check(CLI::ExistingFile);
    exp->add_option("--chunks", e_chunks, "chunks.jsonl")->required()->check(CLI::ExistingFile);
    exp->add_option("--out", e_out, "Output jsonl")->required();
    exp->callback([&]() { action = [&]() { return run_export(e_qa, e_chunks, e_out); }; });

    // eval
    auto* ev = app.add_subcommand("eval", "Sampled multi-run evaluation of RAG or the baseline");
    std::string ev_dataset, ev_split = "test", ev_index, ev_out, ev_label;
    std::size_t ev_runs = 4, ev_sample = 128;
    std::uint64_t ev_seed = 0;
    bool ev_no_rag = false;
    RetrievalFlags ev_flags;
    ev->add_option("--dataset", ev_dataset, "qa.jsonl");
    ev->add_option("--split", ev_split, "train|test|unsplit|all");
    ev->add_option("--index", ev_index, "index.bin");
    ev->add_option("--runs", ev_runs, "Independent runs");
    ev->add_option("--sample", ev_sample, "Pairs per run");
    ev->add_option("--seed", ev_seed, "Sampling seed; run i uses seed + i");
    ev->add_flag("--no-rag", ev_no_rag, "Baseline without retrieval");
    ev->add_option("--out", ev_out, "report.json");
    ev->add_option("--label", ev_label, "Row name in tables");
    ev_flags.add(ev, "--k");
    ev->callback([&]() {
        action = [&]() {
            return run_eval(g, ev_dataset, ev_split, ev_index, ev_runs, ev_sample, ev_seed, ev_no_rag, ev_out, ev_label,
                            ev_flags);
        };
    });

    // compare
    auto* cmp = app.add_subcommand("compare", "Side-by-side table of evaluation reports");
    std::vector<std::string> cmp_reports, cmp_names;
    std::string cmp_out;
    cmp->add_option("--reports", cmp_reports, "report.json files")->required()->check(CLI::ExistingFile);
    cmp->add_option("--names", cmp_names, "Row names, one per report");
    cmp->add_option("--out", cmp_out, "Machine-readable table");
    cmp->callback([&]() { action = [&]() { return run_compare(cmp_reports, cmp_names, cmp_out); }; });

    // serve
    auto* srv = app.add_subcommand("serve", "HTTP API over the QA chain");
    std::string s_index, s_host, s_clean, s_chunks, s_qa;
    int s_port = 8080;
    bool s_dev = false;
    RetrievalFlags s_flags;
    srv->add_option("--index", s_index, "index.bin");
    srv->add_option("--host", s_host, "Bind address");
    auto* port_opt = srv->add_option("--port", s_port, "Port, 0 for any free port");
    srv->add_flag("--dev", s_dev, "Enable CORS for the UI dev server");
    srv->add_option("--clean", s_clean, "Clean corpus root for /api/stats");
    srv->add_option("--chunks", s_chunks, "chunks.jsonl for /api/stats");
    srv->add_option("--qa", s_qa, "qa.jsonl for /api/stats");
    s_flags.add(srv, "--k");
    srv->callback([&]() {
        action = [&]() {
            return run_serve(g, s_index, s_host, port_opt, s_port, s_dev, store_paths(g, s_clean, s_chunks, s_qa), s_flags);
        };
    });

    // stats
    auto* sts = app.add_subcommand("stats", "Corpus, chunk and QA counts");
    std::string st_clean, st_chunks, st_qa;
    sts->add_option("--clean", st_clean, "Clean corpus root");
    sts->add_option("--chunks", st_chunks, "chunks.jsonl");
    sts->add_option("--qa", st_qa, "qa.jsonl");
    sts->callback([&]() { action = [&]() { return run_stats(store_paths(g, st_clean, st_chunks, st_qa)); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    spdlog::set_level(spdlog::level::from_str(g.log_level));
    try {
        if (!g.config_path.empty()) g.config = ConfigFile::load(g.config_path);
        if (!embed_url.empty()) g.overrides.embed_url = embed_url;
        if (!rerank_url.empty()) g.overrides.rerank_url = rerank_url;
        if (!gen_url.empty()) g.overrides.gen_url = gen_url;
        if (!eval_embed_url.empty()) g.overrides.eval_embed_url = eval_embed_url;
        return action();
    } catch (const ValidationError& e) {
        spdlog::error("{}", e.what());
        return kExitValidation;
    } catch (const MissingArtifactError& e) {
        spdlog::error("{}", e.what());
        return kExitMissing;
    } catch (const providers::ProviderError& e) {
        spdlog::error("provider failure: {}", e.what());
        return kExitProvider;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitGeneric;
    }
}
