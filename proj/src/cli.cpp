#include "coldmtc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "coldmtc/experiment.hpp"
#include "coldmtc/synthetic.hpp"

namespace coldmtc::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
    std::string subcommand;

    std::string songs, playlists, users;
    std::string split_dir, model_path, genres, embeddings, manifest;
    std::string out;

    std::string setting = "cold_playlists";
    std::string method = "mtc";
    double lambda1 = 1e-2, lambda2 = 1e-3, lambda3 = 1e-3, p = 1.0;
    std::size_t knn = 10;
    std::string topk = "5,10,20,50,100";
    std::uint64_t seed = 0;
    unsigned threads = 1;

    std::size_t memory = 10, max_iters = 300;
    double grad_tol = 1e-6;

    double user_fraction = -1.0;  // negative: per-setting default
    std::size_t n_new_songs = 0;  // zero: default M / 10
    std::size_t min_support = 5;

    SyntheticSpec synth;

    std::string rec_user, rec_playlist, rec_mode = "topk";
    std::size_t rec_k = 10;

    std::string grid_lambda1 = "1e-3,1e-2,1e-1", grid_lambda2 = "1e-4,1e-3", grid_lambda3 = "1e-4,1e-3",
                grid_p = "1";
};

// ---- small helpers --------------------------------------------------------

std::vector<double> parse_real_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const auto& f : text::split(s, ',')) {
        const auto t = text::trim(f);
        double v = 0.0;
        std::istringstream in{std::string(t)};
        in.imbue(std::locale::classic());
        if (t.empty() || !(in >> v) || !in.eof()) throw ConfigError(flag + ": '" + std::string(t) + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(flag + ": empty list");
    return out;
}

std::vector<std::size_t> parse_topk(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& f : text::split(s, ',')) {
        const auto t = text::trim(f);
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw ConfigError("--topk: '" + std::string(t) + "' is not a positive integer");
        const auto k = static_cast<std::size_t>(std::stoull(std::string(t)));
        if (k == 0) throw ConfigError("--topk: cut-offs must be positive");
        if (!out.empty() && k <= out.back()) throw ConfigError("--topk: cut-offs must be strictly ascending");
        out.push_back(k);
    }
    if (out.empty()) throw ConfigError("--topk: empty list");
    return out;
}

void require(const std::string& value, const std::string& flag) {
    if (value.empty()) throw ConfigError(flag + " is required");
}

std::uint64_t hash_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    Fnv1a h;
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return h.digest();
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

fs::path out_dir(const RunConfig& c) {
    require(c.out, "--out");
    fs::create_directories(c.out);
    return c.out;
}

Corpus read_corpus(const RunConfig& c) {
    require(c.songs, "--songs");
    require(c.playlists, "--playlists");
    std::optional<fs::path> users;
    if (!c.users.empty()) users = c.users;
    return load_corpus(c.songs, c.playlists, users);
}

FeatureSources sources(const RunConfig& c) {
    FeatureSources s;
    if (!c.genres.empty()) s.genre_table = c.genres;
    if (!c.embeddings.empty()) s.artist_embeddings = c.embeddings;
    return s;
}

Hyperparams hyperparams(const RunConfig& c) {
    Hyperparams hp{c.lambda1, c.lambda2, c.lambda3, c.p};
    hp.validate();
    return hp;
}

OwlqnConfig optimiser(const RunConfig& c) {
    OwlqnConfig cfg;
    cfg.memory = c.memory;
    cfg.max_iters = c.max_iters;
    cfg.grad_tol = c.grad_tol;
    cfg.validate();
    return cfg;
}

SplitSpec split_spec(const RunConfig& c, const Corpus& corpus) {
    auto spec = SplitSpec::defaults(parse_setting(c.setting), corpus.num_songs());
    if (c.user_fraction >= 0.0) spec.user_fraction = c.user_fraction;
    if (c.n_new_songs > 0) spec.n_new_songs = c.n_new_songs;
    spec.min_song_support = c.min_support;
    spec.seed = c.seed;
    spec.validate(corpus.num_songs());
    return spec;
}

SplitResult read_split_checked(const RunConfig& c, const Corpus& corpus) {
    require(c.split_dir, "--split");
    return read_split(corpus, c.split_dir);
}

// ---- manifest -------------------------------------------------------------

ojson config_json(const RunConfig& c) {
    ojson j;
    j["songs"] = c.songs;
    j["playlists"] = c.playlists;
    j["users"] = c.users;
    j["split"] = c.split_dir;
    j["model"] = c.model_path;
    j["genres"] = c.genres;
    j["artist_embeddings"] = c.embeddings;
    j["out"] = c.out;
    j["setting"] = c.setting;
    j["method"] = c.method;
    j["lambda1"] = c.lambda1;
    j["lambda2"] = c.lambda2;
    j["lambda3"] = c.lambda3;
    j["p"] = c.p;
    j["knn"] = c.knn;
    j["topk"] = c.topk;
    j["threads"] = c.threads;
    j["memory"] = c.memory;
    j["max_iters"] = c.max_iters;
    j["grad_tol"] = c.grad_tol;
    j["user_fraction"] = c.user_fraction;
    j["n_new_songs"] = c.n_new_songs;
    j["min_support"] = c.min_support;
    return j;
}

void write_manifest(const RunConfig& c, const std::vector<std::string>& args, const fs::path& dir,
                    const std::vector<std::string>& outputs) {
    ojson m;
    m["tool"] = "coldmtc";
    m["version"] = kToolVersion;
    m["subcommand"] = c.subcommand;
    m["argv"] = args;
    m["seed"] = c.seed;
    m["config"] = config_json(c);

    ojson inputs = ojson::object();
    auto add_input = [&](const std::string& p) {
        if (!p.empty()) inputs[p] = hex64(hash_file(p));
    };
    add_input(c.songs);
    add_input(c.playlists);
    add_input(c.users);
    add_input(c.model_path);
    add_input(c.genres);
    add_input(c.embeddings);
    if (!c.split_dir.empty()) {
        for (const char* name : {"setting.txt", "train_playlists.txt", "test_playlists.txt", "held_songs.txt",
                                 "test_queries.txt"}) {
            const auto p = fs::path(c.split_dir) / name;
            if (fs::exists(p)) inputs[p.string()] = hex64(hash_file(p));
        }
    }
    m["inputs"] = inputs;

    ojson outs = ojson::object();
    for (const auto& name : outputs) outs[name] = hex64(hash_file(dir / name));
    m["outputs"] = outs;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

// ---- subcommands ----------------------------------------------------------

std::vector<std::string> cmd_synth(const RunConfig& c) {
    const auto dir = out_dir(c);
    auto spec = c.synth;
    spec.seed = c.seed;
    const auto data = generate_synthetic(spec);
    write_corpus(data.corpus, dir);
    std::ostringstream info;
    info << "songs=" << data.corpus.num_songs() << "\n"
         << "dropped_songs=" << data.dropped_songs << "\n"
         << "users=" << data.corpus.num_users() << "\n"
         << "playlists=" << data.corpus.num_playlists() << "\n"
         << "artists=" << data.corpus.num_artists() << "\n";
    write_text(dir / "synth.txt", info.str());
    return {"songs.csv", "playlists.csv", "users.csv", "synth.txt"};
}

std::vector<std::string> cmd_split(const RunConfig& c) {
    const auto corpus = read_corpus(c);
    const auto spec = split_spec(c, corpus);
    const auto split = make_split(corpus, spec);
    const auto report = check_split(corpus, split, spec);
    if (!report.ok) {
        std::string msg = "split failed its integrity check:";
        for (const auto& v : report.violations) msg += "\n  " + v;
        throw DataError(msg);
    }
    const auto dir = out_dir(c);
    write_split(corpus, split, dir);
    std::vector<std::string> outs{"setting.txt", "train_playlists.txt", "test_playlists.txt"};
    if (split.setting == Setting::ColdSongs) {
        outs.push_back("held_songs.txt");
        outs.push_back("test_queries.txt");
    }
    return outs;
}

std::vector<std::string> cmd_features(const RunConfig& c) {
    const auto corpus = read_corpus(c);
    const auto split = read_split_checked(c, corpus);
    const auto training = training_data(corpus, split);
    const auto x = build_features(corpus, training, sources(c));
    const auto dir = out_dir(c);
    std::ostringstream csv;
    write_features(corpus, x, csv);
    write_text(dir / "features.csv", csv.str());
    write_text(dir / "schema.json", schema_json(x.schema()));
    return {"features.csv", "schema.json"};
}

std::vector<std::string> cmd_train(const RunConfig& c) {
    const auto corpus = read_corpus(c);
    const auto split = read_split_checked(c, corpus);
    const auto training = training_data(corpus, split);
    const auto x = build_features(corpus, training, sources(c));
    const auto model = train(corpus, x, training, hyperparams(c), optimiser(c));
    const auto dir = out_dir(c);
    save_model(model, dir / "model.bin");
    const auto& s = *model.summary;
    std::ostringstream info;
    info << "setting=" << to_string(split.setting) << "\n"
         << "iterations=" << s.iterations << "\n"
         << "initial_objective=" << text::format_real(s.initial_objective) << "\n"
         << "objective=" << text::format_real(s.objective) << "\n"
         << "termination=" << to_string(s.reason) << "\n"
         << "clamped_scores=" << s.clamped_scores << "\n"
         << "schema_hash=" << hex64(model.schema_hash) << "\n";
    write_text(dir / "train.txt", info.str());
    return {"model.bin", "train.txt"};
}

std::vector<std::string> cmd_eval(const RunConfig& c) {
    const auto corpus = read_corpus(c);
    const auto split = read_split_checked(c, corpus);
    const auto method = parse_method(c.method);
    EvalOptions opts;
    opts.topk = parse_topk(c.topk);
    opts.knn = c.knn;

    EvalReport report;
    if (method == Method::Mtc) {
        require(c.model_path, "--model");
        const auto model = load_model(c.model_path);
        const auto x = build_features(corpus, training_data(corpus, split), sources(c));
        report = evaluate(corpus, split, method, opts, &x, &model);
    } else {
        report = evaluate(corpus, split, method, opts);
    }
    const auto dir = out_dir(c);
    write_text(dir / "report.txt", report.to_text());
    write_text(dir / "report.json", report.to_json() + "\n");
    return {"report.txt", "report.json"};
}

std::vector<std::string> cmd_recommend(const RunConfig& c) {
    const auto corpus = read_corpus(c);
    const auto split = read_split_checked(c, corpus);
    const auto method = parse_method(c.method);
    const auto training = training_data(corpus, split);
    require(c.rec_user, "--user");
    const auto u = corpus.find_user(c.rec_user);
    if (!u) throw ConfigError("unknown user '" + c.rec_user + "'");

    TestQuery q{*u, 0, {}};
    if (split.setting == Setting::ColdSongs) {
        require(c.rec_playlist, "--playlist");
        const auto i = corpus.find_playlist(c.rec_playlist);
        if (!i) throw ConfigError("unknown playlist '" + c.rec_playlist + "'");
        q.playlist = *i;
    } else {
        // The query playlist only matters for cold-song scoring.
        q.playlist = corpus.playlists_of(*u).front();
    }

    RecommendMode mode;
    if (c.rec_mode == "topk") mode = RecommendMode::TopK;
    else if (c.rec_mode == "sampled") mode = RecommendMode::Sampled;
    else throw ConfigError("--mode must be topk or sampled");

    EvalOptions opts;
    opts.knn = c.knn;
    const auto candidates = candidate_songs(corpus, split);
    std::vector<double> scores;
    if (method == Method::Mtc) {
        require(c.model_path, "--model");
        const auto model = load_model(c.model_path);
        const auto x = build_features(corpus, training, sources(c));
        scores = query_scores(corpus, training, q, candidates, method, opts, &x, &model);
    } else {
        scores = query_scores(corpus, training, q, candidates, method, opts, nullptr, nullptr);
    }
    const auto rec = recommend(scores, std::min(c.rec_k, candidates.size()), mode, c.seed, candidates);

    std::ostringstream csv;
    csv << "rank,song_id,artist_id,score\n";
    for (std::size_t r = 0; r < rec.items.size(); ++r) {
        const auto& [m, s] = rec.items[r];
        csv << r + 1 << ',' << corpus.song(m).id << ',' << corpus.artist_name(corpus.song(m).artist) << ','
            << text::format_real(s) << '\n';
    }
    const auto dir = out_dir(c);
    write_text(dir / "recommendations.csv", csv.str());
    return {"recommendations.csv"};
}

std::vector<std::string> cmd_grid(const RunConfig& c) {
    const auto corpus = read_corpus(c);
    const auto split = read_split_checked(c, corpus);
    const auto training = training_data(corpus, split);
    auto spec = split_spec(c, corpus);
    spec.setting = split.setting;

    std::vector<Hyperparams> grid;
    for (double l1 : parse_real_list(c.grid_lambda1, "--grid-lambda1"))
        for (double l2 : parse_real_list(c.grid_lambda2, "--grid-lambda2"))
            for (double l3 : parse_real_list(c.grid_lambda3, "--grid-lambda3"))
                for (double p : parse_real_list(c.grid_p, "--grid-p")) {
                    Hyperparams hp{l1, l2, l3, p};
                    hp.validate();
                    grid.push_back(hp);
                }
    EvalOptions opts;
    opts.topk = parse_topk(c.topk);
    opts.knn = c.knn;
    const auto points = grid_search(corpus, training, spec, sources(c), grid, optimiser(c), opts);
    const auto& best = best_point(points);

    std::ostringstream csv;
    csv << "lambda1,lambda2,lambda3,p,validation_auc\n";
    for (const auto& g : points)
        csv << text::format_real(g.hp.lambda1) << ',' << text::format_real(g.hp.lambda2) << ','
            << text::format_real(g.hp.lambda3) << ',' << text::format_real(g.hp.p) << ','
            << text::format_real(g.validation_auc) << '\n';
    std::ostringstream summary;
    summary << "best_lambda1=" << text::format_real(best.hp.lambda1) << "\n"
            << "best_lambda2=" << text::format_real(best.hp.lambda2) << "\n"
            << "best_lambda3=" << text::format_real(best.hp.lambda3) << "\n"
            << "best_p=" << text::format_real(best.hp.p) << "\n"
            << "best_validation_auc=" << text::format_real(best.validation_auc) << "\n";
    const auto dir = out_dir(c);
    write_text(dir / "grid.csv", csv.str());
    write_text(dir / "grid_best.txt", summary.str());
    return {"grid.csv", "grid_best.txt"};
}

// ---- option wiring --------------------------------------------------------

void add_corpus_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--songs", c.songs, "songs file: song_id,artist_id,release_year,<metadata...>");
    sub->add_option("--playlists", c.playlists, "playlists file: playlist_id,user_id,song;song;...");
    sub->add_option("--users", c.users, "optional users file: user_id,<attributes...>");
}

void add_feature_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--genres", c.genres, "optional song_id,genre table");
    sub->add_option("--artist-embeddings", c.embeddings, "optional artist_id,<floats...> table");
}

void add_common_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--threads", c.threads, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 256u));
}

void add_hyper_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--lambda1", c.lambda1, "squared-L2 weight on user weights");
    sub->add_option("--lambda2", c.lambda2, "L1 weight on playlist weights");
    sub->add_option("--lambda3", c.lambda3, "L1 weight on shared weights");
    sub->add_option("--p", c.p, "push exponent");
}

void add_optimiser_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--memory", c.memory, "L-BFGS memory");
    sub->add_option("--max-iters", c.max_iters, "optimiser iteration cap");
    sub->add_option("--tol", c.grad_tol, "pseudo-gradient tolerance");
}

void add_split_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--setting", c.setting, "cold_playlists | cold_users | cold_songs");
    sub->add_option("--user-fraction", c.user_fraction, "fraction of users sampled for the test set");
    sub->add_option("--n-new-songs", c.n_new_songs, "songs held out in the cold-songs setting");
    sub->add_option("--min-support", c.min_support, "corpus-wide support a cold-playlist test song needs");
}

int dispatch(const RunConfig& c, const std::vector<std::string>& args) {
    set_num_threads(c.threads);
    std::vector<std::string> outputs;
    if (c.subcommand == "synth") outputs = cmd_synth(c);
    else if (c.subcommand == "split") outputs = cmd_split(c);
    else if (c.subcommand == "features") outputs = cmd_features(c);
    else if (c.subcommand == "train") outputs = cmd_train(c);
    else if (c.subcommand == "eval") outputs = cmd_eval(c);
    else if (c.subcommand == "recommend") outputs = cmd_recommend(c);
    else if (c.subcommand == "grid") outputs = cmd_grid(c);
    else throw ConfigError("unknown subcommand '" + c.subcommand + "'");
    write_manifest(c, args, c.out, outputs);
    return 0;
}

int run_args(const std::vector<std::string>& args, int depth);

int replay(const std::string& manifest_path, const std::string& out_override, int depth) {
    if (depth > 0) throw ConfigError("a manifest cannot replay another manifest");
    require(manifest_path, "--manifest");
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + manifest_path + "'");
    ojson m;
    try {
        m = ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(manifest_path + ": " + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw DataError(manifest_path + ": no argv array");
    std::vector<std::string> args;
    try {
        args = m["argv"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(manifest_path + ": " + e.what());
    }
    if (!out_override.empty()) {
        auto it = std::find(args.begin(), args.end(), "--out");
        if (it != args.end() && std::next(it) != args.end()) *std::next(it) = out_override;
        else {
            args.push_back("--out");
            args.push_back(out_override);
        }
    }
    return run_args(args, depth + 1);
}

int run_args(const std::vector<std::string>& args, int depth) {
    RunConfig c;
    CLI::App app{"Cold-start playlist recommendation with a multitask bottom-push ranking model", "coldmtc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus from a planted linear model");
    add_common_options(synth, c);
    synth->add_option("--n-users", c.synth.users, "users");
    synth->add_option("--n-playlists", c.synth.playlists, "playlists");
    synth->add_option("--n-songs", c.synth.songs, "songs generated (uncovered ones are dropped)");
    synth->add_option("--dim", c.synth.dim, "feature dimension including the bias");
    synth->add_option("--noise", c.synth.noise, "label-flip probability");
    synth->add_option("--min-length", c.synth.min_length, "shortest playlist");
    synth->add_option("--max-length", c.synth.max_length, "longest playlist");

    auto* split = app.add_subcommand("split", "split a corpus for one cold-start setting");
    add_corpus_options(split, c);
    add_split_options(split, c);
    add_common_options(split, c);

    auto* features = app.add_subcommand("features", "build and export the song feature matrix");
    add_corpus_options(features, c);
    add_feature_options(features, c);
    features->add_option("--split", c.split_dir, "split directory");
    add_common_options(features, c);

    auto* trn = app.add_subcommand("train", "fit the multitask model on a split's training part");
    add_corpus_options(trn, c);
    add_feature_options(trn, c);
    trn->add_option("--split", c.split_dir, "split directory");
    add_hyper_options(trn, c);
    add_optimiser_options(trn, c);
    add_common_options(trn, c);

    auto* ev = app.add_subcommand("eval",
                                  "evaluate a method on a split's test part; writes report.txt (key=value) and "
                                  "report.json with fields method, setting, auc, hitrate@K, novelty@K, spread, "
                                  "num_queries, num_candidates and per-playlist AUC");
    add_corpus_options(ev, c);
    add_feature_options(ev, c);
    ev->add_option("--split", c.split_dir, "split directory");
    ev->add_option("--model", c.model_path, "model file (method mtc)");
    ev->add_option("--method", c.method, "mtc | poprank | sagh | cagh");
    ev->add_option("--knn", c.knn, "neighbours for cold-user scoring");
    ev->add_option("--topk", c.topk, "ascending top-K cut-offs, e.g. 5,10,20");
    add_common_options(ev, c);

    auto* rec = app.add_subcommand("recommend", "recommend songs for one user (or playlist for cold songs)");
    add_corpus_options(rec, c);
    add_feature_options(rec, c);
    rec->add_option("--split", c.split_dir, "split directory");
    rec->add_option("--model", c.model_path, "model file (method mtc)");
    rec->add_option("--method", c.method, "mtc | poprank | sagh | cagh");
    rec->add_option("--knn", c.knn, "neighbours for cold-user scoring");
    rec->add_option("--user", c.rec_user, "user id");
    rec->add_option("--playlist", c.rec_playlist, "playlist id (cold songs)");
    rec->add_option("--k", c.rec_k, "list length");
    rec->add_option("--mode", c.rec_mode, "topk | sampled");
    add_common_options(rec, c);

    auto* grid = app.add_subcommand("grid", "validation-AUC grid over hyper-parameters on an inner split");
    add_corpus_options(grid, c);
    add_feature_options(grid, c);
    add_split_options(grid, c);
    add_optimiser_options(grid, c);
    grid->add_option("--split", c.split_dir, "outer split directory");
    grid->add_option("--grid-lambda1", c.grid_lambda1, "comma-separated lambda1 values");
    grid->add_option("--grid-lambda2", c.grid_lambda2, "comma-separated lambda2 values");
    grid->add_option("--grid-lambda3", c.grid_lambda3, "comma-separated lambda3 values");
    grid->add_option("--grid-p", c.grid_p, "comma-separated p values");
    grid->add_option("--knn", c.knn, "neighbours for cold-user scoring");
    grid->add_option("--topk", c.topk, "ascending top-K cut-offs");
    add_common_options(grid, c);

    std::string replay_manifest, replay_out;
    auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    rep->add_option("--manifest", replay_manifest, "manifest.json of an earlier run");
    rep->add_option("--out", replay_out, "write to this directory instead of the recorded one");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto* chosen = app.get_subcommands().front();
    if (chosen == rep) return replay(replay_manifest, replay_out, depth);
    c.subcommand = chosen->get_name();
    return dispatch(c, args);
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_args(args, 0);
    } catch (const ConfigError& e) {
        std::cerr << "coldmtc: configuration error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "coldmtc: data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "coldmtc: numerical error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "coldmtc: data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "coldmtc: error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args);
}

}  // namespace coldmtc::cli
