// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 dupscan contributors

#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dupscan/io_util.hpp"

namespace {

using namespace dupscan::cli;

int dispatch(CLI::App& app, int argc, char** argv) {
  IngestOpts ingest;
  EmbedOpts embed;
  ClusterOpts cluster;
  SweepOpts sweep;
  RopmOpts ropm;
  GraphOpts graph;
  CommunitiesOpts communities;
  ScreenOpts screen;
  ToxicityOpts toxicity;
  SpeciousOpts specious;
  TimelineOpts timeline;
  SynthOpts synth;
  EvaluateOpts evaluate;
  ReportOpts report;
  int exit_code = 0;

  auto* c_ingest = app.add_subcommand("ingest", "Load posts, apply noise filters");
  c_ingest->add_option("--posts", ingest.posts, "Post file")->required();
  c_ingest->add_option("--format", ingest.format, "jsonl or csv");
  c_ingest->add_option("--accounts", ingest.accounts, "Account CSV to validate and copy");
  c_ingest->add_option("--langs", ingest.langs, "Allowed language codes");
  c_ingest->add_option("--min-unique-words", ingest.min_unique_words, "Minimum unique words");
  c_ingest->add_flag("--keep-retweets", ingest.keep_retweets, "Do not drop retweets");
  c_ingest->add_option("--out", ingest.out, "Output directory")->required();
  c_ingest->callback([&] { exit_code = run_ingest(ingest); });

  auto* c_embed = app.add_subcommand("embed", "Embed posts (hashed n-gram or service)");
  c_embed->add_option("--posts", embed.posts)->required();
  c_embed->add_option("--provider", embed.provider, "hashed or service");
  c_embed->add_option("--dim", embed.dim, "Embedding dimension (hashed provider)");
  c_embed->add_option("--ngram-lo", embed.ngram_lo);
  c_embed->add_option("--ngram-hi", embed.ngram_hi);
  c_embed->add_option("--seed", embed.seed);
  c_embed->add_option("--embed-endpoint", embed.endpoint, "Embedding service URL");
  c_embed->add_option("--batch-size", embed.batch_size);
  c_embed->add_option("--out", embed.out)->required();
  c_embed->callback([&] { exit_code = run_embed(embed); });

  auto* c_cluster = app.add_subcommand("cluster", "DBSCAN duplication clustering");
  c_cluster->add_option("--embeddings", cluster.embeddings)->required();
  c_cluster->add_option("--posts", cluster.posts, "Posts for spans and account stats");
  c_cluster->add_option("--eps", cluster.eps, "Neighborhood radius");
  c_cluster->add_option("--min-pts", cluster.min_pts);
  c_cluster->add_option("--threads", cluster.threads);
  c_cluster->add_option("--size-threshold", cluster.size_threshold, "k for the >=k cluster count");
  c_cluster->add_option("--consistency-cap", cluster.consistency_cap);
  c_cluster->add_option("--seed", cluster.seed, "Sampling seed for consistency");
  c_cluster->add_option("--out", cluster.out)->required();
  c_cluster->callback([&] { exit_code = run_cluster(cluster); });

  auto* c_sweep = app.add_subcommand("sweep", "Eps sweep against ground truth");
  c_sweep->add_option("--embeddings", sweep.embeddings)->required();
  c_sweep->add_option("--truth", sweep.truth)->required();
  c_sweep->add_option("--eps", sweep.eps, "lo:hi:step or comma list");
  c_sweep->add_option("--min-pts", sweep.min_pts);
  c_sweep->add_option("--threads", sweep.threads);
  c_sweep->add_option("--out", sweep.out)->required();
  c_sweep->callback([&] { exit_code = run_sweep(sweep); });

  auto* c_ropm = app.add_subcommand("ropm", "Sliding-window pattern-matching baseline");
  c_ropm->add_option("--posts", ropm.posts)->required();
  c_ropm->add_option("--window", ropm.windows, "Window sizes (repeatable)");
  c_ropm->add_option("--sim-threshold", ropm.sim_threshold);
  c_ropm->add_option("--threads", ropm.threads);
  c_ropm->add_option("--out", ropm.out)->required();
  c_ropm->callback([&] { exit_code = run_ropm(ropm); });

  auto* c_graph = app.add_subcommand("graph", "Account co-duplication graph");
  c_graph->add_option("--clusters", graph.clusters)->required();
  c_graph->add_option("--posts", graph.posts)->required();
  c_graph->add_option("--min-shared", graph.min_shared, "Edge threshold");
  c_graph->add_option("--out", graph.out)->required();
  c_graph->callback([&] { exit_code = run_graph(graph); });

  auto* c_comm = app.add_subcommand("communities", "Louvain communities and profile");
  c_comm->add_option("--edges", communities.edges)->required();
  c_comm->add_option("--accounts", communities.accounts, "Accounts CSV for party labels");
  c_comm->add_option("--seed", communities.seed);
  c_comm->add_option("--min-size", communities.min_size);
  c_comm->add_flag("--binary-edges", communities.binary_edges, "Ignore edge weights");
  c_comm->add_option("--out", communities.out)->required();
  c_comm->callback([&] { exit_code = run_communities(communities); });

  auto* c_screen = app.add_subcommand("screen", "Account classification and keyword campaigns");
  c_screen->add_option("--accounts", screen.accounts)->required();
  c_screen->add_option("--scores", screen.scores, "Bot score CSV");
  c_screen->add_option("--parties", screen.parties, "Party label CSV");
  c_screen->add_option("--cap-min", screen.cap_min);
  c_screen->add_option("--rbs-min", screen.rbs_min);
  c_screen->add_option("--keywords", screen.keywords);
  c_screen->add_option("--clusters", screen.clusters);
  c_screen->add_option("--posts", screen.posts);
  c_screen->add_option("--top-k", screen.top_k, "Top clusters per keyword");
  c_screen->add_flag("--word-boundary", screen.word_boundary);
  c_screen->add_option("--out", screen.out)->required();
  c_screen->callback([&] { exit_code = run_screen(screen); });

  auto* c_tox = app.add_subcommand("toxicity", "Per-cluster toxicity labels");
  c_tox->add_option("--clusters", toxicity.clusters)->required();
  c_tox->add_option("--posts", toxicity.posts)->required();
  c_tox->add_option("--lexicon", toxicity.lexicon, "Built-in lexicon scorer CSV");
  c_tox->add_option("--tox-endpoint", toxicity.endpoint, "Toxicity service URL");
  c_tox->add_option("--parties", toxicity.parties);
  c_tox->add_option("--tox-threshold", toxicity.threshold);
  c_tox->add_option("--seed", toxicity.seed, "Representative sampling seed");
  c_tox->add_option("--out", toxicity.out)->required();
  c_tox->callback([&] { exit_code = run_toxicity(toxicity); });

  auto* c_spec = app.add_subcommand("specious", "Match posts against specious domains");
  c_spec->add_option("--posts", specious.posts)->required();
  c_spec->add_option("--domains", specious.domains)->required();
  c_spec->add_option("--clusters", specious.clusters);
  c_spec->add_option("--parties", specious.parties);
  c_spec->add_option("--out", specious.out)->required();
  c_spec->callback([&] { exit_code = run_specious(specious); });

  auto* c_time = app.add_subcommand("timeline", "Daily timeline of flagged posts");
  c_time->add_option("--posts", timeline.posts)->required();
  c_time->add_option("--specious", timeline.specious, "specious.json from the specious stage")
      ->required();
  c_time->add_option("--from", timeline.from, "YYYY-MM-DD")->required();
  c_time->add_option("--to", timeline.to, "YYYY-MM-DD")->required();
  c_time->add_option("--out", timeline.out)->required();
  c_time->callback([&] { exit_code = run_timeline(timeline); });

  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  c_synth->add_option("--accounts", synth.accounts);
  c_synth->add_option("--campaigns", synth.campaigns);
  c_synth->add_option("--mean-size", synth.mean_size);
  c_synth->add_option("--mutation-rate", synth.mutation_rate);
  c_synth->add_option("--noise-posts", synth.noise_posts);
  c_synth->add_option("--bot-fraction", synth.bot_fraction);
  c_synth->add_option("--specious-rate", synth.specious_rate);
  c_synth->add_option("--toxic-fraction", synth.toxic_fraction);
  c_synth->add_option("--from", synth.t_begin, "Range start, ISO timestamp");
  c_synth->add_option("--to", synth.t_end, "Range end, ISO timestamp");
  c_synth->add_option("--dim", synth.dim, "Dim used for the planted cosine floor");
  c_synth->add_option("--seed", synth.seed);
  c_synth->add_option("--out", synth.out)->required();
  c_synth->callback([&] { exit_code = run_synth(synth); });

  auto* c_eval = app.add_subcommand("evaluate", "Score clusters against ground truth");
  c_eval->add_option("--clusters", evaluate.clusters)->required();
  c_eval->add_option("--truth", evaluate.truth)->required();
  c_eval->add_option("--out", evaluate.out)->required();
  c_eval->callback([&] { exit_code = run_evaluate(evaluate); });

  auto* c_report = app.add_subcommand("report", "Consolidate stage outputs");
  c_report->add_option("--out", report.out, "Directory holding stage outputs")->required();
  c_report->callback([&] { exit_code = run_report(report); });

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detects content-duplication campaigns in social-media post corpora"};
  try {
    return dispatch(app, argc, argv);
  } catch (const dupscan::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
