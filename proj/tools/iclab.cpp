// iclab -- information-causality bounds on nonsignaling correlations.
//
// Subcommands: chsh, table1, fig1, i3322, bound, search, validate, capacity.
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 solver
// ambiguity or non-convergence.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "iclab/bounds.hpp"
#include "iclab/json_io.hpp"
#include "iclab/search.hpp"

namespace {

using nlohmann::json;
constexpr const char* kVersion = "0.1.0";

// CSV/report formatting: 6 significant digits, C locale (never touched).
std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int thread_budget() {
  if (const char* env = std::getenv("IC_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(std::min(hw, 8u)) : 1;
}

// Deterministic parallel map: body(i) fills slot i, assembly is by index.
template <typename Body>
void parallel_for(int count, Body&& body) {
  const int threads = std::max(1, std::min(thread_budget(), count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

json make_manifest(const std::string& subcommand, json parameters) {
  return json{{"tool", "iclab"},
              {"version", kVersion},
              {"subcommand", subcommand},
              {"parameters", std::move(parameters)}};
}

// Emits `text` on stdout and, when a path was given, byte-identically to it.
void emit(const std::string& text, const std::string& out_path) {
  std::fputs(text.c_str(), stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
    out << text;
  }
}

void emit_json(const json& j, const std::string& out_path) {
  emit(j.dump(2) + "\n", out_path);
}

std::string kv(const std::string& key, const std::string& value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %s\n", key.c_str(), value.c_str());
  return buf;
}

struct ChshArgs {
  double ec = 1.0;
  bool limit = false;
  double tol = 1e-10;
  std::string out;
};

void run_chsh(const ChshArgs& args) {
  using namespace iclab;
  json params{{"ec", args.ec}, {"limit", args.limit}, {"tol", args.tol}};
  if (!args.out.empty()) params["out"] = args.out;
  const json manifest = make_manifest("chsh", params);

  BoundResult result;
  std::string text;
  if (args.limit) {
    result = symmetric_limit_bound(2, 2, std::max(args.tol, 1e-9));
    text += kv("e_c", "0 (extrapolated)");
  } else {
    result = solve_symmetric_bound(2, 2, args.ec, args.tol);
    text += kv("e_c", g6(args.ec));
  }
  const double p = BiasedProbability::from_bias(2, result.e_bound).p;
  text += kv("e_bound", g6(result.e_bound));
  text += kv("p_bound", g6(p));
  if (args.limit) text += kv("fit_residual", g6(result.fit_residual));
  std::fputs(text.c_str(), stdout);

  if (!args.out.empty()) {
    json j = bound_result_to_json(result);
    j["p_bound"] = p;
    j["manifest"] = manifest;
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw std::runtime_error(args.out + ": cannot open for writing");
    out << j.dump(2) << '\n';
  }
}

struct CapacityArgs {
  int d = 0;
  double ec = -1.0;
  std::string channel_path;
  double tol = 1e-10;
  std::string out;
};

void run_capacity(const CapacityArgs& args) {
  using namespace iclab;
  json params{{"tol", args.tol}};
  std::string text;
  json j;
  if (!args.channel_path.empty()) {
    params["channel"] = args.channel_path;
    const DiscreteChannel channel = load_channel(args.channel_path);
    if (auto bias = channel.symmetric_bias()) {
      const double c = closed_form_capacity(channel.size(), *bias);
      text += kv("d", std::to_string(channel.size()));
      text += kv("capacity", g6(c));
      text += kv("method", "closed form (symmetric, e_c = " + g6(*bias) + ")");
      j = json{{"d", channel.size()}, {"capacity", c}, {"e_c", *bias},
               {"method", "closed_form"}};
    } else {
      const CapacityResult r = iterative_capacity(channel, args.tol);
      text += kv("d", std::to_string(channel.size()));
      text += kv("capacity", g6(r.capacity_bits));
      text += kv("gap", g6(r.gap_bits));
      text += kv("iterations", std::to_string(r.iterations));
      std::string dist;
      for (int i = 0; i < r.input_distribution.size(); ++i) {
        dist += (i ? " " : "") + g6(r.input_distribution(i));
      }
      text += kv("input", dist);
      j = json{{"d", channel.size()},
               {"capacity", r.capacity_bits},
               {"gap", r.gap_bits},
               {"iterations", r.iterations},
               {"input", std::vector<double>(
                             r.input_distribution.data(),
                             r.input_distribution.data() +
                                 r.input_distribution.size())},
               {"method", "blahut_arimoto"}};
    }
  } else {
    if (args.d < 2 || args.ec < 0.0) {
      throw std::domain_error(
          "capacity needs either --channel FILE or both --d and --ec");
    }
    params["d"] = args.d;
    params["ec"] = args.ec;
    const double c = closed_form_capacity(args.d, args.ec);
    text += kv("d", std::to_string(args.d));
    text += kv("e_c", g6(args.ec));
    text += kv("capacity", g6(c));
    j = json{{"d", args.d}, {"capacity", c}, {"e_c", args.ec},
             {"method", "closed_form"}};
  }
  std::fputs(text.c_str(), stdout);
  if (!args.out.empty()) {
    params["out"] = args.out;
    j["manifest"] = make_manifest("capacity", params);
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw std::runtime_error(args.out + ": cannot open for writing");
    out << j.dump(2) << '\n';
  }
}

struct Fig1Args {
  int points = 200;
  std::string out;
};

void run_fig1(const Fig1Args& args) {
  using namespace iclab;
  if (args.points < 2) throw std::domain_error("--points must be at least 2");
  json params{{"points", args.points}};
  if (!args.out.empty()) params["out"] = args.out;
  const json manifest = make_manifest("fig1", params);

  std::vector<double> bounds(args.points);
  parallel_for(args.points, [&](int i) {
    const double pc = 0.5 + 0.5 * (i + 1) / args.points;
    const double ec = 2.0 * pc - 1.0;
    bounds[i] = BiasedProbability::from_bias(
                    2, solve_symmetric_bound(2, 2, ec, 1e-10).e_bound)
                    .p;
  });

  std::string text = "# manifest: " + manifest.dump() + "\n";
  text += "p_c,p_bound\n";
  for (int i = 0; i < args.points; ++i) {
    const double pc = 0.5 + 0.5 * (i + 1) / args.points;
    text += g6(pc) + "," + g6(bounds[i]) + "\n";
  }
  emit(text, args.out);
}

void run_table1(const std::string& out_path) {
  using namespace iclab;
  json params = json::object();
  if (!out_path.empty()) params["out"] = out_path;
  const json manifest = make_manifest("table1", params);

  const int dims[] = {3, 4, 5, 20};
  struct Row {
    BoundResult tuned;
    double concat = 1.0;
  };
  std::vector<Row> rows(4);
  parallel_for(4, [&](int i) {
    rows[i].tuned = optimize_channel_bias(2, dims[i], 1e-10);
    for (int k = 1; k <= 60; ++k) {
      rows[i].concat = std::min(
          rows[i].concat, concatenation_bound({2, dims[i], k}, 1e-10).e_bound);
    }
  });

  std::string text = "# manifest: " + manifest.dump() + "\n";
  text += "d,e_c_opt,e,e_concat\n";
  for (int i = 0; i < 4; ++i) {
    text += std::to_string(dims[i]) + "," + g6(rows[i].tuned.e_c) + "," +
            g6(rows[i].tuned.e_bound) + "," + g6(rows[i].concat) + "\n";
  }
  emit(text, out_path);
}

struct I3322Args {
  std::string mode = "capacity1";
  double tol = 1e-10;
  std::string out;
};

void run_i3322(const I3322Args& args) {
  using namespace iclab;
  json params{{"mode", args.mode}, {"tol", args.tol}};
  if (!args.out.empty()) params["out"] = args.out;
  const json manifest = make_manifest("i3322", params);

  const Protocol protocol = protocol_3322();
  const BoxFamily family = [](Real e) { return box_3322(e); };
  BoundResult result;
  if (args.mode == "capacity1") {
    result = protocol_bound(protocol, family, identity_channel(2), args.tol);
  } else if (args.mode == "limit") {
    result = limit_bound(protocol, family, 2, std::max(args.tol, 1e-9));
  } else {
    throw std::domain_error("--mode must be capacity1 or limit");
  }

  std::string text;
  text += kv("mode", args.mode);
  text += kv("e_bound", g6(result.e_bound));
  text += kv("i3322_at_bound", g6(2.0 * result.e_bound - 1.0));
  // The quantum value is quoted for orientation only; it comes from the
  // semidefinite-relaxation literature and is never computed here.
  text += kv("quantum_reference", "e = 0.6 (3/5, reported value, not computed)");
  std::fputs(text.c_str(), stdout);

  if (!args.out.empty()) {
    json j = bound_result_to_json(result);
    j["i3322_at_bound"] = 2.0 * result.e_bound - 1.0;
    j["quantum_reference_e"] = 0.6;
    j["manifest"] = manifest;
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw std::runtime_error(args.out + ": cannot open for writing");
    out << j.dump(2) << '\n';
  }
}

struct BoundArgs {
  std::string box_path;
  std::string protocol_path;
  std::string channel_path;
  bool limit = false;
  double tol = 1e-10;
  std::string out;
};

void run_bound(const BoundArgs& args) {
  using namespace iclab;
  json params{{"box", args.box_path},
              {"protocol", args.protocol_path},
              {"limit", args.limit},
              {"tol", args.tol}};
  if (!args.channel_path.empty()) params["channel"] = args.channel_path;
  if (!args.out.empty()) params["out"] = args.out;
  const json manifest = make_manifest("bound", params);

  const BipartiteBox box = load_box(args.box_path);
  const Protocol protocol = load_protocol(args.protocol_path);
  const BoxFamily family = [&box](Real e) {
    return mix_with_white_noise(box, e);
  };

  BoundResult result;
  if (args.limit) {
    result = limit_bound(protocol, family, protocol.message_alphabet,
                         std::max(args.tol, 1e-9));
  } else {
    const DiscreteChannel channel =
        args.channel_path.empty() ? identity_channel(protocol.message_alphabet)
                                  : load_channel(args.channel_path);
    result = protocol_bound(protocol, family, channel, args.tol);
  }

  json j = bound_result_to_json(result);
  j["p_bound"] =
      BiasedProbability::from_bias(protocol.data_alphabet, result.e_bound).p;
  j["manifest"] = manifest;
  emit_json(j, args.out);
}

struct SearchArgs {
  std::string box_path;
  std::string channel_path;
  int n_data = 2;
  std::uint64_t seed = 0;
  double t0 = 1.0;
  double cooling = 0.995;
  int steps = 200;
  long long evals = 1'000'000;
  bool exhaustive = false;
  std::string out;
};

void run_search(const SearchArgs& args) {
  using namespace iclab;
  json params{{"box", args.box_path},       {"n", args.n_data},
              {"seed", args.seed},          {"t0", args.t0},
              {"cooling", args.cooling},    {"steps", args.steps},
              {"evals", args.evals},        {"exhaustive", args.exhaustive}};
  if (!args.channel_path.empty()) params["channel"] = args.channel_path;
  if (!args.out.empty()) params["out"] = args.out;
  const json manifest = make_manifest("search", params);

  const BipartiteBox box = load_box(args.box_path);
  // Reference channel for the objective; half-bias keeps the bound tight
  // without the cost of solving it inside the inner loop.
  const DiscreteChannel channel = args.channel_path.empty()
                                      ? symmetric_channel(2, 0.5)
                                      : load_channel(args.channel_path);

  SearchConfig config;
  config.initial_temperature = args.t0;
  config.cooling_factor = args.cooling;
  config.steps_per_temperature = args.steps;
  config.max_evaluations = args.evals;
  config.seed = args.seed;

  const SearchResult result =
      args.exhaustive ? exhaustive_protocol_search(box, channel, args.n_data)
                      : anneal_protocol(box, channel, args.n_data, config);

  json j = search_result_to_json(result, config);
  j["manifest"] = manifest;
  emit_json(j, args.out);
}

struct ValidateArgs {
  std::string box_path;
  double tol = 1e-10;
};

int run_validate(const ValidateArgs& args) {
  using namespace iclab;
  const BipartiteBox box = load_box(args.box_path);
  const NoSignalingReport report = validate_no_signaling(box, args.tol);
  if (report.ok()) {
    std::printf("%s: valid nonsignaling box (tol %s)\n", args.box_path.c_str(),
                g6(args.tol).c_str());
    return 0;
  }
  std::printf("%s: %s\n", args.box_path.c_str(), report.summary().c_str());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-causality bounds on nonsignaling correlations"};
  app.set_version_flag("--version", std::string("iclab ") + kVersion);
  app.require_subcommand(1);

  ChshArgs chsh;
  auto* chsh_cmd = app.add_subcommand(
      "chsh", "bound on the game-winning probability p for a binary box");
  chsh_cmd->add_option("--ec", chsh.ec, "channel bias e_c in (0,1]");
  chsh_cmd->add_flag("--limit", chsh.limit,
                     "extrapolate the bound to vanishing channel bias");
  chsh_cmd->add_option("--tol", chsh.tol, "bisection tolerance");
  chsh_cmd->add_option("--out", chsh.out, "also write a JSON result file");

  CapacityArgs capacity;
  auto* capacity_cmd =
      app.add_subcommand("capacity", "capacity of a discrete channel");
  capacity_cmd->add_option("--d", capacity.d, "alphabet size (closed form)");
  capacity_cmd->add_option("--ec", capacity.ec, "channel bias (closed form)");
  capacity_cmd->add_option("--channel", capacity.channel_path,
                           "channel JSON file (iterative)");
  capacity_cmd->add_option("--tol", capacity.tol, "certified gap in bits");
  capacity_cmd->add_option("--out", capacity.out, "JSON result file");

  Fig1Args fig1;
  auto* fig1_cmd = app.add_subcommand(
      "fig1", "CSV sweep of the p bound over binary-channel flip rates");
  fig1_cmd->add_option("--points", fig1.points, "grid points on (0.5, 1]");
  fig1_cmd->add_option("--out", fig1.out, "CSV output file");

  std::string table1_out;
  auto* table1_cmd = app.add_subcommand(
      "table1", "CSV of tuned-channel vs concatenation bounds for d-ary boxes");
  table1_cmd->add_option("--out", table1_out, "CSV output file");

  I3322Args i3322;
  auto* i3322_cmd = app.add_subcommand(
      "i3322", "bounds for the three-setting scenario fixture");
  i3322_cmd->add_option("--mode", i3322.mode, "capacity1 | limit")
      ->check(CLI::IsMember({"capacity1", "limit"}));
  i3322_cmd->add_option("--tol", i3322.tol, "solver tolerance");
  i3322_cmd->add_option("--out", i3322.out, "JSON result file");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand(
      "bound", "noise bound for a box/protocol/channel triple");
  bound_cmd->add_option("--box", bound.box_path, "box JSON file")->required();
  bound_cmd->add_option("--protocol", bound.protocol_path, "protocol JSON file")
      ->required();
  bound_cmd->add_option("--channel", bound.channel_path,
                        "channel JSON file (default: identity)");
  bound_cmd->add_flag("--limit", bound.limit,
                      "extrapolate over symmetric channels to zero bias");
  bound_cmd->add_option("--tol", bound.tol, "solver tolerance");
  bound_cmd->add_option("--out", bound.out, "JSON result file");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand(
      "search", "search protocol tables maximizing the information sum");
  search_cmd->add_option("--box", search.box_path, "box JSON file")->required();
  search_cmd->add_option("--channel", search.channel_path,
                         "channel JSON file (default: symmetric e_c = 0.5)");
  search_cmd->add_option("--n", search.n_data, "number of data bits");
  search_cmd->add_option("--seed", search.seed, "random seed");
  search_cmd->add_option("--t0", search.t0, "initial temperature");
  search_cmd->add_option("--cooling", search.cooling, "geometric cooling factor");
  search_cmd->add_option("--steps", search.steps, "steps per temperature");
  search_cmd->add_option("--evals", search.evals, "evaluation cap");
  search_cmd->add_flag("--exhaustive", search.exhaustive,
                       "enumerate instead of annealing");
  search_cmd->add_option("--out", search.out, "JSON result file");

  ValidateArgs validate;
  auto* validate_cmd =
      app.add_subcommand("validate", "check a box file for no-signaling");
  validate_cmd->add_option("--box", validate.box_path, "box JSON file")
      ->required();
  validate_cmd->add_option("--tol", validate.tol, "violation tolerance");

  try {
    app.parse(argc, argv);
    if (*chsh_cmd) run_chsh(chsh);
    if (*capacity_cmd) run_capacity(capacity);
    if (*fig1_cmd) run_fig1(fig1);
    if (*table1_cmd) run_table1(table1_out);
    if (*i3322_cmd) run_i3322(i3322);
    if (*bound_cmd) run_bound(bound);
    if (*search_cmd) run_search(search);
    if (*validate_cmd) return run_validate(validate);
    return 0;
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  } catch (const iclab::SchemaError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const iclab::AmbiguousBoundError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 3;
  } catch (const iclab::ExtrapolationError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 3;
  } catch (const iclab::CapacityConvergenceError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 3;
  } catch (const std::domain_error& err) {
    std::fprintf(stderr, "usage error: %s\n", err.what());
    return 1;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
