#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "regchain/analyzer.hpp"
#include "regchain/config.hpp"
#include "regchain/exact.hpp"
#include "regchain/licensing.hpp"
#include "regchain/notarization.hpp"

using namespace regchain;
using ojson = nlohmann::ordered_json;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flat JSON object -> CLI11 config items
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool defaults, bool, std::string) const override {
    ojson j;
    for (const CLI::Option* o : app->get_options()) {
      if (o->get_lnames().empty() || o->get_configurable() == false) continue;
      if (o->count() > 0)
        j[o->get_lnames()[0]] = o->as<std::string>();
      else if (defaults && !o->get_default_str().empty())
        j[o->get_lnames()[0]] = o->get_default_str();
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    ojson j = ojson::parse(in);
    std::vector<CLI::ConfigItem> items;
    for (auto& [k, v] : j.items()) {
      CLI::ConfigItem it;
      it.name = k;
      if (v.is_array())
        for (auto& e : v) it.inputs.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      else
        it.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      items.push_back(it);
    }
    return items;
  }
};

struct SimFlags {
  double alphaR = -1;
  std::string depth = "3";
  std::string strategyR, strategyUR;
  std::string model = "ir";
  double rho = 0;
  double lambdaLegal = 0.5;
  std::uint64_t epochs = 1000;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool serial = false;
  std::string out, trace;
};

unsigned parse_depth(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfiniteDepth;
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size() || v < 1) throw Usage("bad depth " + s);
    return static_cast<unsigned>(v);
  } catch (const std::logic_error&) {
    throw Usage("bad depth " + s);
  }
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag) {
  if (opt->count() > 0) return flag;
  if (const char* env = std::getenv("REGCHAIN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw Usage("REGCHAIN_SEED is not an unsigned integer");
    }
  }
  return 1;
}

GameConfig to_config(const SimFlags& f, const CLI::Option* rhoOpt) {
  GameConfig c;
  c.alphaR = f.alphaR;
  c.E = parse_depth(f.depth);
  c.maxEpochs = f.epochs;
  c.lambdaLegal = f.lambdaLegal;
  c.seed = f.seed;
  if (f.model == "sr") {
    c.releaseModelR = ReleaseModel::SR;
    c.strategyR = "rdub-frontier";
    c.strategyUR = "dub-frontier";
  } else if (f.model == "ir") {
    if (rhoOpt->count() > 0 && f.rho != 0) throw Usage("--rho needs --model ir-ocf");
  } else if (f.model != "ir-ocf") {
    throw Usage("unknown model " + f.model);
  }
  c.rho = f.model == "ir-ocf" ? f.rho : 0.0;
  if (!f.strategyR.empty()) c.strategyR = f.strategyR;
  if (!f.strategyUR.empty()) c.strategyUR = f.strategyUR;
  try {
    validate(c);
    make_strategy(Player::R, c.strategyR, c);
    make_strategy(Player::UR, c.strategyUR, c);
  } catch (const std::invalid_argument& e) {
    throw Usage(e.what());
  }
  return c;
}

void add_sim_flags(CLI::App* sub, SimFlags& f, CLI::Option*& seedOpt, CLI::Option*& rhoOpt, bool needAlpha) {
  auto* a = sub->add_option("--alpha-r", f.alphaR, "regulated share of notarization power")->check(CLI::Range(0.0, 1.0));
  if (needAlpha) a->required();
  sub->add_option("--depth,-E", f.depth, "game depth, or inf")->capture_default_str();
  sub->add_option("--epochs", f.epochs, "epochs per episode")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--trials", f.trials, "episodes")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--strategy-r", f.strategyR, "reg-frontier | rdub-frontier | withhold:L");
  sub->add_option("--strategy-ur", f.strategyUR, "leg-frontier | dub-frontier | cwb:k | attack-interior:j[:k]");
  sub->add_option("--model", f.model, "ir | ir-ocf | sr")->capture_default_str();
  rhoOpt = sub->add_option("--rho", f.rho, "fee per regulated block")->check(CLI::NonNegativeNumber);
  sub->add_option("--lambda-legal", f.lambdaLegal, "chance a UR block is legal")->capture_default_str();
  seedOpt = sub->add_option("--seed", f.seed, "base seed, falls back to REGCHAIN_SEED");
  sub->add_flag("--serial", f.serial, "skip OpenMP");
  sub->add_option("--out,-o", f.out, "CSV path, stdout if absent");
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& os() { return path_.empty() ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

void write_manifest(const std::string& command, const GameConfig& cfg, const std::string& started,
                    const std::vector<std::string>& outputs) {
  if (outputs.empty()) return;
  RunManifest m;
  m.command = command;
  m.configJson = config_json(cfg);
  m.seed = cfg.seed;
  m.version = library_version();
  m.started = started;
  m.finished = utc_now();
  m.outputs = outputs;
  std::ofstream(outputs.front() + ".manifest.json") << m.to_json() << "\n";
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

ojson trace_json(const TraceRecord& r) {
  ojson j;
  j["epoch"] = r.epoch;
  j["owner"] = to_string(r.owner);
  j["action"] = r.action.str();
  j["reaction"] = r.reaction.str();
  j["bOther"] = r.bOther;
  j["bLegal"] = r.bLegal;
  j["pending"] = r.pending;
  j["released"] = r.released;
  j["confirmedR"] = r.confirmedR;
  j["confirmedUR"] = r.confirmedUR;
  return j;
}

int cmd_simulate(const SimFlags& f, const GameConfig& cfg, const std::string& cmd) {
  std::string started = utc_now();
  if (!f.trace.empty()) {
    std::ofstream t(f.trace);
    if (!t) throw std::runtime_error("cannot open " + f.trace);
    run_episode(cfg, trial_seed(cfg.seed, 0), [&](const TraceRecord& r) { t << trace_json(r).dump() << "\n"; });
  }
  SweepRow row = estimate_gains(cfg, f.trials, !f.serial);
  Output out(f.out);
  out.os() << csv_header() << "\n" << to_csv(row) << "\n";
  std::vector<std::string> outs;
  if (!f.out.empty()) outs.push_back(f.out);
  if (!f.trace.empty()) outs.push_back(f.trace);
  write_manifest(cmd, cfg, started, outs);
  return 0;
}

std::vector<double> parse_grid(const std::string& g) {
  std::vector<double> v;
  std::stringstream ss(g);
  std::string part;
  std::vector<double> p;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t pos = 0;
      p.push_back(std::stod(part, &pos));
      if (pos != part.size()) throw Usage("bad grid " + g);
    } catch (const std::logic_error&) {
      throw Usage("bad grid " + g);
    }
  }
  if (p.size() != 3) throw Usage("grid must be start:stop:step");
  if (!(p[2] > 0)) throw Usage("grid step must be positive");
  if (p[1] < p[0] || p[0] < 0 || p[1] > 1) throw Usage("grid must lie in [0,1] with start <= stop");
  auto n = static_cast<std::size_t>(std::floor((p[1] - p[0]) / p[2] + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::min(1.0, p[0] + p[2] * static_cast<double>(i)));
  return v;
}

int cmd_sweep(const SimFlags& f, GameConfig cfg, const std::string& grid, const std::string& cmd) {
  auto xs = parse_grid(grid);
  std::string started = utc_now();
  Output out(f.out);
  out.os() << csv_header() << "\n";
  for (double a : xs) {
    cfg.alphaR = a;
    out.os() << to_csv(estimate_gains(cfg, f.trials, !f.serial)) << "\n";
  }
  if (!f.out.empty()) write_manifest(cmd, cfg, started, {f.out});
  return 0;
}

void print_threshold(std::ostream& os, const ThresholdResult& r) {
  os << r.name << "," << r.estimate << "," << r.lo << "," << r.hi << "," << r.method << ",\"" << r.note << "\"\n";
}

int cmd_thresholds(const std::string& which, const SimFlags& f, const std::vector<std::string>& depths) {
  Output out(f.out);
  auto& os = out.os();
  os.precision(6);
  if (which == "poly-roots") {
    os << "name,root\n";
    os << "ir," << poly_root_ir() << "\n";
    os << "sr," << poly_root_sr() << "\n";
    return 0;
  }
  if (which == "e3-check") {
    double worst = 0, at = 0;
    for (int i = 46; i <= 60; ++i) {
      double a = i / 100.0;
      double d = std::fabs(dp_optimal_gain_E3(a) - closed_form_gain_E3(a));
      if (d > worst) worst = d, at = a;
    }
    os << "name,max_gap,at_alpha\ne3-check," << std::scientific << worst << std::defaultfloat << "," << at << "\n";
    return 0;
  }
  os << "name,estimate,lo,hi,method,note\n";
  if (which == "h-ir") {
    std::vector<unsigned> Es;
    for (const auto& d : depths) Es.push_back(parse_depth(d));
    for (const auto& p : sweep_hIR_vs_E(Es, f.trials, f.epochs, f.seed)) print_threshold(os, p.result);
  } else if (which == "h-ocf-ir") {
    for (const auto& d : depths) {
      unsigned E = parse_depth(d);
      if (E == kInfiniteDepth || E > 13) throw Usage("h-ocf-ir is exact and needs 2 <= E <= 13");
      print_threshold(os, h_ocf_exact(E));
    }
  } else if (which == "h-sr") {
    print_threshold(os, h_sr_mc(f.trials, f.epochs, f.seed));
  } else {
    throw Usage("unknown threshold " + which);
  }
  return 0;
}

ojson root_json(const RootRef& r) { return {{"id", hex(r.id)}, {"epoch", r.epoch}}; }

int cmd_license_demo(unsigned nj, unsigned na, unsigned nk, std::uint64_t window, std::uint64_t e0,
                     std::uint64_t seed) {
  if (nj == 0 || na == 0) throw Usage("need at least one jurisdiction and one asset");
  if (nk == 0) throw Usage("need at least one executor");
  if (window == 0) throw Usage("window must be positive");
  SigningKey reg = keygen(seed);
  std::vector<std::string> F, A;
  for (unsigned i = 0; i < nj; ++i) F.push_back("F" + std::to_string(i + 1));
  for (unsigned i = 0; i < na; ++i) A.push_back("A" + std::to_string(i + 1));
  std::vector<std::vector<Bytes>> rules(nj, std::vector<Bytes>(na));
  for (unsigned i = 0; i < nj; ++i)
    for (unsigned k = 0; k < na; ++k) {
      std::string s = "rule:" + F[i] + ":" + A[k];
      rules[i][k] = Bytes(s.begin(), s.end());
    }
  RootRef root{hash(Bytes{'g', 'e', 'n'}), e0};
  Announcement ann = announce_rules(reg, F, A, rules, root, window);
  bool ok = verify_announcement(ann, reg.vk);

  ojson j;
  j["regulator"] = hex(reg.vk.bytes.data(), 32);
  j["announcement"] = {{"protocol", ann.protocol},
                       {"root", root_json(ann.root)},
                       {"window", ann.window},
                       {"jurisdictions", F},
                       {"assets", A},
                       {"rulesDigest", hex(ann.rules.digest())},
                       {"signature", hex(ann.signature)},
                       {"verified", ok}};
  j["executors"] = ojson::array();
  for (unsigned i = 0; i < nk; ++i) {
    SigningKey ex = keygen(seed + 1000 + i);
    ExecutorLicense l = issue_executor_license(reg, ann, ex.vk, ann.rules.digest());
    auto back = ExecutorLicense::deserialize(l.serialize());
    auto chk = validate_license(back, e0, ann.root, reg.vk);
    ok = ok && chk.ok;
    j["executors"].push_back({{"holder", hex(ex.vk.bytes.data(), 32)},
                              {"beta", hex(l.serialize())},
                              {"digest", hex(l.digest())},
                              {"status", to_string(chk.reason)}});
  }
  SigningKey tx = keygen(seed + 2000);
  TransactorLicense tl = issue_transactor_license(reg, ann, tx.vk, {F.front()}, {A.front()});
  auto tchk = validate_license(tl, e0, ann.root, reg.vk);
  ok = ok && tchk.ok;
  j["transactor"] = {{"holder", hex(tx.vk.bytes.data(), 32)},
                     {"jurisdictions", tl.jurisdictions},
                     {"assets", tl.assets},
                     {"status", to_string(tchk.reason)}};
  auto last = validate_license(tl, e0 + window - 1, ann.root, reg.vk);
  auto expired = validate_license(tl, e0 + window, ann.root, reg.vk);
  bool rejected = !expired.ok && expired.reason == LicenseStatus::Expired;
  ok = ok && last.ok && rejected;
  j["expiry"] = {{"lastValidEpoch", e0 + window - 1},
                 {"lastValidStatus", to_string(last.reason)},
                 {"checkedEpoch", e0 + window},
                 {"status", to_string(expired.reason)},
                 {"rejected", rejected}};
  j["allVerified"] = ok;
  std::cout << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_selftest(std::size_t samples, unsigned log2Target, std::uint64_t seed) {
  B2Report r = b2_harness(samples, log2Target, seed);
  std::cout << "comparison,samples,log2Target,meanA,meanB,D,p\n";
  std::cout << "plain-vs-regulated," << r.samples << "," << r.log2Target << "," << r.meanPlain << ","
            << r.meanRegulated << "," << r.same.statistic << "," << r.same.pValue << "\n";
  std::cout << "plain-vs-4x-target," << r.samples << "," << r.log2Target << "," << r.meanPlain << ","
            << r.meanControl << "," << r.control.statistic << "," << r.control.pValue << "\n";
  return 0;
}

// --config FILE: file values become flags unless the command line already sets them
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw Usage("--config needs a path");
  std::string path = *(it + 1);
  args.erase(it, it + 2);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<CLI::ConfigItem> items;
  if (path.ends_with(".json"))
    items = JsonConfig().from_config(in);
  else
    items = CLI::ConfigTOML().from_config(in);
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
  };
  for (const auto& item : items) {
    if (item.name.empty() || item.name == "++" || item.name == "--") continue;
    std::string flag = "--" + item.name;
    if (given(flag)) continue;
    if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
      if (item.inputs[0] == "true") args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.insert(args.end(), item.inputs.begin(), item.inputs.end());
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regulated blockchain games: simulation, thresholds, licensing"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string cfgDoc;
  app.add_option("--config", cfgDoc, "TOML or JSON file of subcommand flags; explicit flags take precedence");
  SimFlags sim, swp, thr;
  CLI::Option *simSeed, *simRho, *swpSeed, *swpRho, *thrSeed, *thrRho;

  auto* s = app.add_subcommand("simulate", "Monte Carlo gains for one configuration");
  add_sim_flags(s, sim, simSeed, simRho, true);
  s->add_option("--trace", sim.trace, "JSON-lines trace of the first episode");

  std::string grid;
  auto* w = app.add_subcommand("sweep", "gains over a grid of alphaR");
  add_sim_flags(w, swp, swpSeed, swpRho, false);
  w->add_option("--alpha-grid", grid, "start:stop:step")->required();

  std::string which;
  std::vector<std::string> depths{"3", "5", "7", "9"};
  auto* t = app.add_subcommand("thresholds", "deviation thresholds and oracle checks");
  t->add_option("--which", which)
      ->required()
      ->check(CLI::IsMember({"h-ir", "h-ocf-ir", "h-sr", "poly-roots", "e3-check"}));
  t->add_option("--depths", depths, "game depths for h-ir / h-ocf-ir")->capture_default_str();
  thr.trials = 2000;
  t->add_option("--trials", thr.trials, "episodes per Monte Carlo estimate")->capture_default_str();
  t->add_option("--epochs", thr.epochs, "epochs per episode")->capture_default_str();
  thrSeed = t->add_option("--seed", thr.seed);
  thrRho = nullptr;
  t->add_option("--out,-o", thr.out);

  unsigned nj = 2, na = 2, nk = 3;
  std::uint64_t window = 10, e0 = 0, lseed = 42;
  auto* l = app.add_subcommand("license-demo", "announce rules, issue and verify licenses");
  l->add_option("--jurisdictions", nj)->capture_default_str();
  l->add_option("--assets", na)->capture_default_str();
  l->add_option("--executors", nk)->capture_default_str();
  l->add_option("--window,-E", window)->capture_default_str();
  l->add_option("--root-epoch", e0)->capture_default_str();
  l->add_option("--seed", lseed)->capture_default_str();

  std::size_t ksSamples = 10000;
  unsigned ksTarget = 248;
  std::uint64_t ksSeed = 7;
  auto* c = app.add_subcommand("selftest", "self checks");
  auto* cc = c->add_subcommand("crypto", "KS comparison of plain and regulated mining");
  c->require_subcommand(1);
  cc->add_option("--samples", ksSamples)->capture_default_str();
  cc->add_option("--log2-target", ksTarget)->capture_default_str()->check(CLI::Range(2u, 256u));
  cc->add_option("--seed", ksSeed)->capture_default_str();

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: bad config file: " << e.what() << "\n";
    return 2;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    if (rc == 0) return 0;
    std::cerr << app.help();
    return 2;
  }

  std::string cmd = command_line(argc, argv);
  try {
    if (*s) {
      sim.seed = resolve_seed(simSeed, sim.seed);
      return cmd_simulate(sim, to_config(sim, simRho), cmd);
    }
    if (*w) {
      swp.seed = resolve_seed(swpSeed, swp.seed);
      swp.alphaR = 0.5;
      return cmd_sweep(swp, to_config(swp, swpRho), grid, cmd);
    }
    if (*t) {
      (void)thrRho;
      thr.seed = resolve_seed(thrSeed, thr.seed);
      return cmd_thresholds(which, thr, depths);
    }
    if (*l) return cmd_license_demo(nj, na, nk, window, e0, lseed);
    if (*cc) return cmd_selftest(ksSamples, ksTarget, ksSeed);
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const NonMonotoneDetected& e) {
    std::cerr << "non-monotone: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
