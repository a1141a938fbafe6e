#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "om/suites.hpp"

namespace {

using om::Json;

void emit(const Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw om::ConfigParse("cannot open output file: " + out_path);
    out << text;
  }
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw om::ConfigParse("cannot open output file: " + path);
  out << text;
}

Json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw om::ConfigParse("cannot open input file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw om::ConfigParse(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return j;
}

struct CommonOpts {
  std::uint64_t seed = 1;
  int depth = 3;
  int count = 50;
  std::string kind = "dyadic";
  std::string phi = "power:0.5";
  std::vector<double> qs;
  std::string out;
  long long guard_enum = 1000000;
  long long guard_lcd = 1 << 20;
  double tol = 1e-9;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--depth", o.depth, "filtration depth");
  cmd->add_option("--n", o.count, "corpus size");
  cmd->add_option("--kind", o.kind, "filtration kind: dyadic | random");
  cmd->add_option("--phi", o.phi, "Orlicz spec, e.g. power:0.5 or powerlog:0.5:1");
  cmd->add_option("--q", o.qs, "exponent list for Campanato norms");
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--guard-enum", o.guard_enum, "stopping-time enumeration guard");
  cmd->add_option("--guard-lcd", o.guard_lcd, "budget-grid lcd guard");
  cmd->add_option("--tol", o.tol, "tolerance override for suite checks");
}

om::SuiteConfig suite_config(const CommonOpts& o) {
  om::SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.depth = o.depth;
  cfg.count = o.count;
  cfg.filtration_kind = o.kind;
  cfg.phi = om::parse_phi(o.phi);
  if (!o.qs.empty()) cfg.qs = o.qs;
  cfg.gap.enumeration_guard = o.guard_enum;
  cfg.gap.lcd_guard = o.guard_lcd;
  cfg.tol = o.tol;
  return cfg;
}

Json corpus_json(const om::FiltrationPtr& space,
                 const std::vector<om::Martingale>& corpus) {
  Json j;
  j["filtration"] = om::filtration_to_json(*space);
  Json list = Json::array();
  for (const om::Martingale& f : corpus) list.push_back(om::martingale_to_json(f));
  j["martingales"] = std::move(list);
  return j;
}

std::pair<om::FiltrationPtr, std::vector<om::Martingale>> corpus_from_json(
    const Json& j) {
  om::FiltrationPtr space = om::filtration_from_json(j.at("filtration"));
  std::vector<om::Martingale> corpus;
  for (const Json& m : j.at("martingales")) {
    corpus.push_back(om::martingale_from_json(space, m));
  }
  return {space, std::move(corpus)};
}

int cmd_gen_corpus(const CommonOpts& o) {
  om::CorpusSpec spec{o.seed, o.depth, o.count, o.kind, 3, 0.5};
  om::FiltrationPtr space = om::make_filtration(spec);
  emit(corpus_json(space, om::make_corpus(space, o.count, o.seed)), o.out);
  return 0;
}

int cmd_norm(const CommonOpts& o, const std::string& in_path) {
  auto [space, corpus] = in_path.empty()
                             ? std::pair{om::make_filtration({o.seed, o.depth,
                                                              o.count, o.kind,
                                                              3, 0.5}),
                                         std::vector<om::Martingale>{}}
                             : corpus_from_json(load_json(in_path));
  if (corpus.empty()) corpus = om::make_corpus(space, o.count, o.seed);
  const om::OrliczFunction phi = om::parse_phi(o.phi);
  om::GapOptions gap;
  gap.enumeration_guard = o.guard_enum;
  gap.lcd_guard = o.guard_lcd;
  Json rows = Json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    om::HardyNorms h = om::hardy_norms(corpus[i], phi);
    Json row;
    row["index"] = static_cast<int>(i);
    row["wH_Phi"] = h.maximal;
    row["wH_Phi_S"] = h.square;
    row["wH_Phi_s"] = h.cond_square;
    row["wQ_Phi"] = om::control_norm(corpus[i], phi, om::ControlTarget::Q);
    row["wD_Phi"] = om::control_norm(corpus[i], phi, om::ControlTarget::D);
    std::vector<double> qs = o.qs.empty() ? std::vector<double>{2.0} : o.qs;
    Json camp;
    for (double q : qs) {
      camp["q=" + std::to_string(q)] =
          om::w_campanato_norm(corpus[i], q, phi, gap);
    }
    row["w_campanato"] = std::move(camp);
    rows.push_back(std::move(row));
  }
  Json j;
  j["phi"] = om::phi_to_json(phi);
  j["norms"] = std::move(rows);
  emit(j, o.out);
  return 0;
}

int cmd_decompose(const CommonOpts& o, const std::string& in_path, int index,
                  const std::string& source) {
  auto [space, corpus] = in_path.empty()
                             ? std::pair{om::make_filtration({o.seed, o.depth,
                                                              o.count, o.kind,
                                                              3, 0.5}),
                                         std::vector<om::Martingale>{}}
                             : corpus_from_json(load_json(in_path));
  if (corpus.empty()) corpus = om::make_corpus(space, o.count, o.seed);
  if (index < 0 || index >= static_cast<int>(corpus.size())) {
    throw om::ConfigParse("martingale index out of range");
  }
  const om::Martingale& f = corpus[index];
  om::AtomicDecomposition d;
  if (source == "s") {
    d = om::decompose_s(f);
  } else if (source == "S") {
    d = om::decompose_S(f);
  } else if (source == "M") {
    d = om::decompose_M(f);
  } else if (source == "Q" || source == "D") {
    d = om::decompose_control(
        f, om::minimal_control(f, source == "Q" ? om::ControlTarget::Q
                                                : om::ControlTarget::D));
  } else {
    throw om::ConfigParse("unknown decomposition source: " + source);
  }
  Json j = om::decomposition_to_json(d);
  j["quasinorm"] = d.quasinorm(om::parse_phi(o.phi));
  emit(j, o.out);
  return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& suite) {
  om::SuiteConfig cfg = suite_config(o);
  std::vector<std::string> names =
      suite == "all" ? om::suite_names() : std::vector<std::string>{suite};
  Json combined = Json::array();
  std::string csv = "suite,metric,value\n";
  bool pass = true;
  for (const std::string& name : names) {
    om::SuiteResult res = om::run_suite(name, cfg);
    pass = pass && res.pass;
    combined.push_back(res.report);
    std::string block = om::report_csv(res);
    csv += block.substr(block.find('\n') + 1);
  }
  Json j;
  j["suites"] = std::move(combined);
  j["pass"] = pass;
  emit(j, o.out);
  if (!o.out.empty()) write_text(csv, o.out + ".csv");
  return pass ? 0 : 1;
}

int cmd_report(const CommonOpts& o) { return cmd_verify(o, "all"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak Orlicz-Hardy martingale toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string in_path, suite = "all", source = "s";
  int index = 0;

  CLI::App* gen = app.add_subcommand("gen-corpus", "generate a martingale corpus");
  add_common(gen, o);
  CLI::App* norm = app.add_subcommand("norm", "compute quasi-norms");
  add_common(norm, o);
  norm->add_option("--in", in_path, "corpus JSON (generated when omitted)");
  CLI::App* dec = app.add_subcommand("decompose", "atomic decompositions");
  add_common(dec, o);
  dec->add_option("--in", in_path, "corpus JSON (generated when omitted)");
  dec->add_option("--index", index, "martingale index in the corpus");
  dec->add_option("--source", source, "s | S | M | Q | D");
  CLI::App* ver = app.add_subcommand("verify", "run verification suites");
  add_common(ver, o);
  ver->add_option("--suite", suite,
                  "orlicz | norms | atomic | boundedness | duality | jn | all");
  CLI::App* rep = app.add_subcommand("report", "run all suites");
  add_common(rep, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_corpus(o);
    if (norm->parsed()) return cmd_norm(o, in_path);
    if (dec->parsed()) return cmd_decompose(o, in_path, index, source);
    if (ver->parsed()) return cmd_verify(o, suite);
    if (rep->parsed()) return cmd_report(o);
  } catch (const om::Error& e) {
    std::cerr << Json{{"error", e.code()}, {"message", e.what()}}.dump(2)
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "Unexpected"}, {"message", e.what()}}.dump(2)
              << "\n";
    return 2;
  }
  return 0;
}
