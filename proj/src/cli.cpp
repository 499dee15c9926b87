#include "amalgam/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "amalgam/harness.hpp"
#include "amalgam/serialization.hpp"
#include "amalgam/tolerance.hpp"

namespace amalgam {

namespace {

using io::InputError;
using io::json;

constexpr int kPass = 0;
constexpr int kCertificateFailure = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json read_json(const std::string& path) {
  try {
    return io::parse_document(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

double parse_exponent(const std::string& text, const std::string& name) {
  if (text == "inf" || text == "infinity") return kInfinity;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw InputError(name + ": expected a number or 'inf', got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& name) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_exponent(item, name));
  if (out.empty()) throw InputError(name + ": empty list");
  return out;
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << doc.dump(2) << '\n';
}

std::vector<Martingale> read_corpus(const json& doc) {
  if (doc.is_object() && doc.contains("items")) {
    std::vector<Martingale> out;
    const json& items = doc.at("items");
    if (!items.is_array()) throw InputError("corpus.items: expected an array");
    for (std::size_t i = 0; i < items.size(); ++i) {
      try {
        out.push_back(io::martingale_from_json(items[i]));
      } catch (const InputError& e) {
        throw InputError("corpus.items[" + std::to_string(i) + "]: " + e.what());
      }
    }
    return out;
  }
  return {io::martingale_from_json(doc)};
}

struct Options {
  std::string input;
  std::string output;
  std::string p = "1";
  std::string q = "1";
  std::string flavor = "s";
  std::string defn = "simple";
  std::string eta_grid = "0.25,0.5,0.75,1";
  std::string r_grid = "2,4,inf";
  std::string decomposition;
  std::string g;
  std::string mode = "exact";
  double eta = 1.0;
  std::uint64_t cap = 1'000'000;
  std::string generator = "dyadic(3)";
  std::string blocks = "single";
  std::size_t count = 10;
  std::uint64_t seed = 0;
};

int cmd_norms(const Options& o, std::ostream& out) {
  const double p = parse_exponent(o.p, "--p");
  const double q = parse_exponent(o.q, "--q");
  validate_pq(p, q);
  const Martingale f = io::martingale_from_json(read_json(o.input));
  json doc = io::to_json(all_norms(f, p, q));
  doc["schema"] = io::kSchema;
  doc["p"] = p;
  doc["q"] = io::exponent_to_json(q);
  emit(doc, o.output, out);
  return kPass;
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const double p = parse_exponent(o.p, "--p");
  const double q = parse_exponent(o.q, "--q");
  validate_pq(p, q);
  const std::vector<double> grid = parse_list(o.eta_grid, "--eta-grid");
  const Martingale f = io::martingale_from_json(read_json(o.input));
  const Decomposition d = decompose(f, p, q, parse_flavor(o.flavor), parse_definition(o.defn));
  json doc = io::to_json(d);
  emit(doc, o.output, out);
  const BoundCertificate cert = certify_bounds(f, d, grid);
  return cert.passed() ? kPass : kCertificateFailure;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Martingale f = io::martingale_from_json(read_json(o.input));
  const Decomposition d = io::decomposition_from_json(read_json(o.decomposition), f.space_ptr());
  const std::vector<double> grid = parse_list(o.eta_grid, "--eta-grid");
  const std::vector<double> rs = parse_list(o.r_grid, "--r");

  bool ok = true;
  const double residual = reconstruction_residual(d, f);
  const double scale = std::max(1.0, f.terminal().max_abs());
  const bool reconstruction_ok = residual <= 1e-10 * scale;
  ok = ok && reconstruction_ok;

  json atoms = json::array();
  for (const auto& t : d.triples) {
    json row{{"k", t.k}, {"lambda", t.lambda}};
    json reports = json::object();
    for (double r : rs) {
      if (r <= 1.0 || r <= d.p) continue;
      const AtomReport report = verify_atom(f.space(), t, d.p, d.q, r);
      ok = ok && report.passed();
      reports[std::isinf(r) ? std::string("inf") : json(r).dump()] = io::to_json(report);
    }
    row["reports"] = std::move(reports);
    atoms.push_back(std::move(row));
  }
  const BoundCertificate bounds = certify_bounds(f, d, grid);
  ok = ok && bounds.passed();

  json doc{{"schema", io::kSchema},
           {"reconstruction", {{"residual", residual}, {"tolerance", 1e-10 * scale}, {"passed", reconstruction_ok}}},
           {"atoms", std::move(atoms)},
           {"bounds", io::to_json(bounds)},
           {"passed", ok}};
  emit(doc, o.output, out);
  return ok ? kPass : kCertificateFailure;
}

int cmd_duality(const Options& o, std::ostream& out) {
  const double p = parse_exponent(o.p, "--p");
  const double q = parse_exponent(o.q, "--q");
  const Martingale f = io::martingale_from_json(read_json(o.input));
  const RandomVariable g = io::random_variable_from_json(read_json(o.g), f.space().size());
  const DualityCertificate cert = certify_duality(f, g, p, q, parse_mode(o.mode), o.eta, o.cap);
  emit(io::to_json(cert), o.output, out);
  return cert.passed() ? kPass : kCertificateFailure;
}

CorpusSpec corpus_spec(const Options& o) {
  CorpusSpec spec;
  try {
    parse_generator(o.generator, spec);
    parse_block_policy(o.blocks, spec);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  spec.count = o.count;
  spec.seed = o.seed;
  return spec;
}

int cmd_explore(const Options& o, std::ostream& out) {
  const double p = parse_exponent(o.p, "--p");
  const double q = parse_exponent(o.q, "--q");
  const std::vector<Martingale> corpus = o.input.empty() ? generate(corpus_spec(o)) : read_corpus(read_json(o.input));
  const EmbeddingTable table = explore_embeddings(corpus, p, q);
  std::string csv = table.to_csv();
  for (const auto& v : table.violations) csv += "# violation: " + v + "\n";
  if (o.output.empty()) {
    out << csv;
  } else {
    std::ofstream file(o.output);
    if (!file) throw InputError("cannot write '" + o.output + "'");
    file << csv;
  }
  return table.violations.empty() ? kPass : kCertificateFailure;
}

int cmd_gen(const Options& o, std::ostream& out) {
  CorpusSpec spec = corpus_spec(o);
  json items = json::array();
  for (const auto& f : generate(spec)) items.push_back(io::to_json(f));
  json doc{{"schema", io::kSchema},
           {"generator", o.generator},
           {"blocks", o.blocks},
           {"seed", spec.seed},
           {"count", spec.count},
           {"items", std::move(items)}};
  emit(doc, o.output, out);
  return kPass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hardy-amalgam martingale toolkit"};
  app.require_subcommand(1);
  Options o;

  auto exponents = [&](CLI::App* cmd) {
    cmd->add_option("--p", o.p, "Local exponent p");
    cmd->add_option("--q", o.q, "Block exponent q (number or inf)");
  };
  auto corpus_flags = [&](CLI::App* cmd) {
    cmd->add_option("--generator", o.generator, "dyadic(d), random-tree(b,d) or coin-walk(n)");
    cmd->add_option("--blocks", o.blocks, "single, level-cells(n) or random-partition(j)");
    cmd->add_option("--count", o.count, "Number of martingales");
    cmd->add_option("--seed", o.seed, "Random seed");
  };

  auto* norms = app.add_subcommand("norms", "All five Hardy-amalgam norms of a martingale");
  norms->add_option("input", o.input, "Martingale JSON")->required();
  exponents(norms);

  auto* dec = app.add_subcommand("decompose", "Stopping-time ladder decomposition");
  dec->add_option("input", o.input, "Martingale JSON")->required();
  exponents(dec);
  dec->add_option("--flavor", o.flavor, "s, S or star");
  dec->add_option("--defn", o.defn, "simple or weighted");
  dec->add_option("--eta-grid", o.eta_grid, "Comma-separated eta values");

  auto* ver = app.add_subcommand("verify", "Certify a decomposition against a martingale");
  ver->add_option("input", o.input, "Martingale JSON")->required();
  ver->add_option("decomposition", o.decomposition, "Decomposition JSON")->required();
  ver->add_option("--eta-grid", o.eta_grid, "Comma-separated eta values");
  ver->add_option("--r", o.r_grid, "Comma-separated atom exponents");

  auto* dual = app.add_subcommand("duality", "Campanato norm and pairing certificate");
  dual->add_option("input", o.input, "Martingale JSON")->required();
  dual->add_option("--g", o.g, "Random variable JSON")->required();
  exponents(dual);
  dual->add_option("--mode", o.mode, "exact or heuristic");
  dual->add_option("--eta", o.eta, "Aggregate exponent");
  dual->add_option("--cap", o.cap, "Largest stopping-time count enumerated exactly");

  auto* exp = app.add_subcommand("explore", "Norm ratio tables as CSV");
  exp->add_option("--input", o.input, "Corpus or martingale JSON (otherwise generated)");
  exponents(exp);
  corpus_flags(exp);

  auto* gen = app.add_subcommand("gen", "Emit a generated corpus");
  corpus_flags(gen);

  auto* self = app.add_subcommand("selftest", "Run the property suite");
  self->add_option("--seed", o.seed, "Random seed");
  self->add_option("--count", o.count, "Corpus size")->default_val(60);

  for (auto* cmd : {norms, dec, ver, dual, exp, gen}) cmd->add_option("--output,-o", o.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*norms) return cmd_norms(o, out);
    if (*dec) return cmd_decompose(o, out);
    if (*ver) return cmd_verify(o, out);
    if (*dual) return cmd_duality(o, out);
    if (*exp) return cmd_explore(o, out);
    if (*gen) return cmd_gen(o, out);
    if (*self) return run_selftest(o.seed, o.count, out) ? kPass : kCertificateFailure;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace amalgam
