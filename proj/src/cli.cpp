#include "sidonlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "sidonlab/acceptance.hpp"
#include "sidonlab/bourgain.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/json_io.hpp"
#include "sidonlab/kernels.hpp"
#include "sidonlab/norms.hpp"
#include "sidonlab/relations.hpp"
#include "sidonlab/riesz.hpp"
#include "sidonlab/rng.hpp"

namespace sidonlab::cli {

namespace {

enum class Format { Json, Csv, Human };

struct Config {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::uint64_t capacity = 0;  // 0 keeps the default
  double tol = 0.0;            // 0 keeps module defaults
  std::string trace;
  std::string output;
  std::string hashed;  // canonical input text, hashed into the artifact

  RelationOptions relations() const {
    RelationOptions o;
    if (capacity) o.capacity = capacity;
    return o;
  }
  Format fmt() const { return format == "csv" ? Format::Csv : format == "human" ? Format::Human : Format::Json; }
};

// A result: the JSON document plus an optional table for CSV output.
struct Artifact {
  Json doc = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int status = 0;
};

std::string num(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

Json load(Config& cfg, const std::string& arg) {
  Json j = load_json_argument(arg);
  cfg.hashed += j.dump();
  cfg.hashed += '\n';
  return j;
}

std::vector<Character> load_set(Config& cfg, const std::string& arg) { return set_from_json(load(cfg, arg)); }

void write_csv(std::ostream& os, const Artifact& a, const std::string& command) {
  if (a.header.empty()) throw DomainError("csv output is not available for " + command);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        os << cells[i];
        continue;
      }
      os << '"';
      for (char c : cells[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
      os << '"';
    }
    os << '\n';
  };
  line(a.header);
  for (const auto& r : a.rows) line(r);
}

void write_human(std::ostream& os, const Json& j, const std::string& indent = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      os << indent << it.key() << ":\n";
      write_human(os, *it, indent + "  ");
    } else {
      os << indent << it.key() << ": " << it->dump() << '\n';
    }
  }
}

// --------------------------------------------------------------------------
// Subcommands

struct QiCheck {
  std::string set;
};

Json qi_json(const std::vector<Character>& set, const RelationOptions& options) {
  const QiResult r = is_quasi_independent(set, options);
  Json j;
  j["qi"] = r.qi;
  j["strategy"] = r.strategy;
  j["size"] = set.size();
  if (r.witness) j["witness"] = relation_to_json(r.witness->sign_normalized());
  return j;
}

Artifact qi_check(Config& cfg, const QiCheck& a) {
  const std::vector<Json> docs = load_json_documents(a.set);
  for (const auto& d : docs) cfg.hashed += d.dump() + '\n';
  Artifact out;
  if (docs.size() == 1) {
    out.doc = qi_json(set_from_json(docs[0]), cfg.relations());
    out.header = {"qi", "strategy", "size"};
    out.rows.push_back({out.doc["qi"].dump(), out.doc["strategy"].get<std::string>(), out.doc["size"].dump()});
    return out;
  }
  Json results = Json::array();
  out.header = {"index", "qi", "strategy", "size"};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Json r = qi_json(set_from_json(docs[i]), cfg.relations());
    out.rows.push_back({std::to_string(i), r["qi"].dump(), r["strategy"].get<std::string>(), r["size"].dump()});
    results.push_back(std::move(r));
  }
  out.doc["results"] = std::move(results);
  return out;
}

struct Relations {
  std::string set;
  int height = -1;
  int count_gt = -1;
  int cap = -1;
};

Artifact relations_cmd(Config& cfg, const Relations& a) {
  const auto set = load_set(cfg, a.set);
  const RelationOptions options = cfg.relations();
  Artifact out;
  if (a.height >= 0) {
    const auto rels = enumerate_relations(set, a.height, options);
    Json list = Json::array();
    for (const auto& r : rels) list.push_back(relation_to_json(r));
    out.doc["height"] = a.height;
    out.doc["count"] = rels.size();
    out.doc["relations"] = std::move(list);
  } else if (a.count_gt >= 0) {
    out.doc["threshold"] = a.count_gt;
    out.doc["count"] = count_relations_height_gt(set, a.count_gt, options);
  } else {
    const auto r = max_height_relation(set, a.cap >= 0 ? std::optional<int>(a.cap) : std::nullopt, options);
    out.doc["max_height"] = r ? r->height() : 0;
    out.doc["relation"] = r ? relation_to_json(*r) : Json(nullptr);
  }
  return out;
}

struct Riesz {
  std::string set;
  std::string phases;
  std::string mode = "star";
  double a = 1.0 / std::numbers::sqrt3;
  double c = 1.0;
  bool constants = false;
  long long gamma = 0;
  bool has_gamma = false;
};

Json choice_json(const ConstantChoice& c) { return Json{{"a", c.a}, {"S", c.S}}; }

Artifact riesz_cmd(Config& cfg, const Riesz& a) {
  Artifact out;
  if (a.constants) {
    out.doc["order3"] = choice_json(optimize_qi_constant(3));
    out.doc["order5"] = choice_json(optimize_qi_constant(5));
    Json u = Json::array();
    for (int k = 1; k <= 4; ++k) {
      Json e = choice_json(union_constant(k));
      e["k"] = k;
      u.push_back(std::move(e));
    }
    out.doc["union"] = std::move(u);
    const CbConstant cb = cb_sidon_constant(a.c);
    out.doc["cb"] = Json{{"c", cb.c},
                         {"a", cb.a},
                         {"inv_S_printed", cb.inv_S_printed},
                         {"inv_S_derived", cb.inv_S_derived},
                         {"inv_S_grid", cb.inv_S_grid},
                         {"inv_S", cb.inv_S()},
                         {"discrepancy", cb.discrepancy}};
    return out;
  }
  if (a.set.empty()) throw DomainError("riesz: --set is required unless --constants is given");
  const auto set = load_set(cfg, a.set);
  RieszParams params{a.a, {}};
  if (!a.phases.empty()) params.z = phases_from_json(load(cfg, a.phases), set);
  if (a.has_gamma) {
    const Character g = Character::integer(a.gamma);
    const std::optional<int> slice = a.mode == "star" ? std::optional<int>(1) : std::nullopt;
    const Complex c = riesz_coefficient(set, params, g, slice);
    out.doc["gamma"] = a.gamma;
    out.doc["coefficient"] = Json{{"re", c.real()}, {"im", c.imag()}};
    return out;
  }
  FourierExpansion f = a.mode == "product" ? riesz_product(set, cfg.relations())
                       : a.mode == "star"  ? riesz_star(set, params, cfg.relations())
                                           : throw DomainError("riesz: --mode must be product or star");
  out.doc["mode"] = a.mode;
  out.doc["a"] = a.a;
  out.doc["terms"] = f.size();
  out.doc["expansion"] = expansion_to_json(f);
  return out;
}

struct Witness {
  std::string set;
  std::string phases;
  double a = 1.0 / std::numbers::sqrt3;
  double bound = -1;
  bool random_phases = false;
};

Artifact witness_cmd(Config& cfg, const Witness& a) {
  const auto set = load_set(cfg, a.set);
  RieszParams params{a.a, {}};
  if (!a.phases.empty()) {
    params.z = phases_from_json(load(cfg, a.phases), set);
  } else if (a.random_phases) {
    Rng rng(cfg.seed);
    for (const auto& c : set) params.z[c] = std::polar(1.0, 2 * std::numbers::pi * rng.uniform());
  }
  const FourierExpansion mu = riesz_star(set, params, cfg.relations());
  const double bound = a.bound >= 0 ? a.bound : a.a / 2 - a.a * a.a * a.a / 2;
  const WitnessReport rep = verify_sidon_witness(set, params.z, mu, bound);
  Artifact out;
  out.doc["ok"] = rep.ok;
  out.doc["a"] = a.a;
  out.doc["bound"] = bound;
  out.doc["min_value"] = rep.min_margin + bound;
  out.doc["min_margin"] = rep.min_margin;
  out.doc["mass"] = total_variation(mu).value;
  Json margins = Json::array();
  out.header = {"character", "value", "margin"};
  for (const auto& [c, m] : rep.margins) {
    margins.push_back(Json{{"character", c.key()}, {"value", m + bound}, {"margin", m}});
    out.rows.push_back({c.key(), num(m + bound), num(m)});
  }
  out.doc["margins"] = std::move(margins);
  return out;
}

struct Norms {
  std::string poly;
  std::vector<double> p;
  bool sup = false;
  bool allow_mc = false;
  std::uint64_t samples = 0;
};

Artifact norms_cmd(Config& cfg, const Norms& a) {
  const FourierExpansion f = expansion_from_json(load(cfg, a.poly));
  std::vector<NormCertificate> certs;
  NormCertificate A;
  A.quantity = "A";
  A.value = A.lower = A.upper = norm_A(f);
  A.method = "coefficient sum";
  A.exact = true;
  certs.push_back(A);
  if (a.sup || a.p.empty()) {
    SupOptions so;
    if (cfg.tol > 0) so.tol = cfg.tol;
    so.require_rigorous = !a.allow_mc;
    so.seed = cfg.seed;
    if (a.samples) so.samples = a.samples;
    certs.push_back(certified_sup_norm(f, so));
  }
  for (double p : a.p.empty() ? std::vector<double>{2.0} : a.p) {
    LpOptions lo;
    if (cfg.tol > 0) lo.rel_tol = cfg.tol;
    lo.seed = cfg.seed;
    if (a.samples) lo.samples = a.samples;
    certs.push_back(lp_norm(f, p, lo));
  }
  Artifact out;
  Json list = Json::array();
  out.header = {"quantity", "p", "value", "lower", "upper", "method", "exact"};
  for (const auto& c : certs) {
    list.push_back(certificate_to_json(c));
    out.rows.push_back({c.quantity, num(c.p), num(c.value), num(c.lower), num(c.upper), c.method,
                        c.exact ? "true" : "false"});
  }
  out.doc["terms"] = f.size();
  out.doc["certificates"] = std::move(list);
  return out;
}

struct Rudin {
  std::string set;
  double p = 4;
  std::size_t samples = 64;
};

Artifact rudin_cmd(Config& cfg, const Rudin& a) {
  const auto set = load_set(cfg, a.set);
  const RudinScan scan = rudin_ratio_batch(set, a.p, a.samples, cfg.seed);
  Artifact out;
  out.doc["p"] = scan.p;
  out.doc["samples"] = scan.ratios.size();
  out.doc["max_ratio"] = scan.max_ratio;
  out.doc["mean_ratio"] = scan.mean_ratio;
  out.doc["ratios"] = scan.ratios;
  out.header = {"sample", "ratio"};
  for (std::size_t i = 0; i < scan.ratios.size(); ++i) out.rows.push_back({std::to_string(i), num(scan.ratios[i])});
  return out;
}

struct Rademacher {
  std::vector<int> m{16};
};

Artifact rademacher_cmd(Config&, const Rademacher& a) {
  Artifact out;
  Json list = Json::array();
  out.header = {"m", "ratio", "raw_sup", "raw_ratio", "sup_after_rescaling"};
  for (int m : a.m) {
    const RademacherExtremal r = rademacher_extremal(m);
    const double sup = sign_sum_sup(r.coefficients);
    Json coeffs = Json::array();
    for (const Complex& c : r.coefficients) coeffs.push_back(Json::array({c.real(), c.imag()}));
    list.push_back(Json{{"m", m},
                        {"ratio", r.ratio},
                        {"raw_sup", r.raw_sup},
                        {"raw_ratio", r.raw_ratio},
                        {"sup_after_rescaling", sup},
                        {"sign_patterns", std::uint64_t{1} << m},
                        {"below_pi_over_2", r.ratio < std::numbers::pi / 2},
                        {"coefficients", std::move(coeffs)}});
    out.rows.push_back({std::to_string(m), num(r.ratio), num(r.raw_sup), num(r.raw_ratio), num(sup)});
  }
  out.doc["extremals"] = std::move(list);
  return out;
}

struct ExtractQi {
  std::string set;
  double C = 1.0;
  int max_attempts = 64;
};

Artifact extract_qi_cmd(Config& cfg, const ExtractQi& a) {
  const auto set = load_set(cfg, a.set);
  ExtractParams params;
  params.C = a.C;
  params.max_attempts = a.max_attempts;
  params.seed = cfg.seed;
  params.relations = cfg.relations();
  const QiExtraction e = extract_qi_random(set, params);
  Artifact out;
  out.doc = qi_extraction_to_json(e);
  out.doc["set_size"] = set.size();
  out.doc["qi_verified"] = is_quasi_independent(e.B, params.relations).qi;
  return out;
}

struct CbExtract {
  std::string input;
  std::string R = "auto";
  double C = 1.0;
  int max_attempts = 64;
  std::string oracle = "auto";
};

Artifact cb_extract_cmd(Config& cfg, const CbExtract& a) {
  const WeightedSet w = weighted_set_from_json(load(cfg, a.input));
  ExtractParams params;
  params.C = a.C;
  params.max_attempts = a.max_attempts;
  params.seed = cfg.seed;
  params.relations = cfg.relations();
  if (a.R != "auto") {
    try {
      std::size_t used = 0;
      params.R = std::stod(a.R, &used);
      if (used != a.R.size()) throw std::invalid_argument(a.R);
    } catch (const std::logic_error&) {
      throw DomainError("--R must be 'auto' or a number, got '" + a.R + "'");
    }
    if (!(params.R > 1)) throw DomainError("--R must exceed 1");
  }
  params.oracle = a.oracle == "exact"    ? CpOracle::Exact
                  : a.oracle == "random" ? CpOracle::Random
                  : a.oracle == "auto"   ? CpOracle::Auto
                                         : throw DomainError("--oracle must be auto, exact or random");
  const CbResult r = cb_extract(w, params);
  Artifact out;
  out.doc = cb_certificate_to_json(r.certificate);
  out.doc["totals"] = Json{{"w", r.trace.total},   {"w1", r.trace.total1}, {"w2", r.trace.total2},
                           {"w3", r.trace.total3}, {"w4", r.trace.total4}, {"w5", r.trace.total5}};
  if (!cfg.trace.empty()) {
    std::ofstream t(cfg.trace);
    if (!t) throw DomainError("cannot write trace file '" + cfg.trace + "'");
    t << trace_to_json(r.trace).dump(2) << '\n';
  }
  return out;
}

struct Selftest {
  bool quick = false;
  bool tamper = false;
  std::vector<int> criteria;
};

Artifact selftest_cmd(Config& cfg, const Selftest& a, std::ostream& err) {
  acceptance::Options opt;
  opt.quick = a.quick;
  opt.tamper = a.tamper;
  if (cfg.seed) opt.seed = cfg.seed;
  std::vector<acceptance::Outcome> outcomes;
  if (a.criteria.empty()) {
    outcomes = acceptance::run_all(opt);
  } else {
    for (int id : a.criteria) outcomes.push_back(acceptance::run_criterion(id, opt));
  }
  Artifact out;
  Json list = Json::array();
  bool all = true;
  out.header = {"criterion", "name", "pass", "detail"};
  for (const auto& o : outcomes) {
    err << acceptance::format_line(o) << '\n';
    all = all && o.pass;
    list.push_back(Json{{"criterion", o.id}, {"name", o.name}, {"pass", o.pass}, {"detail", o.detail}});
    out.rows.push_back({std::to_string(o.id), o.name, o.pass ? "true" : "false", o.detail});
  }
  out.doc["quick"] = a.quick;
  out.doc["tamper"] = a.tamper;
  out.doc["isa"] = kernels::isa_name(kernels::active_isa());
  out.doc["pass"] = all;
  out.doc["criteria"] = std::move(list);
  out.status = all ? 0 : 1;
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sidon sets, quasi-independence and Riesz products at desk scale", "sidonlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Config cfg;
  auto global = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "64-bit seed recorded in every artifact");
    sub->add_option("--format", cfg.format, "json, csv or human")->check(CLI::IsMember({"json", "csv", "human"}));
    sub->add_option("--capacity", cfg.capacity, "exact-search budget (default 10^7 or SIDONLAB_CAPACITY)");
    sub->add_option("--tol", cfg.tol, "tolerance override for norm certificates");
    sub->add_option("--trace", cfg.trace, "write the full pipeline trace here (cb-extract)");
    sub->add_option("-o,--output", cfg.output, "write the artifact here instead of stdout");
  };

  std::string command;
  std::function<Artifact()> action;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    global(s);
    return s;
  };

  QiCheck qa;
  auto* qi = sub("qi-check", "decide quasi-independence (one set or JSON lines)");
  qi->add_option("--set", qa.set, "set JSON, inline or a file")->required();
  qi->callback([&] { command = "qi-check", action = [&] { return qi_check(cfg, qa); }; });

  Relations ra;
  auto* rel = sub("relations", "enumerate, count or maximise relations");
  rel->add_option("--set", ra.set)->required();
  auto* h = rel->add_option("--height", ra.height, "list every relation of this height");
  auto* gt = rel->add_option("--count-gt", ra.count_gt, "count relations above this height");
  rel->add_option("--cap", ra.cap, "height cap for the maximal relation")->excludes(h)->excludes(gt);
  h->excludes(gt);
  rel->callback([&] { command = "relations", action = [&] { return relations_cmd(cfg, ra); }; });

  Riesz za;
  auto* rz = sub("riesz", "Riesz product expansions and constants");
  rz->add_option("--set", za.set);
  rz->add_option("--a", za.a, "amplitude in (0,1)");
  rz->add_option("--phases", za.phases, "phase map JSON");
  rz->add_option("--mode", za.mode, "product or star")->check(CLI::IsMember({"product", "star"}));
  rz->add_option("--gamma", za.gamma, "single coefficient at this frequency");
  rz->add_flag("--constants", za.constants, "print the witness constants");
  rz->add_option("--c", za.c, "proportion c for the weighted constant");
  rz->callback([&] {
    za.has_gamma = rz->count("--gamma") > 0;
    command = "riesz", action = [&] { return riesz_cmd(cfg, za); };
  });

  Witness wa;
  auto* wit = sub("witness", "build the starred product and check its margins");
  wit->add_option("--set", wa.set)->required();
  wit->add_option("--a", wa.a);
  wit->add_option("--phases", wa.phases);
  wit->add_flag("--random-phases", wa.random_phases, "draw phases from --seed");
  wit->add_option("--bound", wa.bound, "default a/2 - a^3/2");
  wit->callback([&] { command = "witness", action = [&] { return witness_cmd(cfg, wa); }; });

  Norms na;
  auto* nm = sub("norms", "certified A, sup and L^p norms of a polynomial");
  nm->add_option("--poly", na.poly, "expansion JSON")->required();
  nm->add_option("--p", na.p, "L^p exponents")->delimiter(',');
  nm->add_flag("--sup", na.sup, "include the sup norm when --p is given");
  nm->add_flag("--allow-mc", na.allow_mc, "accept a Monte Carlo sup estimate on the torus");
  nm->add_option("--samples", na.samples, "Monte Carlo samples");
  nm->callback([&] { command = "norms", action = [&] { return norms_cmd(cfg, na); }; });

  Rudin ua;
  auto* rd = sub("rudin", "scan ||f||_p / (sqrt(p) ||f||_2) over random coefficients");
  rd->add_option("--set", ua.set)->required();
  rd->add_option("--p", ua.p);
  rd->add_option("--samples", ua.samples);
  rd->callback([&] { command = "rudin", action = [&] { return rudin_cmd(cfg, ua); }; });

  Rademacher ma;
  auto* rm = sub("rademacher", "equal-arc extremal sign sums");
  rm->add_option("--m", ma.m, "sizes (at most 24)")->delimiter(',');
  rm->callback([&] { command = "rademacher", action = [&] { return rademacher_cmd(cfg, ma); }; });

  ExtractQi ea;
  auto* ex = sub("extract-qi", "random quasi-independent subset");
  ex->add_option("--set", ea.set)->required();
  ex->add_option("--C", ea.C, "Rudin constant hypothesis");
  ex->add_option("--max-attempts", ea.max_attempts);
  ex->callback([&] { command = "extract-qi", action = [&] { return extract_qi_cmd(cfg, ea); }; });

  CbExtract ca;
  auto* cb = sub("cb-extract", "quasi-independent subset carrying a fixed share of the weight");
  cb->add_option("--input", ca.input, "weighted set JSON")->required();
  cb->add_option("--R", ca.R, "gradation ratio or 'auto'");
  cb->add_option("--C", ca.C);
  cb->add_option("--max-attempts", ca.max_attempts);
  cb->add_option("--oracle", ca.oracle, "auto, exact or random");
  cb->callback([&] { command = "cb-extract", action = [&] { return cb_extract_cmd(cfg, ca); }; });

  Selftest sa;
  auto* st = sub("selftest", "run the acceptance criteria");
  st->add_flag("--quick", sa.quick);
  st->add_flag("--tamper", sa.tamper, "mutate the witness constant (must fail)");
  st->add_option("--criteria", sa.criteria)->delimiter(',');
  st->callback([&] { command = "selftest", action = [&] { return selftest_cmd(cfg, sa, err); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Artifact a = action();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    a.doc["meta"] = Json{{"tool", "sidonlab"},
                         {"version", kVersion},
                         {"command", command},
                         {"seed", cfg.seed},
                         {"input_hash", fnv1a_hex(command + '\n' + cfg.hashed)},
                         {"wall_time_s", wall}};
    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw DomainError("cannot write output file '" + cfg.output + "'");
    }
    std::ostream& os = cfg.output.empty() ? out : file;
    switch (cfg.fmt()) {
      case Format::Json: os << a.doc.dump(2) << '\n'; break;
      case Format::Csv: write_csv(os, a, command); break;
      case Format::Human: write_human(os, a.doc); break;
    }
    return a.status;
  } catch (const ExtractionFailure& e) {
    err << "extraction failure: " << e.what() << '\n' << e.diagnostics() << '\n';
    return 4;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "domain error: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace sidonlab::cli
