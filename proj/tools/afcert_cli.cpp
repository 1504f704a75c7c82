#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "afcert/classification.hpp"
#include "afcert/examples.hpp"
#include "afcert/io.hpp"

using namespace afcert;
using nlohmann::json;

namespace {

struct Options {
  std::string input, element, word, output, center, name = "opposite-sign", group;
  double alpha = 1.0, radius = 1.0, boost = std::log(4.0), angle = M_PI / 2, scale = 10.0;
  int max_len = 6, jobs = 1, dim = 0;
  long n_max = 200;
  unsigned long seed = 0;
};

constexpr int kOk = 0, kRejected = 1, kInputError = 2, kNotFound = 3;

json split_json(const SpectralSplit& s) {
  return {{"dims", {s.a_plus.dim(), s.a_minus.dim(), s.a_zero.dim()}},
          {"a_plus", to_json(s.a_plus.basis)},
          {"a_minus", to_json(s.a_minus.basis)},
          {"a_zero", to_json(s.a_zero.basis)}};
}

AffineMap select_element(const GroupSpec& spec, const Options& o, std::string& label) {
  std::vector<std::string> names;
  for (const auto& g : spec.generators) names.push_back(g.name);
  if (!o.element.empty() && !o.word.empty()) throw Error(ErrorKind::InvalidArgument, "give --element or --word, not both");
  const std::string text = o.element.empty() ? o.word : o.element;
  if (text.empty()) throw Error(ErrorKind::InvalidArgument, "--element or --word is required");
  const Word w = parse_word(text, names);
  label = w.str(names);
  return evaluate(spec, w);
}

Vec parse_center(const std::string& s, int dim) {
  if (s.empty()) return Vec::Zero(dim);
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "--center: invalid number '" + tok + "'");
    }
  }
  if (static_cast<int>(v.size()) != dim) throw Error(ErrorKind::DimMismatch, "--center needs " + std::to_string(dim) + " numbers");
  return Eigen::Map<Vec>(v.data(), dim);
}

json config_json(const Options& o) {
  return {{"input", o.input},       {"element", o.element}, {"word", o.word},     {"alpha", o.alpha},
          {"max_word_len", o.max_len}, {"n_max", o.n_max},  {"radius", o.radius}, {"seed", o.seed},
          {"jobs", o.jobs},         {"center", o.center},   {"unit_band", 1e-9},  {"kernel_tol", 1e-8},
          {"screen_tol", 1e-8},     {"min_transversality", 1e-9}, {"power_cap", 64}};
}

int emit(const json& report, const Options& o) {
  const std::string text = report.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + o.output);
    out << text;
  }
  return 0;
}

json base_report(const std::string& cmd, const Options& o, const std::vector<std::string>& argv) {
  json r;
  r["schema"] = "afcert-report";
  r["version"] = kReportVersion;
  r["command"] = cmd;
  r["argv"] = argv;
  r["config"] = config_json(o);
  r["certificates"] = json::array();
  return r;
}

int cmd_decompose(const Options& o, json& r) {
  const GroupSpec spec = load_group_file(o.input);
  std::string label;
  const AffineMap g = select_element(spec, o, label);
  json res;
  res["element"] = label;
  res["linear"] = to_json(g.linear);
  res["translation"] = to_json(g.translation);
  const auto prof = profile(g, o.alpha);
  res["split"] = split_json(prof.split);
  res["s"] = prof.s;
  res["norm_plus"] = prof.norm_plus;
  res["norm_minus"] = prof.norm_minus;
  res["eps_hyperbolic"] = prof.eps_hyperbolic;
  res["contracting"] = prof.contracting;
  const auto reg = is_regular(g, spec.ambient);
  res["regular"] = reg.regular;
  res["r_regular"] = reg.r_regular;
  res["hyperbolic"] = reg.regular && prof.contracting;
  try {
    const auto ax = invariant_axis(g, spectral_split(g.linear));
    res["axis"] = {{"base_point", to_json(ax.base_point)}, {"direction", to_json(ax.direction)}};
  } catch (const Error& e) {
    res["axis"] = {{"error", e.what()}};
  }
  r["results"] = res;
  return kOk;
}

int cmd_sign(const Options& o, json& r) {
  const GroupSpec spec = load_group_file(o.input);
  std::string label;
  const AffineMap g = select_element(spec, o, label);
  SignResult s;
  if (spec.form) s = margulis_alpha(g, *spec.form);
  else if (spec.product_split) s = extended_alpha(g, *spec.product_split);
  else throw Error(ErrorKind::InvalidArgument, "sign needs a form or a product split in the group file");
  r["results"] = {{"element", label}, {"alpha", s.alpha}, {"neutral_vector", to_json(s.neutral_vector)}};
  return kOk;
}

int cmd_certify(const Options& o, json& r) {
  const GroupSpec spec = load_group_file(o.input);
  json res;
  res["stages"] = json::array();
  const auto screen = eigenvalue_one_screen(spec, o.max_len);
  res["stages"].push_back({{"stage", "eigenvalue_one_screen"}, {"violations", screen.size()}});
  if (!screen.empty()) {
    r["certificates"].push_back(to_json(screen.front()));
    res["status"] = "certificate";
    r["results"] = res;
    return kOk;
  }
  if (!spec.form && !spec.product_split) {
    res["stages"].push_back({{"stage", "opposite_sign_search"}, {"skipped", "no form or product split"}});
    res["status"] = "not found within budget";
    r["results"] = res;
    return kNotFound;
  }
  SearchOptions so;
  so.max_len = o.max_len;
  so.jobs = o.jobs;
  const auto pair = opposite_sign_search(spec, so);
  res["stages"].push_back({{"stage", "opposite_sign_search"}, {"found", pair.has_value()}});
  if (!pair) {
    res["status"] = "not found within budget";
    r["results"] = res;
    return kNotFound;
  }
  r["certificates"].push_back(to_json(*pair));
  const auto& sp = std::get<OppositeSignPayload>(pair->payload);
  try {
    Certificate w = nonproper_witness(pair->matrices[0], pair->matrices[1], SignData{sp.alpha_g, sp.alpha_h},
                                      o.n_max, o.radius);
    w.words = pair->words;
    w.word_text = pair->word_text;
    const auto& wp = std::get<BallWitnessPayload>(w.payload);
    res["stages"].push_back({{"stage", "nonproper_witness"}, {"verified", wp.entries.size()}});
    r["certificates"].push_back(to_json(w));
  } catch (const Error& e) {
    res["stages"].push_back({{"stage", "nonproper_witness"}, {"error", e.what()}});
  }
  res["status"] = "certificate";
  r["results"] = res;
  return kOk;
}

int cmd_scan(const Options& o, json& r) {
  const GroupSpec spec = load_group_file(o.input);
  const Certificate c = proper_scan(spec, parse_center(o.center, spec.dim), o.radius, o.max_len);
  r["results"] = {{"return_set", c.word_text},
                  {"note", "evidence only; an empty return set does not prove properness"}};
  r["certificates"].push_back(to_json(c));
  return kOk;
}

int cmd_directions(const Options& o, json& r) {
  const GroupSpec spec = load_group_file(o.input);
  const auto d = direction_set_estimate(spec, parse_center(o.center, spec.dim), o.radius, o.max_len);
  json dirs = json::array();
  for (const auto& e : d.directions)
    dirs.push_back({{"direction", to_json(e.direction)}, {"word", e.word.str(spec)}, {"displacement", e.displacement}});
  r["results"] = {{"directions", dirs}};
  return kOk;
}

int cmd_classify(const Options& o, json& r) {
  int dim = o.dim;
  std::string group = o.group;
  if (!o.input.empty()) {
    const GroupSpec spec = load_group_file(o.input);
    if (dim == 0) dim = spec.dim;
    if (group.empty()) group = spec.descriptor;
  }
  if (dim == 0 || group.empty()) throw Error(ErrorKind::InvalidArgument, "classify needs --dim and --group");
  const Verdict v = classification_lookup(dim, group);
  r["results"] = {{"verdict", v.render()}};
  return kOk;
}

int cmd_example(const Options& o) {
  GroupSpec spec;
  if (o.name == "margulis3d") spec = margulis3d_example(o.boost, o.angle, o.scale);
  else if (o.name == "opposite-sign") spec = opposite_sign_example();
  else if (o.name == "product6") spec = product6_example();
  else throw Error(ErrorKind::InvalidArgument, "unknown example '" + o.name + "'");
  const std::string text = write_group_text(spec);
  if (o.output.empty()) std::cout << text;
  else std::ofstream(o.output) << text;
  return kOk;
}

int cmd_check(const Options& o) {
  std::ifstream in(o.input);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open report '" + o.input + "'");
  json rep;
  try {
    in >> rep;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report is not valid JSON: ") + e.what());
  }
  if (rep.value("schema", "") != "afcert-report" || rep.value("version", 0) != kReportVersion)
    throw Error(ErrorKind::ParseError, "unsupported report schema or version");
  const auto& certs = rep.at("certificates");
  if (certs.empty()) {
    std::cout << "no certificates\n";
    return kNotFound;
  }
  bool all = true;
  for (size_t i = 0; i < certs.size(); ++i) {
    const Certificate c = certificate_from_json(certs[i]);
    const auto res = check_certificate(c);
    std::cout << "certificate " << i << " " << kind_name(c.kind) << ": " << (res.ok ? "OK" : "REJECTED");
    if (!res.ok) std::cout << " (" << res.detail << ")";
    std::cout << "\n";
    all = all && res.ok;
  }
  return all ? kOk : kRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine group certificates: spectral splits, Margulis signs, non-properness witnesses"};
  app.require_subcommand(1);
  Options o;
  std::vector<std::string> args(argv, argv + argc);
  args.erase(args.begin());

  auto common = [&](CLI::App* c, bool needs_input = true) {
    auto* in = c->add_option("--input", o.input, "group file (or report for check)");
    if (needs_input) in->required();
    c->add_option("--output", o.output, "write the report here instead of stdout");
    c->add_option("--seed", o.seed, "seed (echoed; all searches are deterministic)");
    c->add_option("--jobs", o.jobs, "threads for word enumeration")->check(CLI::Range(1, 256));
  };
  auto element = [&](CLI::App* c) {
    c->add_option("--element", o.element, "generator name");
    c->add_option("--word", o.word, "word such as \"a b^-1 a\"");
  };

  auto* dec = app.add_subcommand("decompose", "spectral split, hyperbolicity and axis of one element");
  common(dec);
  element(dec);
  dec->add_option("--alpha", o.alpha, "modulus threshold");
  auto* sign = app.add_subcommand("sign", "Margulis sign of one element");
  common(sign);
  element(sign);
  auto* cert = app.add_subcommand("certify", "search for a certificate of non-properness");
  common(cert);
  cert->add_option("--max-word-len", o.max_len)->check(CLI::Range(0, 16));
  cert->add_option("--n-max", o.n_max)->check(CLI::Range(1L, 1000000L));
  cert->add_option("--radius", o.radius)->check(CLI::PositiveNumber);
  auto* scan = app.add_subcommand("scan", "return-set scan on a ball (evidence only)");
  common(scan);
  scan->add_option("--max-word-len", o.max_len)->check(CLI::Range(0, 16));
  scan->add_option("--radius", o.radius)->check(CLI::PositiveNumber);
  scan->add_option("--center", o.center, "comma separated coordinates (default origin)");
  auto* dirs = app.add_subcommand("directions", "sampled displacement directions");
  common(dirs);
  dirs->add_option("--max-word-len", o.max_len)->check(CLI::Range(0, 16));
  dirs->add_option("--radius", o.radius)->check(CLI::PositiveNumber);
  dirs->add_option("--center", o.center, "comma separated coordinates (default origin)");
  auto* cls = app.add_subcommand("classify", "look up a semisimple part in the classification data");
  common(cls, false);
  cls->add_option("--dim", o.dim, "dimension of V");
  cls->add_option("--group", o.group, "descriptor such as \"SO(2,1) x SL3(R)\"");
  auto* ex = app.add_subcommand("example", "print a built-in group file");
  ex->add_option("--name", o.name, "margulis3d, opposite-sign or product6");
  ex->add_option("--boost", o.boost, "margulis3d boost parameter");
  ex->add_option("--angle", o.angle, "margulis3d rotation angle");
  ex->add_option("--scale", o.scale, "margulis3d translation scale");
  ex->add_option("--output", o.output);
  auto* chk = app.add_subcommand("check", "re-verify the certificates of a report");
  chk->add_option("--input,report", o.input, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*ex) return cmd_example(o);
    if (*chk) return cmd_check(o);
    const std::string name = app.get_subcommands().front()->get_name();
    json r = base_report(name, o, args);
    int rc = kOk;
    if (*dec) rc = cmd_decompose(o, r);
    else if (*sign) rc = cmd_sign(o, r);
    else if (*cert) rc = cmd_certify(o, r);
    else if (*scan) rc = cmd_scan(o, r);
    else if (*dirs) rc = cmd_directions(o, r);
    else if (*cls) rc = cmd_classify(o, r);
    r["exit_status"] = rc;
    r["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    emit(r, o);
    return rc;
  } catch (const Error& e) {
    std::cerr << "afcert: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "afcert: " << e.what() << "\n";
    return kInputError;
  }
}
