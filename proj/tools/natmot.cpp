// natmot: describe, pair, and verify toric 1-motives over Q.

#include "natmot/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace natmot;
using namespace natmot::cli;

namespace {

struct InputError {
  std::string path;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path, 0, 0, "cannot read file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedDocument load(const std::string& path) {
  std::string text = read_file(path);
  try {
    LoadedDocument ld{parse_document(text), input_hash(text)};
    if (ld.doc.name.empty()) ld.doc.name = fs::path(path).stem().string();
    return ld;
  } catch (const ParseError& e) {
    throw InputError{path, e.line(), e.column(), e.message()};
  }
}

std::vector<LoadedDocument> load_directory(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".motive") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError{dir, 0, 0, "no .motive files in directory"};
  std::vector<LoadedDocument> docs;
  for (const auto& f : files) docs.push_back(load(f.string()));
  return docs;
}

std::vector<Prime> parse_prime_list(const std::string& list) {
  std::vector<Prime> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long p = 0;
    try {
      p = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || !natmot::detail::is_prime_u64(p))
      throw InputError{"--primes", 0, 0, "`" + item + "` is not a prime"};
    out.push_back(p);
  }
  if (out.empty()) throw InputError{"--primes", 0, 0, "empty prime list"};
  return out;
}

Json envelope(const std::string& command) {
  Json j;
  j["schema"] = kSchema;
  j["tool"] = {{"name", "natmot"}, {"version", NATMOT_VERSION}};
  j["command"] = command;
  j["input"] = nullptr;
  return j;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw InputError{output, 0, 0, "cannot write output file"};
  out << text;
}

std::string location(const InputError& e) {
  std::string s = e.path;
  if (e.line) s += ":" + std::to_string(e.line) + ":" + std::to_string(e.column);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with toric 1-motives over Q"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NATMOT_VERSION);

  std::string input, output, primes;
  std::int64_t bound = 0;
  std::uint64_t seed = 0;
  std::size_t r = 1, d = 1;
  bool json = false, corpus = false;

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", input, "motive document (or a directory of .motive files for verify)");
    if (needs_input) in->required();
    sub->add_option("--output", output, "write the report here instead of stdout");
    sub->add_option("--primes", primes, "comma-separated primes of the window, e.g. 2,3,5");
    sub->add_option("--denominator-bound", bound, "denominator bound N of the window")->check(CLI::PositiveNumber);
    sub->add_flag("--json", json, "machine-readable JSON report");
  };
  auto* describe = app.add_subcommand("describe", "motive, dual, universal extension and de Rham data");
  common(describe, true);
  auto* pairing = app.add_subcommand("pairing", "canonical connection, curvature and the de Rham pairing");
  common(pairing, true);
  auto* extgroups = app.add_subcommand("extgroups", "H, H^nabla, Ext and Ext^nat in a window");
  common(extgroups, true);
  auto* verify = app.add_subcommand("verify", "run every invariant and exact-sequence check");
  common(verify, false);
  verify->add_flag("--corpus", corpus, "verify the bundled corpus");
  auto* random = app.add_subcommand("random", "emit a reproducible random motive document");
  common(random, false);
  random->add_option("--seed", seed, "generator seed");
  random->add_option("--r", r, "lattice rank");
  random->add_option("--d", d, "torus rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParseError;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Json report = envelope(command);
  try {
    Options opt;
    if (!primes.empty()) opt.primes = parse_prime_list(primes);
    if (bound > 0) opt.denominatorBound = Integer(bound);
    opt.seed = seed;
    opt.r = r;
    opt.d = d;

    CommandResult res;
    if (command == "random") {
      res = cmd_random(opt);
    } else if (command == "verify") {
      if (corpus && !input.empty()) throw InputError{"--corpus", 0, 0, "give either --corpus or --input"};
      if (!corpus && input.empty()) throw InputError{"verify", 0, 0, "needs --input PATH or --corpus"};
      std::string path = corpus ? std::string(NATMOT_CORPUS_DIR) : input;
      auto docs = fs::is_directory(path) ? load_directory(path) : std::vector<LoadedDocument>{load(path)};
      std::string all;
      for (const auto& ld : docs) all += ld.hash;
      report["input"] = {{"name", corpus ? "corpus" : docs.size() == 1 ? docs[0].doc.name : fs::path(path).filename().string()},
                         {"hash", docs.size() == 1 ? docs[0].hash : input_hash(all)}};
      res = cmd_verify(docs, opt);
    } else {
      auto ld = load(input);
      report["input"] = {{"name", ld.doc.name}, {"hash", ld.hash}};
      if (command == "describe") res = cmd_describe(ld.doc);
      if (command == "pairing") res = cmd_pairing(ld.doc);
      if (command == "extgroups") res = cmd_extgroups(ld.doc, opt);
    }
    report["notices"] = res.notices;
    report["status"] = res.ok ? "ok" : "failure";
    report["result"] = res.result;
    for (const auto& n : res.notices) std::cerr << "notice: " << n << "\n";
    if (json)
      emit(report.dump(2) + "\n", output);
    else
      emit(res.text, output);
    return res.ok ? kExitOk : kExitVerificationFailure;
  } catch (const InputError& e) {
    std::cerr << location(e) << ": error: " << e.message << "\n";
    if (json) {
      report["status"] = "error";
      report["error"] = {{"path", e.path}, {"line", e.line}, {"column", e.column}, {"message", e.message}};
      std::cout << report.dump(2) << "\n";
    }
    return kExitParseError;
  } catch (const StructuralError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}
