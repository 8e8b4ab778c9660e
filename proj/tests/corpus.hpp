#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace corpus {

struct Entry {
  std::string input;
  std::string verb;
  std::vector<std::string> args;
  int exit = 0;
};

struct Outcome {
  int exit = -1;
  std::string out;
};

inline std::string dir() { return LOGCONNECT_CORPUS_DIR; }

inline std::vector<Entry> manifest() {
  std::ifstream in(dir() + "/manifest.json");
  const auto j = nlohmann::json::parse(in);
  std::vector<Entry> out;
  for (const auto& e : j) {
    Entry x{e["input"], e["verb"], {}, e["exit"]};
    for (const auto& a : e["args"]) {
      std::string s = a;
      if (!s.empty() && s[0] == '@') s = dir() + "/" + s.substr(1);
      x.args.push_back(s);
    }
    out.push_back(std::move(x));
  }
  return out;
}

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

/// Runs the CLI binary with stderr discarded and captures stdout.
inline Outcome run(const std::vector<std::string>& argv) {
  std::string cmd = quote(LOGCONNECT_BINARY);
  for (const auto& a : argv) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

inline Outcome run(const Entry& e) {
  std::vector<std::string> argv{e.verb, dir() + "/" + e.input};
  argv.insert(argv.end(), e.args.begin(), e.args.end());
  return run(argv);
}

}  // namespace corpus
