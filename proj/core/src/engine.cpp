#include "strata/engine.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace strata {

namespace {

uint64_t fnv1a(const void* data, size_t n, uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t hash_config(const CatalogFunction& f, const Vec& x1, const StepSchedule& s, int64_t K,
                     bool project) {
  uint64_t h = 1469598103934665603ULL;
  h = fnv1a(f.name().data(), f.name().size(), h);
  h = fnv1a(x1.data(), sizeof(double) * static_cast<size_t>(x1.size()), h);
  const int kind = static_cast<int>(s.kind);
  h = fnv1a(&kind, sizeof(kind), h);
  h = fnv1a(&s.gamma, sizeof(double), h);
  h = fnv1a(&s.c, sizeof(double), h);
  if (!s.values.empty()) h = fnv1a(s.values.data(), sizeof(double) * s.values.size(), h);
  h = fnv1a(&K, sizeof(K), h);
  h = fnv1a(&project, sizeof(project), h);
  return h;
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

Trajectory run(const CatalogFunction& f, const Vec& x1, const StepSchedule& schedule, int64_t K,
               bool project_to_box) {
  if (K < 1) throw ConfigError("run requires K >= 1");
  const Box& box = f.stratification().domain();
  if (!box.contains(x1)) throw ConfigError("start point outside the domain box");

  Trajectory t;
  t.function_name = f.name();
  t.config_hash = hash_config(f, x1, schedule, K, project_to_box);
  t.iterates.reserve(static_cast<size_t>(K) + 1);
  t.subgradients.reserve(static_cast<size_t>(K));
  t.steps.reserve(static_cast<size_t>(K));

  Vec x = x1;
  t.iterates.push_back(x);
  for (int64_t k = 1; k <= K; ++k) {
    const double gamma = schedule.gamma_at(k);
    const Vec v = f.subgradient(x);
    Vec next = x - gamma * v;
    if (project_to_box) next = box.clamp(next);
    t.subgradients.push_back(v);
    t.steps.push_back(gamma);
    t.iterates.push_back(next);
    if (!box.contains(next)) {
      t.escaped_domain = true;
      break;
    }
    x = next;
  }
  return t;
}

std::string trajectory_to_csv(const Trajectory& t) {
  const int d = t.dim();
  std::string out = "k";
  for (int i = 1; i <= d; ++i) out += ",x_" + std::to_string(i);
  for (int i = 1; i <= d; ++i) out += ",v_" + std::to_string(i);
  out += ",gamma\n";
  const int64_t K = t.K();
  for (int64_t k = 1; k <= K + 1; ++k) {
    out += std::to_string(k);
    const Vec& x = t.x(k);
    for (int i = 0; i < d; ++i) {
      out += ',';
      append_double(out, x[i]);
    }
    if (k <= K) {
      const Vec& v = t.v(k);
      for (int i = 0; i < d; ++i) {
        out += ',';
        append_double(out, v[i]);
      }
      out += ',';
      append_double(out, t.gamma(k));
    } else {
      for (int i = 0; i < d + 1; ++i) out += ',';
    }
    out += '\n';
  }
  return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory csv: empty file");
  // Header determines d: k, x_1..x_d, v_1..v_d, gamma
  int cols = 1;
  for (char ch : line) {
    if (ch == ',') ++cols;
  }
  if (cols < 4 || (cols - 2) % 2 != 0) throw ParseError("trajectory csv: malformed header");
  const int d = (cols - 2) / 2;

  Trajectory t;
  std::vector<std::string> fields;
  int64_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    fields.clear();
    size_t pos = 0;
    while (true) {
      const size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (static_cast<int>(fields.size()) != cols) {
      throw ParseError("trajectory csv: wrong field count at row " + std::to_string(row));
    }
    auto parse = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') {
        throw ParseError("trajectory csv: bad number '" + s + "' at row " + std::to_string(row));
      }
      return v;
    };
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = parse(fields[static_cast<size_t>(1 + i)]);
    t.iterates.push_back(std::move(x));
    const bool tail = fields[static_cast<size_t>(1 + d)].empty();
    if (!tail) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = parse(fields[static_cast<size_t>(1 + d + i)]);
      t.subgradients.push_back(std::move(v));
      t.steps.push_back(parse(fields.back()));
    } else {
      for (int i = 0; i < d + 1; ++i) {
        if (!fields[static_cast<size_t>(1 + d + i)].empty()) {
          throw ParseError("trajectory csv: final row must leave v and gamma empty");
        }
      }
    }
  }
  if (t.iterates.size() != t.subgradients.size() + 1) {
    throw ParseError("trajectory csv: expected exactly one trailing iterate row");
  }
  if (t.iterates.empty()) throw ParseError("trajectory csv: no rows");
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace strata
