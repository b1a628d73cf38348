#include "equispec/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "equispec/expression.hpp"

namespace equispec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidInput("expected a number for " + what + ", got '" + s + "'");
}

long long to_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidInput("expected an integer for " + what + ", got '" + s + "'");
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

ScalarField field_from(const std::string& text) {
  if (is_number(text)) {
    const double c = std::stod(text);
    return [c](const Vec3&) { return c; };
  }
  const Expression e = Expression::parse(text);
  return [e](const Vec3& p) { return e.eval(p.x(), p.y(), p.z()); };
}

}  // namespace

SurfaceMesh read_mesh(std::istream& in) {
  SurfaceMesh m;
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<std::pair<int, Metric2>> metrics;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    auto bad = [&](const std::string& why) {
      return InvalidInput("mesh line " + std::to_string(lineno) + ": " + why);
    };
    if (!header) {
      int version = 0;
      if (kw != "equimesh" || !(ls >> version) || version != 1) throw bad("expected header 'equimesh 1'");
      header = true;
      continue;
    }
    if (kw == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw bad("vertex needs three coordinates");
      m.vertices.emplace_back(x, y, z);
    } else if (kw == "t") {
      int a, b, c;
      if (!(ls >> a >> b >> c)) throw bad("triangle needs three indices");
      m.triangles.push_back({a, b, c});
    } else if (kw == "b") {
      int a, b;
      std::string tag;
      if (!(ls >> a >> b >> tag) || tag.size() != 1) throw bad("boundary edge needs two indices and a tag");
      m.boundary_edges.push_back({{a, b}, tag_from_letter(tag[0])});
    } else if (kw == "chart") {
      std::string name;
      if (!(ls >> name)) throw bad("chart needs a name");
      Chart c = Chart::from_name(name);
      double a, h, s;
      if (ls >> a >> h >> s) {
        c.a = a;
        c.h = h;
        c.s = s;
      }
      m.chart = c;
    } else if (kw == "g") {
      int t;
      double g11, g12, g22;
      if (!(ls >> t >> g11 >> g12 >> g22)) throw bad("metric line needs a triangle and three entries");
      Metric2 g;
      g << g11, g12, g12, g22;
      metrics.emplace_back(t, g);
    } else {
      throw bad("unknown record '" + kw + "'");
    }
  }
  if (!header) throw InvalidInput("empty mesh file");
  if (!metrics.empty()) {
    m.metric_override.assign(m.triangles.size(), Metric2::Zero());
    std::vector<char> seen(m.triangles.size(), 0);
    for (const auto& [t, g] : metrics) {
      if (t < 0 || t >= m.triangle_count()) throw InvalidInput("metric line references missing triangle");
      m.metric_override[t] = g;
      seen[t] = 1;
    }
    for (char s : seen)
      if (!s) throw InvalidInput("metric override must be given for every triangle");
  }
  validate(m);
  return m;
}

SurfaceMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const SurfaceMesh& m) {
  out << "equimesh 1\n" << std::setprecision(17);
  if (m.chart) {
    out << "chart " << m.chart->name();
    if (m.chart->kind == Chart::Kind::Catenoid || m.chart->kind == Chart::Kind::CatenoidPair)
      out << ' ' << m.chart->a << ' ' << m.chart->h << ' ' << m.chart->s;
    out << '\n';
  }
  for (const auto& v : m.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : m.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : m.boundary_edges) out << "b " << e.v[0] << ' ' << e.v[1] << ' ' << tag_letter(e.tag) << '\n';
  for (size_t t = 0; t < m.metric_override.size(); ++t) {
    const auto& g = m.metric_override[t];
    out << "g " << t << ' ' << g(0, 0) << ' ' << g(0, 1) << ' ' << g(1, 1) << '\n';
  }
}

void save_mesh(const std::string& path, const SurfaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write mesh file " + path);
  write_mesh(out, mesh);
}

Partition read_partition(std::istream& in) {
  std::map<long long, std::vector<int>> pieces;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    std::istringstream head(line.substr(0, colon));
    std::string kw, id;
    head >> kw >> id;
    if (colon == std::string::npos || kw != "piece" || id.empty())
      throw InvalidInput("partition line " + std::to_string(lineno) + ": expected 'piece <id>: <triangles>'");
    const long long key = to_int(id, "piece id");
    if (pieces.count(key)) throw InvalidInput("partition piece " + id + " listed twice");
    auto& tris = pieces[key];
    std::string body = line.substr(colon + 1);
    for (char& c : body)
      if (c == ',') c = ' ';
    std::istringstream ls(body);
    std::string tok;
    while (ls >> tok) {
      const auto dash = tok.find('-', 1);
      if (dash == std::string::npos) {
        tris.push_back(static_cast<int>(to_int(tok, "triangle index")));
      } else {
        const long long a = to_int(tok.substr(0, dash), "range start");
        const long long b = to_int(tok.substr(dash + 1), "range end");
        if (b < a) throw InvalidInput("descending triangle range " + tok);
        for (long long t = a; t <= b; ++t) tris.push_back(static_cast<int>(t));
      }
    }
  }
  Partition p;
  for (auto& [id, tris] : pieces) p.pieces.push_back(std::move(tris));
  return p;
}

Partition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open partition file " + path);
  return read_partition(in);
}

std::vector<int> parse_twist_table(const std::string& text) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw InvalidInput("twist table must look like [+1,-1,...]");
  s = s.substr(1, s.size() - 2);
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream ls(s);
  std::vector<int> out;
  std::string tok;
  while (ls >> tok) {
    const long long v = to_int(tok, "twist entry");
    if (v != 1 && v != -1) throw InvalidInput("twist entries must be +1 or -1");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string ProblemConfig::canonical() const {
  std::map<std::string, std::string> kv;
  if (builtin) kv["builtin"] = *builtin;
  if (mesh_path) kv["mesh"] = *mesh_path;
  kv["level"] = std::to_string(level);
  for (const auto& [k, v] : params) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    kv["param." + k] = s.str();
  }
  if (potential) kv["potential"] = *potential;
  if (robin) kv["robin"] = *robin;
  if (robin_top) kv["robin_top"] = "true";
  if (conformal) kv["conformal"] = *conformal;
  for (size_t i = 0; i < tags.size(); ++i)
    kv["tag." + std::to_string(i)] = std::string(1, tag_letter(tags[i].first)) + ":" + tags[i].second;
  if (group) kv["group"] = *group;
  if (twist) kv["twist"] = *twist;
  if (strategy) kv["strategy"] = *strategy;
  if (count) kv["count"] = std::to_string(*count);
  if (zero_tol) {
    std::ostringstream s;
    s << std::setprecision(17) << *zero_tol;
    kv["zero_tol"] = s.str();
  }
  if (seed) kv["seed"] = std::to_string(*seed);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_entries(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

void apply_config_entry(ProblemConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& base_dir) {
  if (key == "builtin") cfg.builtin = value;
  else if (key == "mesh") {
    std::filesystem::path p(value);
    cfg.mesh_path = p.is_absolute() ? value : (std::filesystem::path(base_dir) / p).string();
  } else if (key == "level") cfg.level = static_cast<int>(to_int(value, key));
  else if (key.rfind("param.", 0) == 0) cfg.params[key.substr(6)] = to_double(value, key);
  else if (key == "potential") cfg.potential = value;
  else if (key == "robin") cfg.robin = value;
  else if (key == "robin_top") {
    if (value != "true" && value != "false") throw InvalidInput("robin_top must be true or false");
    cfg.robin_top = value == "true";
  } else if (key == "conformal") cfg.conformal = value;
  else if (key == "dirichlet") cfg.tags.emplace_back(BoundaryTag::Dirichlet, value);
  else if (key == "neumann") cfg.tags.emplace_back(BoundaryTag::Neumann, value);
  else if (key == "robin_edges") cfg.tags.emplace_back(BoundaryTag::Robin, value);
  else if (key == "group") cfg.group = value;
  else if (key == "twist") cfg.twist = value;
  else if (key == "strategy") cfg.strategy = value;
  else if (key == "count") cfg.count = static_cast<int>(to_int(value, key));
  else if (key == "zero_tol") cfg.zero_tol = to_double(value, key);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
  else throw InvalidInput("unknown config key '" + key + "'");
}

ProblemConfig parse_problem_config(const std::string& text, const std::string& base_dir) {
  ProblemConfig cfg;
  for (const auto& [key, value] : parse_config_entries(text)) apply_config_entry(cfg, key, value, base_dir);
  if (cfg.builtin && cfg.mesh_path) throw InvalidInput("config names both a builtin domain and a mesh file");
  if (cfg.level < 0) throw InvalidInput("level must be >= 0");
  if (cfg.count && *cfg.count < 1) throw InvalidInput("count must be positive");
  if (cfg.zero_tol && !(*cfg.zero_tol > 0.0)) throw InvalidInput("zero_tol must be positive");
  return cfg;
}

ProblemConfig load_problem_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

ProblemSpec build_problem(const ProblemConfig& cfg) {
  SurfaceMesh mesh;
  std::string name;
  if (cfg.builtin) {
    mesh = build_builtin(domain_from_name(*cfg.builtin), cfg.level, cfg.params);
    name = *cfg.builtin;
  } else if (cfg.mesh_path) {
    mesh = load_mesh(*cfg.mesh_path);
    for (int l = 0; l < cfg.level; ++l) mesh = refine(mesh);
    name = *cfg.mesh_path;
  } else {
    throw InvalidInput("config needs a builtin domain or a mesh file");
  }
  ProblemSpec p = make_problem(std::move(mesh), cfg.level, name);
  for (const auto& [tag, pred] : cfg.tags) {
    const Expression e = Expression::parse(pred);
    tag_boundary(p, [&](const Vec3& m) { return e.eval(m.x(), m.y(), m.z()) != 0.0; }, tag);
  }
  if (cfg.potential) {
    if (*cfg.potential == "jacobi") {
      if (!p.mesh.chart) throw InvalidInput("jacobi potential needs a chart");
      set_potential(p, jacobi_potential(*p.mesh.chart));
    } else {
      set_potential(p, field_from(*cfg.potential));
    }
  }
  if (cfg.robin_top) tag_robin_top(p);
  if (cfg.robin) set_robin(p, field_from(*cfg.robin));
  if (cfg.conformal) {
    const ScalarField rho = field_from(*cfg.conformal);
    std::vector<double> samples(p.vertex_count());
    for (int v = 0; v < p.vertex_count(); ++v) samples[v] = rho(p.mesh.vertices[v]);
    p = apply_conformal_change(p, samples);
  }
  validate(p);
  return p;
}

GroupAction build_group(const std::string& group_spec, const std::string& twist, const SurfaceMesh& mesh) {
  GroupAction g = act_on_mesh(parse_group(group_spec), mesh);
  const std::string t = trim(twist);
  if (t.empty() || t == "trivial") return g;
  if (!t.empty() && t.front() == '[') return with_twist(g, TwistKind::Explicit, &mesh, parse_twist_table(t));
  return with_twist(g, twist_kind_from_name(t), &mesh);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace equispec
