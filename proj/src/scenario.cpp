#include "rbbr/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rbbr {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Line tracking. nlohmann/json does not report positions of values, so the
// document is scanned once more through a SAX handler fed by an iterator that
// counts newlines; each JSON pointer is mapped to the line of its last token
// character.

struct LineState {
  int line = 1;
  int token_line = 1;

  void consume(char c) {
    if (c == '\n') ++line;
    else if (!std::isspace(static_cast<unsigned char>(c))) token_line = line;
  }
};

class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, LineState* state) : p_(p), state_(state) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    state_->consume(*p_);
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  LineState* state_;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class LocatingSax {
 public:
  LocatingSax(const LineState* state, std::map<std::string, int>* lines) : state_(state), lines_(lines) {}

  bool null() { return value(); }
  bool boolean(bool) { return value(); }
  bool number_integer(json::number_integer_t) { return value(); }
  bool number_unsigned(json::number_unsigned_t) { return value(); }
  bool number_float(json::number_float_t, const std::string&) { return value(); }
  bool string(std::string&) { return value(); }
  bool binary(json::binary_t&) { return value(); }

  bool start_object(std::size_t) { return open(false); }
  bool start_array(std::size_t) { return open(true); }
  bool key(std::string& k) {
    frames_.back().key = k;
    return true;
  }
  bool end_object() { return close(); }
  bool end_array() { return close(); }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) { return false; }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  std::string here() const {
    std::string p;
    for (const Frame& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : escape_token(f.key));
    return p;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool value() {
    (*lines_)[here()] = state_->token_line;
    advance();
    return true;
  }
  bool open(bool array) {
    (*lines_)[here()] = state_->token_line;
    frames_.push_back({array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }

  const LineState* state_;
  std::map<std::string, int>* lines_;
  std::vector<Frame> frames_;
};

// ---------------------------------------------------------------------------

class Document {
 public:
  Document(const std::string& text, std::string source) : source_(std::move(source)) {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Config, source_ + ": invalid JSON: " + e.what());
    }
    LineState state;
    LocatingSax sax(&state, &lines_);
    const char* begin = text.data();
    json::sax_parse(CountingIterator(begin, &state), CountingIterator(begin + text.size(), &state), &sax);
  }

  json& root() { return root_; }

  int line_of(std::string pointer) const {
    for (;;) {
      if (auto it = lines_.find(pointer); it != lines_.end()) return it->second;
      if (pointer.empty()) return 1;
      pointer.erase(pointer.rfind('/'));
    }
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw Error(ErrorKind::Config, source_ + ":" + std::to_string(line_of(pointer)) + ": " +
                                       (pointer.empty() ? "/" : pointer) + ": " + message);
  }

  void expect_object(const json& node, const std::string& ptr, const std::set<std::string>& allowed) const {
    if (!node.is_object()) fail(ptr, "expected an object");
    for (const auto& [k, _] : node.items())
      if (!allowed.count(k)) fail(ptr + "/" + escape_token(k), "unknown key '" + k + "'");
  }

  const json* find(const json& node, const std::string& key) const {
    const auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
  }

  const json& require(const json& node, const std::string& ptr, const std::string& key) const {
    const json* child = find(node, key);
    if (!child) fail(ptr, "missing required key '" + key + "'");
    return *child;
  }

  double number(const json& node, const std::string& ptr) const {
    if (!node.is_number()) fail(ptr, "expected a number");
    const double x = node.get<double>();
    if (!std::isfinite(x)) fail(ptr, "number must be finite");
    return x;
  }

  double positive(const json& node, const std::string& ptr) const {
    const double x = number(node, ptr);
    if (!(x > 0.0)) fail(ptr, "expected a positive number");
    return x;
  }

  std::uint64_t unsigned_integer(const json& node, const std::string& ptr) const {
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0))
      fail(ptr, "expected a nonnegative integer");
    return node.get<std::uint64_t>();
  }

  std::string text(const json& node, const std::string& ptr) const {
    if (!node.is_string()) fail(ptr, "expected a string");
    return node.get<std::string>();
  }

  Vec vector(const json& node, const std::string& ptr, std::optional<std::size_t> length = std::nullopt) const {
    if (!node.is_array()) fail(ptr, "expected an array of numbers");
    if (length && node.size() != *length)
      fail(ptr, "expected " + std::to_string(*length) + " entries, got " + std::to_string(node.size()));
    if (node.empty()) fail(ptr, "array must not be empty");
    Vec v(static_cast<Eigen::Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(node[i], ptr + "/" + std::to_string(i));
    return v;
  }

  Mat matrix(const json& node, const std::string& ptr, std::optional<std::size_t> rows,
             std::optional<std::size_t> cols) const {
    if (!node.is_array() || node.empty()) fail(ptr, "expected a non-empty array of rows");
    if (rows && node.size() != *rows)
      fail(ptr, "expected " + std::to_string(*rows) + " rows, got " + std::to_string(node.size()));
    const std::size_t width = cols ? *cols : (node[0].is_array() ? node[0].size() : 0);
    Mat m(static_cast<Eigen::Index>(node.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < node.size(); ++i)
      m.row(static_cast<Eigen::Index>(i)) = vector(node[i], ptr + "/" + std::to_string(i), width).transpose();
    return m;
  }

 private:
  std::string source_;
  json root_;
  std::map<std::string, int> lines_;
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string fnv1a64_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

struct GamePart {
  Game game;
  std::size_t types;
};

GamePart load_game(const Document& doc, const json& node, std::optional<std::size_t> type_count) {
  const std::string ptr = "/game";
  if (!node.is_object()) doc.fail(ptr, "expected an object");
  const std::string kind = lower(doc.text(doc.require(node, ptr, "kind"), ptr + "/kind"));
  const json* potential = doc.find(node, "potential");
  const std::string potential_name = potential ? doc.text(*potential, ptr + "/potential") : "";

  if (kind == "matrix") {
    doc.expect_object(node, ptr, {"kind", "matrix", "matrices", "potential"});
    const json* common = doc.find(node, "matrix");
    const json* per_type = doc.find(node, "matrices");
    if ((common != nullptr) == (per_type != nullptr)) doc.fail(ptr, "give exactly one of 'matrix' or 'matrices'");
    std::vector<Mat> mats;
    if (common) {
      const Mat a = doc.matrix(*common, ptr + "/matrix", std::nullopt, std::nullopt);
      if (a.rows() != a.cols()) doc.fail(ptr + "/matrix", "payoff matrix must be square");
      mats.assign(type_count.value_or(1), a);
    } else {
      if (!per_type->is_array() || per_type->empty()) doc.fail(ptr + "/matrices", "expected a non-empty array of matrices");
      if (type_count && per_type->size() != *type_count)
        doc.fail(ptr + "/matrices", "expected one matrix per type (" + std::to_string(*type_count) + "), got " +
                                        std::to_string(per_type->size()));
      std::optional<std::size_t> n;
      for (std::size_t k = 0; k < per_type->size(); ++k) {
        const std::string p = ptr + "/matrices/" + std::to_string(k);
        const Mat a = doc.matrix((*per_type)[k], p, n, n);
        if (a.rows() != a.cols()) doc.fail(p, "payoff matrix must be square");
        n = static_cast<std::size_t>(a.rows());
        mats.push_back(a);
      }
    }
    const std::size_t k = mats.size();
    Game game = Game::matrix(mats);
    if (!potential_name.empty()) {
      if (potential_name != "quadratic") doc.fail(ptr + "/potential", "matrix games support potential 'quadratic'");
      const auto a = game.common_matrix();
      if (!a) doc.fail(ptr + "/potential", "the quadratic potential needs one common matrix");
      game = game.with_potential(quadratic_potential(*a), "quadratic");
    }
    return {game, k};
  }
  if (kind == "congestion") {
    doc.expect_object(node, ptr, {"kind", "base", "slope", "potential"});
    const Mat base = doc.matrix(doc.require(node, ptr, "base"), ptr + "/base", type_count, std::nullopt);
    const double slope = doc.number(doc.require(node, ptr, "slope"), ptr + "/slope");
    if (slope < 0.0) doc.fail(ptr + "/slope", "slope must be >= 0");
    Game game = Game::congestion(base, slope);
    if (!potential_name.empty()) {
      if (potential_name != "congestion") doc.fail(ptr + "/potential", "congestion games support potential 'congestion'");
      game = game.with_potential(congestion_potential(base, slope), "congestion");
    }
    return {game, static_cast<std::size_t>(base.rows())};
  }
  doc.fail(ptr + "/kind", "unknown game kind '" + kind + "' (expected matrix or congestion)");
}

Regularizer load_regularizer(const Document& doc, const json* node) {
  if (!node) return Regularizer::shannon();
  const std::string ptr = "/regularizer";
  doc.expect_object(*node, ptr, {"kind", "q"});
  const std::string kind = lower(doc.text(doc.require(*node, ptr, "kind"), ptr + "/kind"));
  if (kind == "shannon") return Regularizer::shannon();
  if (kind == "burg") return Regularizer::burg();
  if (kind == "tsallis") {
    const double q = doc.number(doc.require(*node, ptr, "q"), ptr + "/q");
    if (!(q > 0.0 && q < 1.0)) doc.fail(ptr + "/q", "Tsallis q must lie in (0,1)");
    return Regularizer::tsallis(q);
  }
  doc.fail(ptr + "/kind", "unknown regularizer '" + kind + "' (expected shannon, tsallis or burg)");
}

IntegratorConfig load_integrator(const Document& doc, const json* node) {
  IntegratorConfig cfg;
  if (!node) return cfg;
  const std::string ptr = "/integrator";
  doc.expect_object(*node, ptr, {"method", "dt", "horizon", "record_every"});
  if (const json* m = doc.find(*node, "method")) {
    const std::string method = lower(doc.text(*m, ptr + "/method"));
    if (method == "euler") cfg.method = Method::Euler;
    else if (method == "rk4") cfg.method = Method::RK4;
    else doc.fail(ptr + "/method", "unknown method '" + method + "' (expected euler or rk4)");
  }
  if (const json* x = doc.find(*node, "dt")) cfg.dt = doc.positive(*x, ptr + "/dt");
  if (const json* x = doc.find(*node, "horizon")) cfg.horizon = doc.positive(*x, ptr + "/horizon");
  if (const json* x = doc.find(*node, "record_every")) cfg.record_every = doc.unsigned_integer(*x, ptr + "/record_every");
  try {
    cfg.validate();
  } catch (const Error& e) {
    doc.fail(ptr, e.what());
  }
  return cfg;
}

SolverConfig load_solver(const Document& doc, const json* node) {
  SolverConfig cfg;
  if (!node) return cfg;
  const std::string ptr = "/solver";
  doc.expect_object(*node, ptr, {"damping", "tol", "max_iter", "adaptive", "newton_fallback", "newton_after"});
  if (const json* x = doc.find(*node, "damping")) cfg.damping = doc.positive(*x, ptr + "/damping");
  if (const json* x = doc.find(*node, "tol")) cfg.tol = doc.positive(*x, ptr + "/tol");
  if (const json* x = doc.find(*node, "max_iter")) cfg.max_iter = doc.unsigned_integer(*x, ptr + "/max_iter");
  if (const json* x = doc.find(*node, "adaptive")) {
    if (!x->is_boolean()) doc.fail(ptr + "/adaptive", "expected true or false");
    cfg.adaptive = x->get<bool>();
  }
  if (const json* x = doc.find(*node, "newton_fallback")) {
    if (!x->is_boolean()) doc.fail(ptr + "/newton_fallback", "expected true or false");
    cfg.newton_fallback = x->get<bool>();
  }
  if (const json* x = doc.find(*node, "newton_after")) cfg.newton_after = doc.unsigned_integer(*x, ptr + "/newton_after");
  try {
    cfg.validate();
  } catch (const Error& e) {
    doc.fail(ptr, e.what());
  }
  return cfg;
}

InitialCondition load_initial(const Document& doc, const json* node, std::size_t k, std::size_t n) {
  if (!node) return SeededStart{};
  const std::string ptr = "/initial";
  doc.expect_object(*node, ptr, {"kind", "index", "rows"});
  const std::string kind = lower(doc.text(doc.require(*node, ptr, "kind"), ptr + "/kind"));
  if (kind == "seed") return SeededStart{};
  if (kind == "uniform") return UniformStart{};
  if (kind == "vertex") {
    const std::size_t idx = doc.unsigned_integer(doc.require(*node, ptr, "index"), ptr + "/index");
    if (idx >= n) doc.fail(ptr + "/index", "vertex index out of range");
    return VertexStart{idx};
  }
  if (kind == "rows") {
    const Mat rows = doc.matrix(doc.require(*node, ptr, "rows"), ptr + "/rows", k, n);
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
      if (!is_simplex_point(rows.row(i).transpose()))
        doc.fail(ptr + "/rows/" + std::to_string(i), "row is not a probability vector (sum 1 within 1e-12)");
    return ExplicitStart{rows};
  }
  doc.fail(ptr + "/kind", "unknown initial kind '" + kind + "' (expected seed, uniform, vertex or rows)");
}

OutputNames load_outputs(const Document& doc, const json* node) {
  OutputNames out;
  if (!node) return out;
  const std::string ptr = "/outputs";
  doc.expect_object(*node, ptr, {"simulate", "equilibrium", "equilibria", "check", "sweep"});
  auto name = [&](const char* key, std::string& dst) {
    if (const json* x = doc.find(*node, key)) {
      dst = doc.text(*x, ptr + "/" + key);
      if (dst.empty() || dst.find('/') != std::string::npos || dst.find('\\') != std::string::npos)
        doc.fail(ptr + "/" + key, "output names must be plain file names");
    }
  };
  name("simulate", out.simulate);
  name("equilibrium", out.equilibrium);
  name("equilibria", out.equilibria);
  name("check", out.check);
  name("sweep", out.sweep);
  return out;
}

}  // namespace

InitialCondition parse_initial(const std::string& text) {
  const std::string t = lower(text);
  if (t == "seed") return SeededStart{};
  if (t == "uniform") return UniformStart{};
  if (t.rfind("vertex:", 0) == 0) {
    try {
      std::size_t pos = 0;
      const unsigned long k = std::stoul(t.substr(7), &pos);
      if (pos == t.size() - 7) return VertexStart{static_cast<std::size_t>(k)};
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::Config, "initial condition must be seed, uniform or vertex:<k>, got '" + text + "'");
}

std::string Scenario::digest() const { return fnv1a64_hex(canonical); }

void Scenario::set_seed(std::uint64_t new_seed) {
  seed = new_seed;
  json doc = json::parse(canonical);
  doc["seed"] = new_seed;
  canonical = doc.dump();
}

BayesianStrategy Scenario::initial_strategy(const InitialCondition& init) const {
  const std::size_t k = types.size();
  const std::size_t n = game.strategies();
  return std::visit(
      [&](const auto& c) -> BayesianStrategy {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SeededStart>) {
          return random_strategy(types, n, seed);
        } else if constexpr (std::is_same_v<T, UniformStart>) {
          return BayesianStrategy::uniform(k, n);
        } else if constexpr (std::is_same_v<T, VertexStart>) {
          if (c.index >= n) throw Error(ErrorKind::Config, "vertex index out of range");
          return BayesianStrategy::constant(k, SimplexPoint::vertex(n, c.index));
        } else {
          if (static_cast<std::size_t>(c.rows.rows()) != k || static_cast<std::size_t>(c.rows.cols()) != n)
            throw Error(ErrorKind::Config, "explicit initial rows have the wrong shape");
          return BayesianStrategy(c.rows);
        }
      },
      init);
}

Scenario load_scenario_string(const std::string& text, const std::string& source) {
  Document doc(text, source);
  json& root = doc.root();
  doc.expect_object(root, "", {"name", "description", "types", "game", "regularizer", "epsilon", "integrator",
                               "solver", "seed", "initial", "starts", "sweep", "outputs"});

  std::string name = "scenario";
  if (const json* x = doc.find(root, "name")) name = doc.text(*x, "/name");
  if (const json* x = doc.find(root, "description")) doc.text(*x, "/description");

  // Type weights first: they fix K for the game section.
  const json* types_node = doc.find(root, "types");
  std::optional<Vec> weights;
  if (types_node) {
    doc.expect_object(*types_node, "/types", {"weights", "metric"});
    if (const json* w = doc.find(*types_node, "weights")) weights = doc.vector(*w, "/types/weights");
  }
  std::optional<std::size_t> k_hint;
  if (weights) k_hint = static_cast<std::size_t>(weights->size());

  GamePart gp = load_game(doc, doc.require(root, "", "game"), k_hint);
  const std::size_t k = gp.types;
  const std::size_t n = gp.game.strategies();
  if (n < 2) doc.fail("/game", "games need at least two strategies");

  std::optional<Mat> metric;
  if (types_node) {
    if (const json* m = doc.find(*types_node, "metric")) {
      if (m->is_string()) {
        if (doc.text(*m, "/types/metric") != "operator_norm")
          doc.fail("/types/metric", "metric must be a K x K matrix or \"operator_norm\"");
        if (gp.game.kind() != Game::Kind::Matrix)
          doc.fail("/types/metric", "\"operator_norm\" needs a matrix game");
        metric = operator_norm_metric(gp.game);
      } else {
        metric = doc.matrix(*m, "/types/metric", k, k);
      }
    }
  }
  std::optional<TypeSpace> types;
  try {
    types.emplace(weights ? *weights : Vec::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k)),
                  metric);
  } catch (const Error& e) {
    doc.fail("/types", e.what());
  }

  const Regularizer reg = load_regularizer(doc, doc.find(root, "regularizer"));
  const double epsilon = doc.positive(doc.require(root, "", "epsilon"), "/epsilon");
  const IntegratorConfig integrator = load_integrator(doc, doc.find(root, "integrator"));
  const SolverConfig solver = load_solver(doc, doc.find(root, "solver"));
  std::uint64_t seed = 0;
  if (const json* x = doc.find(root, "seed")) seed = doc.unsigned_integer(*x, "/seed");
  const InitialCondition initial = load_initial(doc, doc.find(root, "initial"), k, n);
  std::size_t starts = 10;
  if (const json* x = doc.find(root, "starts")) {
    starts = doc.unsigned_integer(*x, "/starts");
    if (starts == 0) doc.fail("/starts", "starts must be at least 1");
  }
  std::vector<double> sweep;
  if (const json* x = doc.find(root, "sweep")) {
    const Vec e = doc.vector(*x, "/sweep");
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      if (!(e(i) > 0.0)) doc.fail("/sweep/" + std::to_string(i), "noise levels must be positive");
      sweep.push_back(e(i));
    }
  }
  const OutputNames outputs = load_outputs(doc, doc.find(root, "outputs"));

  if (gp.game.has_potential()) {
    // Declared potentials must be gradients of the payoff field.
    Rng rng(mix_seed(seed, 0x70));
    const BayesianStrategy probe(0.5 * random_strategy(*types, n, rng.next()).rows() +
                                 0.5 * BayesianStrategy::uniform(k, n).rows());
    const PotentialGradientCheck chk = check_potential_gradient(gp.game, *types, probe, 100, rng.next());
    if (chk.max_residual > 1e-6)
      doc.fail("/game/potential", "declared potential fails the gradient check (residual " +
                                      std::to_string(chk.max_residual) + " > 1e-6)");
  }

  root["seed"] = seed;
  return Scenario{name,   *types, gp.game, reg,     epsilon,      integrator, solver,
                  seed,   initial, starts, sweep,   outputs,      root.dump()};
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario_string(ss.str(), path);
}

}  // namespace rbbr
