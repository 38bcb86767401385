#include "muscu/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "muscu/error.hpp"
#include "muscu/stability.hpp"

namespace muscu::cli {

using nlohmann::json;

namespace {

class ExprParser {
public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = expr();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("bad expression \"" + std::string(text_) + "\": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (accept('+'))
        v += term();
      else if (accept('-'))
        v -= term();
      else
        return v;
    }
  }

  bool starts_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      return false;
    const char c = text_[pos_];
    return c == '(' || std::isalpha(static_cast<unsigned char>(c));
  }

  double term() {
    double v = unary();
    for (;;) {
      if (accept('*'))
        v *= unary();
      else if (accept('/'))
        v /= unary();
      else if (starts_primary())
        v *= primary();
      else
        return v;
    }
  }

  double unary() {
    if (accept('-'))
      return -unary();
    if (accept('+'))
      return unary();
    return primary();
  }

  double primary() {
    skip_ws();
    if (accept('(')) {
      const double v = expr();
      if (!accept(')'))
        fail("missing ')'");
      return v;
    }
    if (accept_word("pi"))
      return std::numbers::pi;
    if (accept_word("sqrt")) {
      if (!accept('('))
        fail("sqrt needs '('");
      const double v = expr();
      if (!accept(')'))
        fail("missing ')'");
      return std::sqrt(v);
    }
    return number();
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(std::string(text_.substr(pos_)), &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    // std::stod also accepts "inf"/"nan"; only plain decimals are numbers here.
    if (!std::isdigit(static_cast<unsigned char>(*begin)) && *begin != '.')
      fail("expected a number");
    pos_ += used;
    return v;
  }
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Field access that reports failures as ConfigError naming the field path.
class Reader {
public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      throw ConfigError(path_, "must be an object");
  }

  bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  void allow_only(std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    allowed.insert("notes");
    for (const auto& [key, _] : obj_.items())
      if (!allowed.count(key))
        throw ConfigError(field(key.c_str()), "unknown field");
  }

  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& at(const char* key) const {
    if (!has(key))
      throw ConfigError(field(key), "missing required field");
    return obj_.at(key);
  }

  double scalar(const char* key) const {
    const json& v = at(key);
    double out = 0;
    try {
      if (v.is_number())
        out = v.get<double>();
      else if (v.is_string())
        out = eval_expression(v.get<std::string>());
      else
        throw std::invalid_argument("expected a number or arithmetic string");
    } catch (const std::exception& e) {
      throw ConfigError(field(key), e.what());
    }
    if (!std::isfinite(out))
      throw ConfigError(field(key), "must be finite");
    return out;
  }

  double angle(const char* key) const {
    const json& v = at(key);
    if (!v.is_string())
      throw ConfigError(field(key), "angles need a unit tag, e.g. \"pi/12\", \"15 deg\", \"0.26 rad\"");
    try {
      return parse_angle(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string())
      throw ConfigError(field(key), "must be a string");
    return v.get<std::string>();
  }

  Reader child(const char* key) const { return Reader(at(key), field(key)); }

private:
  const json& obj_;
  std::string path_;
};

SystemParams read_geometry(const Reader& g) {
  g.allow_only({"unit", "L0", "L1", "b1", "b2", "d1", "d2", "ell1", "ell2", "r1", "r2", "s1", "s2"});
  const std::string unit = g.string("unit");
  double scale = 0;
  if (unit == "mm")
    scale = 1e-3;
  else if (unit == "m")
    scale = 1.0;
  else
    throw ConfigError(g.field("unit"), "must be \"mm\" or \"m\"");

  SystemParams p;
  p.L0 = g.scalar("L0") * scale;
  p.L1 = g.scalar("L1") * scale;
  p.b1 = g.scalar("b1") * scale;
  p.b2 = g.scalar("b2") * scale;
  p.d1 = g.scalar("d1") * scale;
  p.d2 = g.scalar("d2") * scale;
  p.ell1 = g.scalar("ell1") * scale;
  p.ell2 = g.scalar("ell2") * scale;
  p.r1 = g.scalar("r1") * scale;
  p.r2 = g.scalar("r2") * scale;
  p.s1 = g.scalar("s1") * scale;
  p.s2 = g.scalar("s2") * scale;
  return p;
}

}  // namespace

double eval_expression(std::string_view text) { return ExprParser(text).parse(); }

double parse_angle(std::string_view text) {
  const std::string s = trim(text);
  if (ends_with(s, "deg"))
    return eval_expression(std::string_view(s).substr(0, s.size() - 3)) * std::numbers::pi / 180.0;
  if (ends_with(s, "rad"))
    return eval_expression(std::string_view(s).substr(0, s.size() - 3));
  if (s.find("pi") != std::string::npos)
    return eval_expression(s);
  throw std::invalid_argument("angle \"" + s + "\" has no unit (use a multiple of pi, or a deg/rad suffix)");
}

ScenarioConfig parse_config(const json& doc) {
  const Reader root(doc, "");
  root.allow_only({"schema_version", "name", "geometry", "dynamics", "simulation", "stability"});
  const json& version = root.at("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw ConfigError("schema_version", "expected " + std::to_string(kSchemaVersion));

  ScenarioConfig cfg;
  cfg.document = doc;
  cfg.name = root.has("name") ? root.string("name") : std::string("unnamed");
  cfg.geometry = read_geometry(root.child("geometry"));

  const Reader d = root.child("dynamics");
  d.allow_only({"inertia", "viscosity", "gain", "tensions", "tension_tolerance", "theta_d", "epsilon",
                "theta_min", "theta_max"});
  cfg.dyn.inertia = d.scalar("inertia");
  cfg.dyn.viscosity = d.scalar("viscosity");
  cfg.dyn.theta_d = d.angle("theta_d");
  cfg.dyn.theta_min = d.angle("theta_min");
  cfg.dyn.theta_max = d.angle("theta_max");
  if (d.has("epsilon"))
    cfg.dyn.epsilon = d.scalar("epsilon");
  if (d.has("gain") == d.has("tensions"))
    throw ConfigError("dynamics.gain", "give exactly one of \"gain\" and \"tensions\"");
  if (d.has("tension_tolerance")) {
    cfg.tension_tolerance = d.scalar("tension_tolerance");
    if (!(cfg.tension_tolerance > 0))
      throw ConfigError("dynamics.tension_tolerance", "must be positive");
  }

  // Geometry is validated here so that a bad length is reported before
  // anything downstream tries to use the model.
  const MuscleModel model(cfg.geometry);

  if (d.has("gain")) {
    cfg.dyn.gain = d.scalar("gain");
  } else {
    const Reader t = d.child("tensions");
    t.allow_only({"unit", "v1", "v2"});
    if (t.string("unit") != "N")
      throw ConfigError(t.field("unit"), "must be \"N\"");
    cfg.tensions = InternalForce{t.scalar("v1"), t.scalar("v2")};
    if (!cfg.tensions->realizable())
      throw ConfigError("dynamics.tensions", "both tensions must be positive");
    cfg.dyn.gain = gain_from_tensions(model, cfg.dyn.theta_d, *cfg.tensions, cfg.tension_tolerance);
  }
  validate(cfg.dyn);

  if (root.has("simulation")) {
    const Reader s = root.child("simulation");
    s.allow_only({"theta_init", "omega_init", "dt", "t_final"});
    SimulationBlock sim;
    sim.theta_init = s.angle("theta_init");
    sim.omega_init = s.has("omega_init") ? s.scalar("omega_init") : 0.0;
    if (s.has("dt"))
      sim.dt = s.scalar("dt");
    sim.t_final = s.scalar("t_final");
    if (!(sim.dt > 0))
      throw ConfigError("simulation.dt", "must be positive");
    if (!(sim.t_final >= 0))
      throw ConfigError("simulation.t_final", "must be non-negative");
    cfg.simulation = sim;
  }

  if (root.has("stability")) {
    const Reader st = root.child("stability");
    st.allow_only({"theta0"});
    if (st.has("theta0")) {
      cfg.theta0 = st.angle("theta0");
      validate_theta0(model, *cfg.theta0);
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::string config_echo(const ScenarioConfig& cfg) { return cfg.document.dump(); }

}  // namespace muscu::cli
