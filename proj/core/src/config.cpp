#include "cnc/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "cnc/error.hpp"

namespace cnc {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, std::size_t line) {
  double d = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ParseError(line, "expected a number, got '" + std::string(v) + "'");
  return d;
}

std::uint64_t to_uint(std::string_view v, std::size_t line) {
  std::uint64_t d = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(v) + "'");
  return d;
}

bool to_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(line, "expected a boolean, got '" + std::string(v) + "'");
}

std::string num(double d) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

}  // namespace

void PipelineConfig::validate() const {
  if (n.has_value() == input.has_value()) throw Error("config: set exactly one of n and input");
  if (n && *n == 0) throw Error("config: n must be positive");
  if (workers == 0) throw Error("config: workers must be at least 1");
  try {
    ptn_params.validate();
    rnd_params.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!(preselection > 0.0 && preselection <= 1.0)) throw Error("config: preselection must lie in (0, 1]");
  if (!(solver.var_decay > 0.0 && solver.var_decay < 1.0)) throw Error("config: var_decay must lie in (0, 1)");
  if (!(solver.clause_decay > 0.0 && solver.clause_decay < 1.0))
    throw Error("config: clause_decay must lie in (0, 1)");
  if (solver.restart_base == 0) throw Error("config: restart_base must be positive");
}

SplitOptions PipelineConfig::split_options(const CutoffPolicy& c) const {
  SplitOptions o;
  o.mode = mode;
  o.ptn_params = ptn_params;
  o.rnd_params = rnd_params;
  o.cutoff = c;
  o.preselection = preselection;
  return o;
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view v, std::size_t line) {
  auto policy = [&](std::string_view s) {
    try {
      return CutoffPolicy::parse(s);
    } catch (const std::exception& e) {
      throw ParseError(line, e.what());
    }
  };
  if (key == "n") {
    cfg.n = to_uint(v, line);
    cfg.input.reset();
  } else if (key == "input") {
    cfg.input = std::string(v);
    cfg.n.reset();
  } else if (key == "mode") {
    try {
      cfg.mode = parse_branch_mode(v);
    } catch (const std::exception& e) {
      throw ParseError(line, e.what());
    }
  } else if (key == "alpha") cfg.ptn_params.alpha = to_double(v, line);
  else if (key == "beta") cfg.ptn_params.beta = to_double(v, line);
  else if (key == "gamma") cfg.ptn_params.gamma = to_double(v, line);
  else if (key == "iterations") {
    cfg.ptn_params.iterations = static_cast<int>(to_uint(v, line));
    cfg.rnd_params.iterations = cfg.ptn_params.iterations;
  } else if (key == "rnd_alpha") cfg.rnd_params.alpha = to_double(v, line);
  else if (key == "rnd_beta") cfg.rnd_params.beta = to_double(v, line);
  else if (key == "rnd_gamma") cfg.rnd_params.gamma = to_double(v, line);
  else if (key == "preselection") cfg.preselection = to_double(v, line);
  else if (key == "cutoff") cfg.cutoff = policy(v);
  else if (key == "two_level") cfg.two_level = to_bool(v, line);
  else if (key == "sub_cutoff") cfg.sub_cutoff = policy(v);
  else if (key == "bce") cfg.generic_bce = to_bool(v, line);
  else if (key == "var_decay") cfg.solver.var_decay = to_double(v, line);
  else if (key == "clause_decay") cfg.solver.clause_decay = to_double(v, line);
  else if (key == "restart_base") cfg.solver.restart_base = to_uint(v, line);
  else if (key == "conflict_budget") cfg.solver.conflict_budget = to_uint(v, line);
  else if (key == "workers") cfg.workers = to_uint(v, line);
  else if (key == "skip_validation") cfg.skip_validation = to_bool(v, line);
  else if (key == "output_dir") cfg.output_dir = std::string(v);
  else throw ParseError(line, "unknown key '" + std::string(key) + "'");
}

void apply_config(std::istream& in, PipelineConfig& cfg) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    s = trim(s);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected key = value");
    auto key = trim(s.substr(0, eq));
    auto value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "empty key");
    apply_setting(cfg, key, value, line);
  }
}

void apply_config_file(const std::filesystem::path& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  apply_config(in, cfg);
}

void write_config(std::ostream& out, const PipelineConfig& cfg) {
  if (cfg.n) out << "n = " << *cfg.n << '\n';
  if (cfg.input) out << "input = " << *cfg.input << '\n';
  out << "mode = " << to_string(cfg.mode) << '\n'
      << "alpha = " << num(cfg.ptn_params.alpha) << '\n'
      << "beta = " << num(cfg.ptn_params.beta) << '\n'
      << "gamma = " << num(cfg.ptn_params.gamma) << '\n'
      << "iterations = " << cfg.ptn_params.iterations << '\n'
      << "rnd_alpha = " << num(cfg.rnd_params.alpha) << '\n'
      << "rnd_beta = " << num(cfg.rnd_params.beta) << '\n'
      << "rnd_gamma = " << num(cfg.rnd_params.gamma) << '\n'
      << "preselection = " << num(cfg.preselection) << '\n'
      << "cutoff = " << cfg.cutoff.to_string() << '\n'
      << "two_level = " << (cfg.two_level ? "true" : "false") << '\n'
      << "sub_cutoff = " << cfg.sub_cutoff.to_string() << '\n'
      << "bce = " << (cfg.generic_bce ? "true" : "false") << '\n'
      << "var_decay = " << num(cfg.solver.var_decay) << '\n'
      << "clause_decay = " << num(cfg.solver.clause_decay) << '\n'
      << "restart_base = " << cfg.solver.restart_base << '\n'
      << "conflict_budget = " << cfg.solver.conflict_budget << '\n'
      << "workers = " << cfg.workers << '\n'
      << "skip_validation = " << (cfg.skip_validation ? "true" : "false") << '\n';
  if (!cfg.output_dir.empty()) out << "output_dir = " << cfg.output_dir << '\n';
}

}  // namespace cnc
