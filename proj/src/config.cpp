#include "fdident/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "fdident/csvio.hpp"

namespace fdident {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return it.key() == a; }) == allowed.end()) {
      fail(join_path(path, it.key()), "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(join_path(path, key), "missing required field");
  return *it;
}

const json* optional(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path, "expected an integer");
  return v.get<long long>();
}

std::uint64_t as_seed(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const long long s = v.get<long long>();
    if (s < 0) fail(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(s);
  }
  fail(path, "expected a nonnegative integer");
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_number_array(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

TransferFunction parse_tf(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object with num and den");
  check_keys(v, path, {"num", "den"});
  std::vector<double> num = as_number_array(require(v, path, "num"), path + ".num");
  std::vector<double> den = as_number_array(require(v, path, "den"), path + ".den");
  if (den[0] == 0.0) fail(path + ".den", "leading denominator coefficient must be nonzero");
  return {std::move(num), std::move(den)};
}

int line_of_offset(const std::string& text, std::size_t offset) {
  const std::size_t end = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
}

json tf_json(const TransferFunction& tf) {
  return json{{"num", tf.num}, {"den", tf.den}};
}

}  // namespace

ExcitationSignal RunConfig::excitation() const {
  if (excitation_kind == "prbs") return prbs(register_length, amplitude, lfsr_seed);
  return custom_signal(samples);
}

ExcitationSignal RunConfig::routed_r1() const {
  return channel == "r1" ? excitation() : ExcitationSignal{};
}

ExcitationSignal RunConfig::routed_r2() const {
  return channel == "r2" ? excitation() : ExcitationSignal{};
}

McConfig RunConfig::mc_config() const {
  McConfig mc;
  mc.runs = runs;
  mc.sigma = sigma;
  mc.base_seed = base_seed;
  mc.estimators = estimators;
  mc.pairing = pairing;
  mc.distribution = distribution;
  return mc;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    fail(origin, "parse error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                     e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  check_keys(root, "",
             {"system", "excitation", "noise", "mc", "estimators", "settle_periods", "out_dir"});

  RunConfig cfg;

  {
    const json& sys = require(root, "", "system");
    if (!sys.is_object()) fail("system", "expected an object");
    check_keys(sys, "system", {"plant", "controller", "noise_model"});
    cfg.sys.plant = parse_tf(require(sys, "system", "plant"), "system.plant");
    cfg.sys.controller = parse_tf(require(sys, "system", "controller"), "system.controller");
    cfg.sys.noise_model = parse_tf(require(sys, "system", "noise_model"), "system.noise_model");
  }

  {
    const json& exc = require(root, "", "excitation");
    if (!exc.is_object()) fail("excitation", "expected an object");
    check_keys(exc, "excitation",
               {"kind", "register_length", "amplitude", "lfsr_seed", "channel", "samples"});
    cfg.excitation_kind = as_string(require(exc, "excitation", "kind"), "excitation.kind");
    if (cfg.excitation_kind != "prbs" && cfg.excitation_kind != "custom") {
      fail("excitation.kind", "must be prbs or custom, got '" + cfg.excitation_kind + "'");
    }
    if (cfg.excitation_kind == "prbs") {
      if (optional(exc, "samples")) fail("excitation.samples", "only valid for kind custom");
      const long long reg =
          as_integer(require(exc, "excitation", "register_length"), "excitation.register_length");
      if (reg < 2 || reg > 16) fail("excitation.register_length", "must be in [2,16]");
      cfg.register_length = static_cast<int>(reg);
      if (const json* v = optional(exc, "amplitude")) {
        cfg.amplitude = as_number(*v, "excitation.amplitude");
        if (!(cfg.amplitude > 0.0)) fail("excitation.amplitude", "must be > 0");
      }
      if (const json* v = optional(exc, "lfsr_seed")) {
        const long long seed = as_integer(*v, "excitation.lfsr_seed");
        if (seed < 1) fail("excitation.lfsr_seed", "must be >= 1");
        cfg.lfsr_seed = static_cast<unsigned>(seed);
      }
    } else {
      for (const char* key : {"register_length", "amplitude", "lfsr_seed"}) {
        if (optional(exc, key)) {
          fail(join_path("excitation", key), "only valid for kind prbs");
        }
      }
      cfg.samples = as_number_array(require(exc, "excitation", "samples"), "excitation.samples");
    }
    if (const json* v = optional(exc, "channel")) {
      cfg.channel = as_string(*v, "excitation.channel");
      if (cfg.channel != "r1" && cfg.channel != "r2") {
        fail("excitation.channel", "must be r1 or r2, got '" + cfg.channel + "'");
      }
    }
  }

  {
    const json& noise = require(root, "", "noise");
    if (!noise.is_object()) fail("noise", "expected an object");
    check_keys(noise, "noise", {"sigma", "distribution", "base_seed"});
    cfg.sigma = as_number(require(noise, "noise", "sigma"), "noise.sigma");
    if (!(cfg.sigma >= 0.0)) fail("noise.sigma", "must be >= 0");
    if (const json* v = optional(noise, "distribution")) {
      try {
        cfg.distribution = distribution_from_string(as_string(*v, "noise.distribution"));
      } catch (const std::invalid_argument& e) {
        fail("noise.distribution", e.what());
      }
    }
    if (const json* v = optional(noise, "base_seed")) {
      cfg.base_seed = as_seed(*v, "noise.base_seed");
    }
  }

  if (const json* mc = optional(root, "mc")) {
    if (!mc->is_object()) fail("mc", "expected an object");
    check_keys(*mc, "mc", {"runs", "pairing"});
    if (const json* v = optional(*mc, "runs")) {
      const long long runs = as_integer(*v, "mc.runs");
      if (runs < 2) fail("mc.runs", "must be >= 2");
      cfg.runs = static_cast<int>(runs);
    }
    if (const json* v = optional(*mc, "pairing")) {
      try {
        cfg.pairing = pairing_from_string(as_string(*v, "mc.pairing"));
      } catch (const std::invalid_argument& e) {
        fail("mc.pairing", e.what());
      }
    }
  }

  if (const json* est = optional(root, "estimators")) {
    if (!est->is_array() || est->empty()) fail("estimators", "expected a nonempty array of tags");
    cfg.estimators.clear();
    for (std::size_t i = 0; i < est->size(); ++i) {
      const std::string path = "estimators[" + std::to_string(i) + "]";
      const std::string tag = as_string((*est)[i], path);
      try {
        experiments_needed(tag);
      } catch (const std::invalid_argument& e) {
        fail(path, e.what());
      }
      if (std::find(cfg.estimators.begin(), cfg.estimators.end(), tag) != cfg.estimators.end()) {
        fail(path, "duplicate estimator tag '" + tag + "'");
      }
      cfg.estimators.push_back(tag);
    }
  }
  for (const auto& tag : cfg.estimators) {
    if (experiments_needed(tag) > experiments_per_run(cfg.pairing)) {
      fail("estimators", "tag '" + tag + "' needs " + std::to_string(experiments_needed(tag)) +
                             " experiments per run, pairing '" + to_string(cfg.pairing) +
                             "' provides " + std::to_string(experiments_per_run(cfg.pairing)));
    }
  }

  if (const json* v = optional(root, "settle_periods")) {
    const long long settle = as_integer(*v, "settle_periods");
    if (settle < 1) fail("settle_periods", "must be >= 1");
    cfg.settle_periods = static_cast<int>(settle);
  }

  if (const json* v = optional(root, "out_dir")) {
    cfg.out_dir = as_string(*v, "out_dir");
    if (cfg.out_dir.empty()) fail("out_dir", "must be nonempty");
  }

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string effective_config(const RunConfig& cfg) {
  json exc{{"kind", cfg.excitation_kind}, {"channel", cfg.channel}};
  if (cfg.excitation_kind == "prbs") {
    exc["register_length"] = cfg.register_length;
    exc["amplitude"] = cfg.amplitude;
    exc["lfsr_seed"] = cfg.lfsr_seed;
  } else {
    exc["samples"] = cfg.samples;
  }

  const json root{
      {"system",
       {{"plant", tf_json(cfg.sys.plant)},
        {"controller", tf_json(cfg.sys.controller)},
        {"noise_model", tf_json(cfg.sys.noise_model)}}},
      {"excitation", exc},
      {"noise",
       {{"sigma", cfg.sigma},
        {"distribution", to_string(cfg.distribution)},
        {"base_seed", cfg.base_seed}}},
      {"mc", {{"runs", cfg.runs}, {"pairing", to_string(cfg.pairing)}}},
      {"estimators", cfg.estimators},
      {"settle_periods", cfg.settle_periods},
  };
  return root.dump();
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(effective_config(cfg)); }

}  // namespace fdident
