#include "rill/experiments/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rill/errors.hpp"

namespace rill::experiments {
namespace {

struct KeyDefault {
  const char* section;
  const char* key;
  const char* value;
};

// The schema. Anything not listed here is rejected.
const KeyDefault kSchema[] = {
    {"run", "task", "addition"},
    {"run", "seed", "2020"},
    {"run", "method", "fuzzy"},

    {"train", "epochs", "30"},
    {"train", "batch_size", "32"},
    {"train", "labelled_batch", "32"},
    {"train", "lambda", "0.7"},
    {"train", "semantic_lambda", "0.5"},
    {"train", "operator", "reichenbach"},
    {"train", "epsilon", "0.1"},
    {"train", "optimizer", "adamw"},
    {"train", "lr", "0.001"},
    {"train", "beta1", "0.9"},
    {"train", "beta2", "0.999"},
    {"train", "weight_decay", "0.0005"},
    {"train", "momentum", "0.9"},
    {"train", "schedule", "step"},
    {"train", "decay_rate", "0.7"},
    {"train", "decay_step", "60"},
    {"train", "warmup_epochs", "5"},
    {"train", "hidden", "64"},

    {"case_study", "n_per_cluster", "200"},
    {"case_study", "spread", "0.35"},
    {"case_study", "train_fraction", "0.25"},
    {"case_study", "pretrain_epochs", "30"},
    {"case_study", "rule", "forall x: Blue(x) -> Circle(x)"},

    {"addition", "base", "blobs"},
    {"addition", "dim", "16"},
    {"addition", "margin", "4.0"},
    {"addition", "spread", "1.0"},
    {"addition", "train_groups", "2000"},
    {"addition", "test_per_class", "200"},
    {"addition", "labelled_per_class", "10"},
    {"addition", "completeness", "1.0"},
    {"addition", "clark", "none"},
    {"addition", "mnist_train_images", ""},
    {"addition", "mnist_train_labels", ""},
    {"addition", "mnist_test_images", ""},
    {"addition", "mnist_test_labels", ""},

    {"hierarchy", "super_classes", "5"},
    {"hierarchy", "sub_classes", "4"},
    {"hierarchy", "dim", "16"},
    {"hierarchy", "super_margin", "4.0"},
    {"hierarchy", "sub_margin", "1.5"},
    {"hierarchy", "spread", "1.0"},
    {"hierarchy", "train_per_class", "40"},
    {"hierarchy", "test_per_class", "50"},
    {"hierarchy", "labelled_per_class", "5"},

    {"sweep", "methods", "fuzzy,rill_hinge"},
    {"sweep", "seeds", "2020,2021,2022,2023,2024"},
    {"sweep", "completeness", "0.4,0.6,0.8,1.0"},
    {"sweep", "epsilons", "0.01,0.05,0.1,0.2,0.3"},
    {"sweep", "counts", "10,5,3,1"},
    {"sweep", "threads", "0"},
};

bool in_schema(const std::string& section, const std::string& key) {
  return std::any_of(std::begin(kSchema), std::end(kSchema),
                     [&](const KeyDefault& k) { return section == k.section && key == k.key; });
}

bool section_known(const std::string& section) {
  return std::any_of(std::begin(kSchema), std::end(kSchema), [&](const KeyDefault& k) { return section == k.section; });
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& v, const std::string& where) {
  std::istringstream in(v);
  double d = 0;
  if (!(in >> d) || !(in >> std::ws).eof()) throw ConfigError(where + ": expected a number, got '" + v + "'");
  return d;
}

std::int64_t to_int(const std::string& v, const std::string& where) {
  std::istringstream in(v);
  std::int64_t i = 0;
  if (!(in >> i) || !(in >> std::ws).eof()) throw ConfigError(where + ": expected an integer, got '" + v + "'");
  return i;
}

}  // namespace

RawConfig parse_config(const std::string& text) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!section_known(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (!in_schema(section, key)) throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    cfg[section][key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

RawConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RawConfig with_defaults(const RawConfig& overrides) {
  RawConfig cfg;
  for (const KeyDefault& k : kSchema) cfg[k.section][k.key] = k.value;
  for (const auto& [section, kv] : overrides) {
    for (const auto& [key, value] : kv) set_value(cfg, section, key, value);
  }
  return cfg;
}

std::string to_text(const RawConfig& cfg) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, kv] : cfg) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
  }
  return out.str();
}

void set_value(RawConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  if (!in_schema(section, key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  cfg[section][key] = value;
}

const std::string& get_value(const RawConfig& cfg, const std::string& section, const std::string& key) {
  auto s = cfg.find(section);
  if (s != cfg.end()) {
    auto k = s->second.find(key);
    if (k != s->second.end()) return k->second;
  }
  throw ConfigError("missing config key [" + section + "] " + key);
}

double get_double(const RawConfig& cfg, const std::string& section, const std::string& key) {
  return to_double(get_value(cfg, section, key), section + "." + key);
}

std::int64_t get_int(const RawConfig& cfg, const std::string& section, const std::string& key) {
  return to_int(get_value(cfg, section, key), section + "." + key);
}

std::vector<double> get_doubles(const RawConfig& cfg, const std::string& section, const std::string& key) {
  std::vector<double> out;
  for (const auto& s : split_list(get_value(cfg, section, key))) out.push_back(to_double(s, section + "." + key));
  return out;
}

std::vector<std::int64_t> get_ints(const RawConfig& cfg, const std::string& section, const std::string& key) {
  std::vector<std::int64_t> out;
  for (const auto& s : split_list(get_value(cfg, section, key))) out.push_back(to_int(s, section + "." + key));
  return out;
}

std::vector<std::string> get_strings(const RawConfig& cfg, const std::string& section, const std::string& key) {
  return split_list(get_value(cfg, section, key));
}

std::vector<std::size_t> hidden_widths(const RawConfig& cfg) {
  std::vector<std::size_t> out;
  for (std::int64_t w : get_ints(cfg, "train", "hidden")) {
    if (w <= 0) throw ConfigError("train.hidden widths must be positive");
    out.push_back(static_cast<std::size_t>(w));
  }
  if (out.empty()) throw ConfigError("train.hidden needs at least one width");
  return out;
}

learner::TrainConfig train_config(const RawConfig& cfg, const std::string& method, std::uint64_t seed) {
  learner::TrainConfig t;
  auto positive = [&](const char* key) {
    const std::int64_t v = get_int(cfg, "train", key);
    if (v <= 0) throw ConfigError(std::string("train.") + key + " must be positive");
    return static_cast<std::size_t>(v);
  };
  t.epochs = positive("epochs");
  t.batch_size = positive("batch_size");
  const std::int64_t lb = get_int(cfg, "train", "labelled_batch");
  if (lb < 0) throw ConfigError("train.labelled_batch must be non-negative");
  t.labelled_batch = static_cast<std::size_t>(lb);
  t.seed = seed;
  t.lambda = get_double(cfg, "train", "lambda");
  t.op = fuzzy::parse_operator(get_value(cfg, "train", "operator"));

  const double lr = get_double(cfg, "train", "lr");
  const std::string& opt = get_value(cfg, "train", "optimizer");
  if (opt == "adamw") {
    t.optimizer = learner::AdamW{lr, get_double(cfg, "train", "beta1"), get_double(cfg, "train", "beta2"), 1e-8,
                                 get_double(cfg, "train", "weight_decay")};
  } else if (opt == "sgd") {
    t.optimizer = learner::MomentumSGD{lr, get_double(cfg, "train", "momentum")};
  } else {
    throw ConfigError("train.optimizer must be 'adamw' or 'sgd', got '" + opt + "'");
  }
  const std::string& sched = get_value(cfg, "train", "schedule");
  const double rate = get_double(cfg, "train", "decay_rate");
  const int step = static_cast<int>(get_int(cfg, "train", "decay_step"));
  if (sched == "step") {
    t.schedule = learner::StepDecay{rate, step};
  } else if (sched == "warmup") {
    t.schedule = learner::StepWithWarmup{rate, step, static_cast<int>(get_int(cfg, "train", "warmup_epochs"))};
  } else {
    throw ConfigError("train.schedule must be 'step' or 'warmup', got '" + sched + "'");
  }

  if (method == "vanilla") {
    t.lambda = 0.0;
  } else if (method == "fuzzy") {
    t.transform = loss::Identity{};
  } else if (method == "semantic") {
    t.logic = learner::LogicMode::Semantic;
    t.lambda = get_double(cfg, "train", "semantic_lambda");
  } else if (method == "rill_l2") {
    t.transform = loss::L2{};
  } else if (method == "rill_hinge") {
    t.transform = loss::parse_transform("hinge:" + get_value(cfg, "train", "epsilon"));
  } else if (method == "rill_l2hinge") {
    t.transform = loss::parse_transform("l2hinge:" + get_value(cfg, "train", "epsilon"));
  } else {
    throw ConfigError("unknown method '" + method + "'");
  }
  if (t.lambda < 0.0) throw ConfigError("lambda must be non-negative");
  learner::validate(t.optimizer);
  learner::validate(t.schedule);
  return t;
}

}  // namespace rill::experiments
