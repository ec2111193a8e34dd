#include "rill/experiments/run_record.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "rill/errors.hpp"

namespace rill::experiments {

using nlohmann::json;

std::string git_blob_sha1(const std::string& text) {
  const std::string payload = "blob " + std::to_string(text.size()) + '\0' + text;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(payload.data(), payload.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw ConfigError("SHA-1 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return hex.str();
}

RunRecord make_record(const RawConfig& cfg, const RunOutcome& o, double wall_time_s) {
  return {to_text(cfg), o.seed, o.task, o.method, o.history, o.final_metrics, wall_time_s, git_blob_sha1(o.kb_text)};
}

std::string to_json(const RunRecord& r) {
  json history = json::array();
  for (const auto& m : r.history) {
    history.push_back({{"epoch", m.epoch},
                       {"lr", m.lr},
                       {"task_loss", m.task_loss},
                       {"logic_loss", m.logic_loss},
                       {"accuracy", m.accuracy},
                       {"frequency", m.frequency}});
  }
  const json j = {{"format", "rill-run-record"},
                  {"version", 1},
                  {"config", r.config_text},
                  {"seed", r.seed},
                  {"task", r.task},
                  {"method", r.method},
                  {"history", history},
                  {"final", r.final_metrics},
                  {"wall_time_s", r.wall_time_s},
                  {"kb_sha1", r.kb_sha1}};
  return j.dump(2);
}

RunRecord record_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "rill-run-record" || j.at("version") != 1) throw FormatError("not a version-1 run record");
    RunRecord r;
    r.config_text = j.at("config").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.task = j.at("task").get<std::string>();
    r.method = j.at("method").get<std::string>();
    for (const auto& h : j.at("history")) {
      learner::EpochMetrics m;
      m.epoch = h.at("epoch").get<int>();
      m.lr = h.at("lr").get<double>();
      m.task_loss = h.at("task_loss").get<double>();
      m.logic_loss = h.at("logic_loss").get<double>();
      m.accuracy = h.at("accuracy").get<std::vector<double>>();
      m.frequency = h.at("frequency").get<std::vector<std::vector<double>>>();
      r.history.push_back(std::move(m));
    }
    r.final_metrics = j.at("final").get<std::map<std::string, double>>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.kb_sha1 = j.at("kb_sha1").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad run record: ") + e.what());
  }
}

void save_record(const std::string& path, const RunRecord& r) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << to_json(r) << '\n';
}

RunRecord load_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return record_from_json(ss.str());
}

ReplayResult replay(const RunRecord& r) {
  ReplayResult res;
  res.outcome = run_experiment(with_defaults(parse_config(r.config_text)));
  if (res.outcome.final_metrics != r.final_metrics) res.differences.push_back("final metrics differ");
  if (res.outcome.history.size() != r.history.size()) {
    res.differences.push_back("epoch count differs");
  } else {
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      const auto& a = res.outcome.history[i];
      const auto& b = r.history[i];
      if (a.task_loss != b.task_loss || a.logic_loss != b.logic_loss || a.accuracy != b.accuracy ||
          a.frequency != b.frequency || a.lr != b.lr) {
        res.differences.push_back("epoch " + std::to_string(i) + " differs");
      }
    }
  }
  if (git_blob_sha1(res.outcome.kb_text) != r.kb_sha1) res.differences.push_back("knowledge base hash differs");
  res.identical = res.differences.empty();
  return res;
}

}  // namespace rill::experiments
