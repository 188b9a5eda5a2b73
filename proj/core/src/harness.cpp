#include "mlab/harness.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "experiments.hpp"
#include "mlab/errors.hpp"

#ifndef MLAB_VERSION
#define MLAB_VERSION "0.0.0"
#endif

namespace mlab::harness {

namespace fs = std::filesystem;
using nlohmann::json;

const char* toolkit_version() { return MLAB_VERSION; }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : detail::registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Recorded: return "RECORDED";
  }
  return "FAIL";
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw precondition_error("config must be a JSON object");
  static const char* known[] = {"experiment", "name", "seed", "params", "outDir", "toleranceScale", "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw precondition_error("unknown config key: " + key);
  }
  ExperimentConfig c;
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw precondition_error("config needs a string field \"experiment\"");
  c.experiment = j["experiment"].get<std::string>();
  if (!detail::find_experiment(c.experiment)) throw precondition_error("unknown experiment: " + c.experiment);
  c.name = c.experiment;
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty())
      throw precondition_error("\"name\" must be a nonempty string");
    c.name = j["name"].get<std::string>();
    if (c.name.find('/') != std::string::npos) throw precondition_error("\"name\" must not contain '/'");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw precondition_error("\"seed\" must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw precondition_error("\"params\" must be an object");
    c.params = j["params"];
  }
  if (j.contains("outDir")) {
    if (!j["outDir"].is_string()) throw precondition_error("\"outDir\" must be a string");
    c.out_dir = j["outDir"].get<std::string>();
  }
  if (j.contains("toleranceScale")) {
    if (!j["toleranceScale"].is_number() || !(j["toleranceScale"].get<double>() > 0))
      throw precondition_error("\"toleranceScale\" must be a positive number");
    c.tolerance_scale = j["toleranceScale"].get<double>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer() || j["threads"].get<int>() < 1)
      throw precondition_error("\"threads\" must be a positive integer");
    c.threads = j["threads"].get<int>();
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"experiment", c.experiment},
              {"name", c.name},
              {"seed", c.seed},
              {"params", c.params},
              {"outDir", c.out_dir.string()},
              {"toleranceScale", c.tolerance_scale},
              {"threads", c.threads}};
}

static json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw syntax_error(path.string() + ": " + e.what(), e.byte);
  }
}

ExperimentConfig load_config(const fs::path& path) { return config_from_json(read_json_file(path)); }

json ExperimentReport::to_json() const {
  const auto* info = detail::find_experiment(config.experiment);
  json j{{"schemaVersion", kSchemaVersion},
         {"experiment", config.experiment},
         {"anchor", info ? info->anchor : ""},
         {"config", config_to_json(config)},
         {"cases", cases},
         {"summary", summary},
         {"verdict", harness::to_string(verdict)},
         {"wallTime", wall_time},
         {"seed", config.seed},
         {"toolkitVersion", toolkit_version()}};
  if (!error.empty()) j["error"] = error;
  return j;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  static std::atomic<unsigned> counter{0};
  std::ostringstream tag;
  tag << ".tmp." << std::this_thread::get_id() << '.' << counter.fetch_add(1);
  fs::path tmp = path;
  tmp += tag.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

static std::string csv_text(const detail::Table& t) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool write) {
  ExperimentReport rep;
  rep.config = config;
  const auto* info = detail::find_experiment(config.experiment);
  detail::Context ctx(config);
  auto t0 = std::chrono::steady_clock::now();
  if (!info) {
    rep.error = "unknown experiment: " + config.experiment;
  } else {
    try {
      rep.verdict = info->run(ctx);
    } catch (const precondition_error& e) {
      rep.verdict = Verdict::Fail;
      rep.error = std::string("precondition violated: ") + e.what();
    } catch (const std::exception& e) {
      rep.verdict = Verdict::Fail;
      rep.error = e.what();
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.summary = std::move(ctx.summary);
  rep.cases = std::move(ctx.cases);
  if (write) {
    for (const auto& t : ctx.tables) {
      fs::path p = config.out_dir / (config.name + "." + t.name + ".csv");
      write_atomic(p, csv_text(t));
      rep.files.push_back(p);
    }
    fs::path p = config.out_dir / (config.name + ".json");
    json j = rep.to_json();
    json files = json::array();
    for (const auto& f : rep.files) files.push_back(f.filename().string());
    j["files"] = files;
    write_atomic(p, j.dump(2) + "\n");
    rep.files.push_back(p);
  }
  return rep;
}

std::vector<ExperimentConfig> load_manifest(const fs::path& path, const SuiteOverrides& o) {
  json j = read_json_file(path);
  const json* list = &j;
  if (j.is_object()) {
    if (!j.contains("experiments")) throw precondition_error("manifest needs an \"experiments\" array");
    list = &j["experiments"];
  }
  if (!list->is_array()) throw precondition_error("manifest experiments must be an array");
  if (list->empty()) throw precondition_error("manifest is empty");
  std::vector<ExperimentConfig> out;
  for (const auto& item : *list) {
    ExperimentConfig c = config_from_json(item);
    if (o.seed) c.seed = *o.seed;
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (o.tolerance_scale) c.tolerance_scale = *o.tolerance_scale;
    c.threads = std::max(1, o.threads);
    out.push_back(std::move(c));
  }
  return out;
}

SuiteSummary run_suite(const std::vector<ExperimentConfig>& manifest, int threads, bool write) {
  if (manifest.empty()) throw precondition_error("manifest is empty");
  SuiteSummary s;
  s.reports.resize(manifest.size());
  detail::parallel_for(manifest.size(), threads,
                       [&](std::size_t i) { s.reports[i] = run_experiment(manifest[i], write); });
  for (const auto& r : s.reports) s.any_fail = s.any_fail || r.verdict == Verdict::Fail;
  return s;
}

}  // namespace mlab::harness
