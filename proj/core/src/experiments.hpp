#pragma once

// Experiment registry used by the harness. Not installed.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlab/harness.hpp"

namespace mlab::harness::detail {

struct Table {
  std::string name;  // file name without directory
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

class Context {
 public:
  explicit Context(const ExperimentConfig& cfg) : cfg_(cfg) {}

  const ExperimentConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return cfg_.seed; }
  int threads() const { return std::max(1, cfg_.threads); }
  double tol(double base) const { return base * cfg_.tolerance_scale; }

  bool has(const char* key) const { return cfg_.params.contains(key); }
  const nlohmann::json& at(const char* key) const { return cfg_.params.at(key); }
  double num(const char* key, double def) const;
  int integer(const char* key, int def) const;
  std::vector<double> vec(const char* key, std::vector<double> def) const;
  // Either a list of values or {"log10Min", "log10Max", "count"}.
  std::vector<double> grid(const char* key, double log10_min, double log10_max, std::size_t count) const;

  Table& table(std::string name, std::vector<std::string> header);
  void add_case(nlohmann::json c) { cases.push_back(std::move(c)); }

  nlohmann::json cases = nlohmann::json::array();
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Table> tables;

 private:
  const ExperimentConfig& cfg_;
};

using Runner = std::function<Verdict(Context&)>;

struct ExperimentInfo {
  std::string name;
  std::string anchor;  // what the experiment exercises
  Runner run;
};

const std::vector<ExperimentInfo>& registry();
const ExperimentInfo* find_experiment(const std::string& name);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mlab::harness::detail
